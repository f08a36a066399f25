#include <doctest.h>

#include <cmath>

#include "msgate/corrections.hpp"
#include "oracles.hpp"

using namespace msgate;

namespace {

// gate parameters of the demonstrated gate
constexpr double kEta = 0.0041;
constexpr double kOmega0 = 45.4e3;
constexpr double kNu = 459.34e3;
constexpr double kDelta = 370.0;
constexpr double kMw = 21.0e3;

}  // namespace

TEST_SUITE("corrections") {

TEST_CASE("rf gate lightshift") {
  CHECK(rf_gate_lightshift(kEta, kOmega0, kMw, kDelta) == doctest::Approx(2.2).epsilon(0.10));
  const double e = kEta * kOmega0;
  CHECK(rf_gate_lightshift(kEta, kOmega0, kMw, 0.0) == doctest::Approx(e * e * std::sqrt(2.0) / kMw).epsilon(1e-14));
  CHECK(rf_gate_lightshift(0.0, kOmega0, kMw, kDelta) == 0.0);
  CHECK_THROWS_AS(rf_gate_lightshift(kEta, kOmega0, kMw, kMw / std::sqrt(2.0)), DomainError);
  CHECK_THROWS_AS(rf_gate_lightshift(kEta, kOmega0, kMw, kMw / std::sqrt(2.0) * (1.0 + 5e-4)), DomainError);
}

TEST_CASE("rf leakage") {
  CHECK(rf_leakage(kEta, kOmega0, kMw, kDelta) == doctest::Approx(0.05).epsilon(0.20));
  CHECK(rf_leakage(kEta, kOmega0, kMw, 0.0) == 0.0);
  CHECK_THROWS_AS(rf_leakage(kEta, kOmega0, kMw, kMw / std::sqrt(2.0)), DomainError);
  // leak < shift over a grid of valid inputs
  for (double eta : {0.001, 0.004, 0.01})
    for (double mw : {5e3, 21e3, 60e3})
      for (double frac : {0.0, 0.1, 0.5, 0.9}) {
        const double d = frac * mw / std::sqrt(2.0);
        CHECK(rf_leakage(eta, kOmega0, mw, d) < rf_gate_lightshift(eta, kOmega0, mw, d));
      }
}

TEST_CASE("microwave leakage") {
  const MwLeakage m = mw_leakage(kEta, kNu, kMw);
  CHECK(m.g == doctest::Approx(3.8).epsilon(0.05));
  CHECK(m.lightshift == doctest::Approx(-2.0 * m.g));
  // small dressing limit
  const MwLeakage small = mw_leakage(kEta, kNu, 1.0);
  CHECK(small.g == doctest::Approx(kEta * kEta * kNu / 2.0).epsilon(1e-9));
  CHECK(mw_leakage(0.0, kNu, kMw).g == 0.0);
  CHECK_THROWS_AS(mw_leakage(kEta, kNu, std::sqrt(2.0) * kNu), DomainError);
}

TEST_CASE("phonon lightshift") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  const double mw = p.omega_mw_mean();
  // regression with the assumed second-order splittings
  CHECK(phonon_lightshift(p.eta, p.omega_0, mw, p.Delta1) == doctest::Approx(0.7).epsilon(0.05));
  CHECK(phonon_lightshift(p.eta, p.omega_0, mw, p.Delta2) == doctest::Approx(0.3).epsilon(0.05));
  CHECK(phonon_lightshift(p.eta, p.omega_0, mw, 0.0) == 0.0);
  for (double d : {100.0, 3e3, 9e3})
    CHECK(phonon_lightshift(p.eta, p.omega_0, mw, -d) == doctest::Approx(-phonon_lightshift(p.eta, p.omega_0, mw, d)));
  CHECK_THROWS_AS(phonon_lightshift(p.eta, p.omega_0, mw, mw / std::sqrt(2.0)), DomainError);
}

TEST_CASE("rf minus-one carrier shift") {
  // the approximation is the traceless part: c sigma_z + b|0'><0'| = (c - b/2) sigma_z + b/2
  for (double d : {10.0, 50.0, 500.0}) {
    const RfMinus1Shift s = rf_minus1_shift(kOmega0, kNu, kMw, d);
    CHECK(s.qubit - 0.5 * s.zero_prime == doctest::Approx(rf_minus1_shift_approx(kOmega0, kNu, d)).epsilon(2e-3));
  }
  const RfMinus1Shift s = rf_minus1_shift(kOmega0, kNu, kMw, 50.0);
  CHECK(rf_minus1_shift(kOmega0, kNu, kMw, 0.0).qubit == 0.0);
  CHECK(s.splitting() == doctest::Approx(s.zero_prime - 2.0 * s.qubit));
  CHECK_THROWS_AS(rf_minus1_shift_approx(kOmega0, 0.0, 50.0), DomainError);
}

TEST_CASE("Zeeman difference terms") {
  PhysicalParams p = PhysicalParams::demonstrated();
  p.nu_z = 265.2e3;
  const ZeemanTerms z = zeeman_terms(p, kMw);
  // Coulomb balance with own constants
  const double e = 1.602176634e-19;
  const double eps0 = 8.8541878128e-12;
  const double m = 170.9363258 * 1.66053906660e-27;
  const double w = 2.0 * M_PI * 265.2e3;
  const double dz = std::cbrt(e * e / (2.0 * M_PI * eps0 * m * w * w));
  CHECK(z.Delta_Z == doctest::Approx(dz).epsilon(1e-9));
  CHECK(z.Delta_Z == doctest::Approx(8.4e-6).epsilon(0.01));
  CHECK(z.Delta_B == doctest::Approx(2.8e6).epsilon(0.05));
  CHECK(z.Delta_B == doctest::Approx(9.2740100783e-24 * 23.6 * dz / 6.62607015e-34).epsilon(1e-9));
  CHECK(z.mw_zeeman_shift == doctest::Approx(kMw * kMw / (4.0 * z.Delta_B)));
  CHECK(zeeman_terms(p, kMw, 0.0).rf_zeeman_shift == 0.0);

  p.gradient = 0.0;
  const ZeemanTerms flat = zeeman_terms(p, kMw);
  CHECK(flat.Delta_B == 0.0);
  CHECK(std::isinf(flat.mw_zeeman_shift));
  p.nu_z = 0.0;
  CHECK_THROWS_AS(zeeman_terms(p, kMw), DomainError);
}

TEST_CASE("gate duration factor") {
  CHECK(gate_duration_factor(kMw, kNu) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(gate_duration_factor(kNu, kNu) == doctest::Approx(2.0));
  CHECK(gate_duration_factor(3.0 * kNu, kNu) < 0.0);
  CHECK_THROWS_AS(gate_duration_factor(std::sqrt(2.0) * kNu, kNu), DomainError);
}

TEST_CASE("gate factor against the dressed sideband element") {
  // |<D~,1|V|0',0>| / (eta W0 / 2) from exact diagonalization
  for (double r : {0.0457, 0.3, 0.5, 1.0}) {
    const oracle::MwModel m{kEta, kNu, r * kNu, 8};
    const double ratio = m.sideband_element(kOmega0) / (kEta * kOmega0 / 2.0);
    CHECK(ratio == doctest::Approx(gate_duration_factor(r * kNu, kNu)).epsilon(0.05));
  }
}

TEST_CASE("imbalance factor") {
  CHECK(imbalance_dephasing(0.0, kMw).factor == 0.0);
  const ImbalanceFactor f = imbalance_dephasing(0.01 * kMw, kMw);
  CHECK(f.factor == doctest::Approx(1e-4));
  CHECK(imbalance_dephasing(0.02 * kMw, kMw).above_typical);
  CHECK(imbalance_dephasing(7.0, 700.0).factor == doctest::Approx(imbalance_dephasing(70.0, 7000.0).factor));
  CHECK_THROWS_AS(imbalance_dephasing(1.0, 0.0), DomainError);
}

TEST_CASE("carrier infidelity") {
  CHECK(carrier_infidelity(kOmega0, kNu) == doctest::Approx(4.0 * kOmega0 * kOmega0 / (kNu * kNu)));
  CHECK(carrier_infidelity(kOmega0, kNu) == doctest::Approx(3.9e-2).epsilon(0.01));
}

TEST_CASE("coefficients and compensation") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  const CorrectionCoefficients c = correction_coefficients(p);
  CHECK(c.omega_mw == doctest::Approx(21.05e3));
  CHECK(c.g_rf_shift == doctest::Approx(2.2).epsilon(0.10));
  CHECK(c.mw_lightshift == doctest::Approx(-2.0 * c.g_mw_leak));
  CHECK(c.gate_factor == doctest::Approx(gate_duration_factor(c.omega_mw, p.nu_s) - 1.0));
  CHECK(correction_table(c).size() == 18);
  for (const auto& [name, v] : correction_table(c)) CHECK_MESSAGE(std::isfinite(v), name);

  const CompensationOffsets zero = compensation_offsets(CorrectionCoefficients{});
  for (int i = 0; i < 2; ++i) {
    CHECK(zero.tone_offset[static_cast<std::size_t>(i)] == 0.0);
    CHECK(zero.zero_prime_shift[static_cast<std::size_t>(i)] == 0.0);
  }
  const CompensationOffsets mod = compensation_offsets(c, true);
  CHECK(mod.zero_prime_shift[0] == doctest::Approx(c.g_rf_shift - c.mw_lightshift));
  CHECK(mod.tone_offset[1] == doctest::Approx(-mod.zero_prime_shift[1]));
  const CompensationOffsets full = compensation_offsets(c);
  CHECK(full.zero_prime_shift[0] ==
        doctest::Approx(mod.zero_prime_shift[0] + c.rf_minus1[0].splitting() + c.rf_zeeman_shift[0]));
}

TEST_CASE("coefficients are smooth away from poles") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  for (double mw = 15e3; mw < 30e3; mw += 500.0) {
    const double h = 1e-3 * mw;
    const double d1 = (rf_gate_lightshift(p.eta, p.omega_0, mw + h, p.delta) - rf_gate_lightshift(p.eta, p.omega_0, mw, p.delta)) / h;
    const double d2 = (mw_leakage(p.eta, p.nu_s, mw + h).g - mw_leakage(p.eta, p.nu_s, mw).g) / h;
    CHECK(std::isfinite(d1));
    CHECK(std::isfinite(d2));
    CHECK(std::abs(d1) < 1e-2);
  }
}

TEST_CASE("reduced model for the microwave leakage") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  const double mw = p.omega_mw_mean();
  const MwLeakage m = mw_leakage(p.eta, p.nu_s, mw);
  const oracle::MwModel o{p.eta, p.nu_s, mw};
  CHECK(o.dark_shift() == doctest::Approx(m.lightshift).epsilon(0.10));
  CHECK(o.exchange() == doctest::Approx(2.0 * m.g).epsilon(0.10));
}

TEST_CASE("reduced model for the rf terms") {
  // the |0'> shift of the reduced model is n independent and small
  const PhysicalParams p = PhysicalParams::demonstrated();
  const double mw = p.omega_mw_mean();
  const oracle::RfModel o{p.eta, p.omega_0, mw, p.delta};
  const double s0 = o.zero_prime_shift(0);
  CHECK(o.zero_prime_shift(2) == doctest::Approx(s0).epsilon(1e-3));
  // second-order estimate of the same model: -c^2 [1/(a - delta) - 1/(a + delta)], c = eta W_rf / 4
  const double a = mw / std::sqrt(2.0);
  const double c = p.eta * std::sqrt(2.0) * p.omega_0 / 4.0;
  CHECK(s0 == doctest::Approx(-c * c * (1.0 / (a - p.delta) - 1.0 / (a + p.delta))).epsilon(1e-3));
  CHECK(o.exchange() == doctest::Approx(-s0).epsilon(1e-3));
}

}  // TEST_SUITE
