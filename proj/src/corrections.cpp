#include "msgate/corrections.hpp"

#include <cmath>
#include <limits>

namespace msgate {

namespace {

// 1/(a - b), refusing the relative guard band around a = b.
double pole_inverse(double a, double b, const char* what) {
  const double d = a - b;
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0 || std::abs(d) <= kPoleGuard * scale) {
    throw DomainError(std::string(what) + ": too close to a resonance pole");
  }
  return 1.0 / d;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

double rf_gate_lightshift(double eta, double omega0, double omega_mw, double delta) {
  require_finite(eta * omega0 * omega_mw * delta, "rf_gate_lightshift inputs");
  const double a = omega_mw / std::sqrt(2.0);
  const double c = 0.5 * (eta * omega0) * (eta * omega0);
  return c * (pole_inverse(a, delta, "rf_gate_lightshift") + pole_inverse(a, -delta, "rf_gate_lightshift"));
}

double rf_leakage(double eta, double omega0, double omega_mw, double delta) {
  require_finite(eta * omega0 * omega_mw * delta, "rf_leakage inputs");
  const double a = omega_mw / std::sqrt(2.0);
  const double c = 0.5 * (eta * omega0) * (eta * omega0);
  return c * (pole_inverse(a, delta, "rf_leakage") - pole_inverse(a, -delta, "rf_leakage"));
}

MwLeakage mw_leakage(double eta, double nu, double omega_mw) {
  require_finite(eta * nu * omega_mw, "mw_leakage inputs");
  MwLeakage out;
  out.g = -0.5 * eta * eta * nu * nu * nu * pole_inverse(0.5 * omega_mw * omega_mw, nu * nu, "mw_leakage");
  out.lightshift = -2.0 * out.g;
  return out;
}

double phonon_lightshift(double eta, double omega0, double omega_mw, double Delta_i) {
  require_finite(eta * omega0 * omega_mw * Delta_i, "phonon_lightshift inputs");
  const double a = omega_mw / std::sqrt(2.0);
  const double c = (eta * omega0) * (eta * omega0) / 8.0;
  return c * (pole_inverse(a, Delta_i, "phonon_lightshift") - pole_inverse(a, -Delta_i, "phonon_lightshift"));
}

RfMinus1Shift rf_minus1_shift(double omega0, double nu, double omega_mw, double Delta_i) {
  const double a = omega_mw / std::sqrt(2.0);
  const char* name = "rf_minus1_shift";
  RfMinus1Shift out;
  out.qubit = 0.25 * omega0 * omega0 * (pole_inverse(nu, -Delta_i, name) - pole_inverse(nu, Delta_i, name));
  const double sum = pole_inverse(nu, -(a + Delta_i), name) - pole_inverse(nu, a + Delta_i, name) +
                     pole_inverse(nu, a - Delta_i, name) - pole_inverse(nu, Delta_i - a, name);
  out.zero_prime = -omega0 * omega0 / 8.0 * sum;
  return out;
}

double rf_minus1_shift_approx(double omega0, double nu, double Delta_i) {
  if (nu == 0.0) throw DomainError("rf_minus1_shift_approx: nu must be non-zero");
  return -0.75 * omega0 * omega0 * Delta_i / (nu * nu);
}

ZeemanTerms zeeman_terms(const PhysicalParams& p, double omega_mw, double Delta) {
  if (!(p.nu_z > 0.0)) throw DomainError("zeeman_terms: axial frequency must be positive");
  if (!(p.mass > 0.0)) throw DomainError("zeeman_terms: mass must be positive");
  using namespace constants;
  ZeemanTerms out;
  const double w = angular(p.nu_z);
  out.Delta_Z = std::cbrt(elementary_charge * elementary_charge / (2.0 * kPi * epsilon0 * p.mass * w * w));
  out.Delta_B = bohr_magneton * p.gradient * out.Delta_Z / planck;
  // 1/Delta_B diverges without a gradient
  out.mw_zeeman_shift = out.Delta_B == 0.0 ? std::numeric_limits<double>::infinity()
                                           : omega_mw * omega_mw / (4.0 * out.Delta_B);
  const double nu = p.nu();
  out.rf_zeeman_shift = Delta * p.omega_0 * p.omega_0 *
                        pole_inverse(out.Delta_B * out.Delta_B, nu * nu, "rf_zeeman_shift");
  return out;
}

double gate_duration_factor(double omega_mw, double nu) {
  const double w2 = omega_mw * omega_mw;
  return 1.0 + w2 * pole_inverse(2.0 * nu * nu, w2, "gate_duration_factor");
}

ImbalanceFactor imbalance_dephasing(double delta_omega, double omega_mw) {
  if (!(omega_mw > 0.0)) throw DomainError("imbalance_dephasing: dressing Rabi frequency must be positive");
  ImbalanceFactor out;
  const double r = delta_omega / omega_mw;
  out.factor = r * r;
  out.above_typical = out.factor > 1e-4;
  return out;
}

double carrier_infidelity(double omega0, double nu) {
  if (nu == 0.0) throw DomainError("carrier_infidelity: nu must be non-zero");
  return 4.0 * omega0 * omega0 / (nu * nu);
}

CorrectionCoefficients correction_coefficients(const PhysicalParams& p, double omega_mw,
                                               std::array<double, 2> dressing_imbalance) {
  CorrectionCoefficients c;
  c.omega_mw = omega_mw > 0.0 ? omega_mw : p.omega_mw_mean();
  const double nu = p.nu();
  c.g_rf_shift = rf_gate_lightshift(p.eta, p.omega_0, c.omega_mw, p.delta);
  c.g_rf_leak = rf_leakage(p.eta, p.omega_0, c.omega_mw, p.delta);
  const MwLeakage mw = mw_leakage(p.eta, nu, c.omega_mw);
  c.g_mw_leak = mw.g;
  c.mw_lightshift = mw.lightshift;
  const std::array<double, 2> Delta{p.Delta1, p.Delta2};
  const std::array<double, 2> omega_i{p.omega_mw1, p.omega_mw2};
  for (std::size_t i = 0; i < 2; ++i) {
    c.g_ph[i] = phonon_lightshift(p.eta, p.omega_0, c.omega_mw, Delta[i]);
    c.rf_minus1[i] = rf_minus1_shift(p.omega_0, nu, c.omega_mw, Delta[i]);
    c.rf_zeeman_shift[i] = zeeman_terms(p, c.omega_mw, Delta[i]).rf_zeeman_shift;
    c.imbalance_dephasing_factor[i] = imbalance_dephasing(dressing_imbalance[i], omega_i[i] > 0.0 ? omega_i[i] : c.omega_mw).factor;
  }
  c.mw_zeeman_shift = zeeman_terms(p, c.omega_mw).mw_zeeman_shift;
  c.gate_factor = gate_duration_factor(c.omega_mw, nu) - 1.0;
  c.carrier_infidelity = carrier_infidelity(p.omega_0, nu);
  return c;
}

CompensationOffsets compensation_offsets(const CorrectionCoefficients& c, bool modelled_only) {
  CompensationOffsets out;
  for (std::size_t i = 0; i < 2; ++i) {
    // |0'> up relative to |D>; the mw lightshift moves |D> instead.
    out.zero_prime_shift[i] = c.g_rf_shift - c.mw_lightshift;
    if (!modelled_only) out.zero_prime_shift[i] += c.rf_minus1[i].splitting() + c.rf_zeeman_shift[i];
    // tones sit on |0'> -> |D>, whose frequency moves by -shift
    out.tone_offset[i] = -out.zero_prime_shift[i];
  }
  return out;
}

std::vector<std::pair<std::string, double>> correction_table(const CorrectionCoefficients& c) {
  return {
      {"omega_mw", c.omega_mw},
      {"g_rf_shift", c.g_rf_shift},
      {"g_rf_leak", c.g_rf_leak},
      {"g_mw_leak", c.g_mw_leak},
      {"mw_lightshift", c.mw_lightshift},
      {"g_ph_1", c.g_ph[0]},
      {"g_ph_2", c.g_ph[1]},
      {"rf_minus1_qubit_1", c.rf_minus1[0].qubit},
      {"rf_minus1_qubit_2", c.rf_minus1[1].qubit},
      {"rf_minus1_zero_prime_1", c.rf_minus1[0].zero_prime},
      {"rf_minus1_zero_prime_2", c.rf_minus1[1].zero_prime},
      {"mw_zeeman_shift", c.mw_zeeman_shift},
      {"rf_zeeman_shift_1", c.rf_zeeman_shift[0]},
      {"rf_zeeman_shift_2", c.rf_zeeman_shift[1]},
      {"gate_factor", c.gate_factor},
      {"imbalance_dephasing_1", c.imbalance_dephasing_factor[0]},
      {"imbalance_dephasing_2", c.imbalance_dephasing_factor[1]},
      {"carrier_infidelity", c.carrier_infidelity},
  };
}

}  // namespace msgate
