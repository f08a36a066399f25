#include <doctest.h>

#include <cmath>
#include <random>

#include "msgate/analysis.hpp"

using namespace msgate;

namespace {

std::vector<double> phi_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = kPi * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

const BudgetEntry& find_entry(const ErrorBudget& b, const std::string& name) {
  for (const auto& e : b.entries)
    if (e.source == name) return e;
  throw std::runtime_error("no budget entry " + name);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("Bell fidelity formula") {
  CHECK(bell_fidelity(0.997, 0.972) == doctest::Approx(0.9845).epsilon(1e-12));
  CHECK(bell_fidelity(1.0, 1.0) == 1.0);
  CHECK(bell_fidelity(0.5, 0.0) == 0.25);
  CHECK_THROWS_AS(bell_fidelity(1.1, 0.5), DomainError);
  CHECK_THROWS_AS(bell_fidelity(0.5, -0.1), DomainError);
  // affine and monotone
  CHECK(bell_fidelity(0.6, 0.3) - bell_fidelity(0.5, 0.3) == doctest::Approx(0.05));
  CHECK(bell_fidelity(0.5, 0.4) > bell_fidelity(0.5, 0.3));
}

TEST_CASE("parity fit on exact data") {
  const auto phi = phi_grid(25);
  std::vector<double> y;
  for (double f : phi) y.push_back(std::cos(2.0 * f));
  const ParityFit fit = fit_parity(phi, y);
  CHECK(std::abs(fit.amplitude - 1.0) < 1e-9);
  CHECK(std::abs(fit.offset) < 1e-9);
  CHECK(std::abs(fit.phase) < 1e-9);
  CHECK(fit.rms_residual < 1e-9);

  std::vector<double> flat(phi.size(), 0.3);
  const ParityFit c = fit_parity(phi, flat);
  CHECK(std::abs(c.amplitude) < 1e-9);
  CHECK(c.offset == doctest::Approx(0.3));

  // negative amplitude is canonicalized to A >= 0 with a pi phase shift
  std::vector<double> neg;
  for (double f : phi) neg.push_back(-0.8 * std::cos(2.0 * f + 0.4));
  const ParityFit n = fit_parity(phi, neg);
  CHECK(n.amplitude == doctest::Approx(0.8));
  CHECK(std::abs(std::remainder(n.phase - (0.4 + kPi), 2.0 * kPi)) < 1e-9);

  // shifting the grid by 2 pi changes nothing
  std::vector<double> shifted;
  for (double f : phi) shifted.push_back(f + 2.0 * kPi);
  const ParityFit s = fit_parity(shifted, neg);
  CHECK(s.amplitude == doctest::Approx(n.amplitude).epsilon(1e-12));
}

TEST_CASE("parity fit rejects bad input") {
  CHECK_THROWS_AS(fit_parity({0.1, 0.2, 0.3}, {0.0, 0.0, 0.0}), DomainError);
  const std::vector<double> same(8, 0.5);
  CHECK_THROWS_AS(fit_parity(same, std::vector<double>(8, 0.1)), DomainError);
  CHECK_THROWS_AS(fit_parity(phi_grid(8), std::vector<double>(7, 0.1)), DomainError);
  CHECK_THROWS_AS(parity_sigma(0.5, 0), DomainError);
  CHECK(parity_sigma(0.0, 100) == doctest::Approx(0.1));
}

TEST_CASE("parity fit recovers the amplitude under noise") {
  const auto phi = phi_grid(41);
  std::mt19937_64 rng(2024);
  {
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> y;
    for (double f : phi) y.push_back(0.972 * std::cos(2.0 * f + 0.3) + noise(rng));
    const ParityFit fit = fit_parity(phi, y);
    CHECK(std::abs(fit.amplitude - 0.972) < 0.02);
  }
  int inside = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> y;
    std::vector<double> wts;
    for (double f : phi) {
      const double truth = 0.972 * std::cos(2.0 * f + 0.3);
      std::binomial_distribution<int> shots(800, 0.5 * (1.0 + truth));
      const double est = 2.0 * shots(rng) / 800.0 - 1.0;
      y.push_back(est);
      const double sg = std::max(parity_sigma(est, 800), 1e-3);
      wts.push_back(1.0 / (sg * sg));
    }
    const ParityFit fit = fit_parity(phi, y, wts);
    if (std::abs(fit.amplitude - 0.972) < 2.0 * fit.amplitude_error()) ++inside;
    CHECK(std::abs(fit.amplitude - 0.972) < 0.02);
  }
  // a 2 sigma interval covers about 95 %
  CHECK(inside >= 42);
}

TEST_CASE("detection map") {
  const std::array<Eigen::Vector3d, 4> ideal{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                                             Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)};
  const DetectionMap id = calibrate_detection(ideal);
  CHECK((id.forward - Eigen::Matrix3d::Identity()).norm() < 1e-14);
  CHECK((normalize(id, Eigen::Vector3d(0.2, 0.3, 0.5)).probabilities - Eigen::Vector3d(0.2, 0.3, 0.5)).norm() < 1e-14);

  Eigen::Matrix3d m;
  m << 0.98, 0.02, 0.00,
       0.02, 0.96, 0.02,
       0.00, 0.02, 0.98;
  const std::array<Eigen::Vector3d, 4> hist{m.col(0), m.col(1), m.col(1), m.col(2)};
  const DetectionMap map = calibrate_detection(hist);
  CHECK((map.forward - m).norm() < 1e-12);
  for (int c = 0; c < 3; ++c) CHECK(std::abs(map.forward.col(c).sum() - 1.0) < 1e-9);
  CHECK(map.condition_number > 1.0);

  const Eigen::Vector3d truth(0.45, 0.1, 0.45);
  const Eigen::Vector3d raw = m * truth;
  CHECK((normalize(map, raw).probabilities - truth).norm() < 1e-6);
  CHECK((map.forward * truth - raw).norm() < 1e-12);
  CHECK_FALSE(normalize(map, raw).clipped);

  // a raw point outside the image of the map overshoots and is clipped
  const NormalizedProbabilities over = normalize(map, Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(over.clipped);
  CHECK(over.probabilities.minCoeff() >= 0.0);
  CHECK(std::abs(over.probabilities.sum() - 1.0) < 1e-12);
  const NormalizedSeries series = normalize_all(map, {raw, Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1)});
  CHECK(series.clip_events == 2);

  const std::array<Eigen::Vector3d, 4> singular{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 0, 0),
                                                Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1)};
  CHECK_THROWS_AS(calibrate_detection(singular), DomainError);
}

TEST_CASE("process fidelity with the gate off is one half") {
  PhysicalParams p = PhysicalParams::demonstrated();
  p.omega_0 = 0.0;
  p.omega_rf = 0.0;
  GateSettings s;
  s.auto_timing = false;
  s.gate_time = 1e-3;
  s.time_points = 3;
  const ProcessFidelity f = process_fidelity(p, s);
  CHECK(f.fidelity == doctest::Approx(0.5).epsilon(1e-9));
  for (double v : f.states.fidelity) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ideal effective gate has unit process fidelity") {
  GateSettings s;
  s.time_points = 3;
  const ProcessFidelity f = process_fidelity(PhysicalParams::demonstrated(), s);
  CHECK(f.fidelity > 1.0 - 1e-6);
}

TEST_CASE("error budget") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  GateSettings s;
  s.n_cut = 12;
  s.time_points = 3;
  NoiseModel n;
  n.heating_rate = 7.5;
  n.depol_time = 1.1;
  const ErrorBudget b = error_budget(p, s, n);
  CHECK(b.baseline_fidelity > 1.0 - 1e-6);
  for (const auto& e : b.entries) CHECK(e.infidelity >= -1e-4);
  CHECK(find_entry(b, "heating").infidelity == doctest::Approx(1e-2).epsilon(0.3));
  CHECK(find_entry(b, "depolarization").infidelity == doctest::Approx(3e-3).epsilon(0.3));
  CHECK(find_entry(b, "magnetic_noise").infidelity == 0.0);
  const BudgetEntry& carrier = find_entry(b, "carrier_rectangular");
  CHECK(carrier.analytic);
  const double oracle = 4.0 * (45.4 / 459.34) * (45.4 / 459.34);
  CHECK(carrier.infidelity == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(carrier.infidelity == doctest::Approx(3.9e-2).epsilon(0.01));

  const ErrorBudget quiet = error_budget(p, s, NoiseModel{});
  for (const auto& e : quiet.entries)
    if (!e.analytic) CHECK(std::abs(e.infidelity) < 1e-6);
}

}  // TEST_SUITE
