#include "msgate/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "msgate/corrections.hpp"

namespace msgate {

double bell_fidelity(double populations, double amplitude) {
  const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(populations)) throw DomainError("bell_fidelity: populations must lie in [0, 1]");
  if (!in_unit(amplitude)) throw DomainError("bell_fidelity: amplitude must lie in [0, 1]");
  return 0.5 * populations + 0.5 * amplitude;
}

ParityFit fit_parity(const std::vector<double>& phi, const std::vector<double>& parity,
                     const std::vector<double>& weights) {
  const std::size_t n = phi.size();
  if (parity.size() != n) throw DomainError("fit_parity: phi and parity sizes differ");
  if (!weights.empty() && weights.size() != n) throw DomainError("fit_parity: weights size differs");
  if (n < 6) throw DomainError("fit_parity: need at least 6 samples");
  const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
  // one period of cos(2 phi), allowing an endpoint-exclusive grid
  if (*hi - *lo < kPi * static_cast<double>(n - 1) / static_cast<double>(n) - 1e-12) {
    throw DomainError("fit_parity: samples must span one period of cos(2 phi)");
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    x(k, 0) = std::cos(2.0 * phi[i]);
    x(k, 1) = std::sin(2.0 * phi[i]);
    x(k, 2) = 1.0;
    y(k) = parity[i];
    if (!weights.empty()) {
      if (!(weights[i] > 0.0)) throw DomainError("fit_parity: weights must be positive");
      w(k) = weights[i];
    }
  }
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd xw = sw.asDiagonal() * x;
  const Eigen::VectorXd yw = sw.asDiagonal() * y;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  if (qr.rank() < 3) throw DomainError("fit_parity: rank-deficient design");
  const Eigen::Vector3d beta = qr.solve(yw);

  ParityFit fit;
  const double a = beta(0);
  const double b = beta(1);
  fit.amplitude = std::hypot(a, b);
  fit.phase = fit.amplitude > 0.0 ? std::atan2(-b, a) : 0.0;
  fit.offset = beta(2);

  const Eigen::VectorXd r = y - x * beta;
  fit.residuals.assign(r.data(), r.data() + r.size());
  fit.rms_residual = std::sqrt(r.squaredNorm() / static_cast<double>(n));

  Eigen::Matrix3d cov = (xw.transpose() * xw).inverse();
  if (weights.empty()) {
    const double dof = static_cast<double>(n) - 3.0;
    cov *= dof > 0.0 ? r.squaredNorm() / dof : 0.0;
  }
  Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
  if (fit.amplitude > 0.0) {
    const double a2 = fit.amplitude * fit.amplitude;
    jac(0, 0) = a / fit.amplitude;
    jac(0, 1) = b / fit.amplitude;
    jac(1, 0) = b / a2;
    jac(1, 1) = -a / a2;
  }
  jac(2, 2) = 1.0;
  fit.covariance = jac * cov * jac.transpose();
  return fit;
}

double parity_sigma(double parity, int shots) {
  if (shots < 1) throw DomainError("parity_sigma: shots must be positive");
  const double p = std::clamp(0.5 * (1.0 + parity), 0.0, 1.0);
  return 2.0 * std::sqrt(p * (1.0 - p) / shots);
}

DetectionMap calibrate_detection(const std::array<Eigen::Vector3d, 4>& histograms) {
  std::array<Eigen::Vector3d, 4> h;
  for (std::size_t i = 0; i < 4; ++i) {
    if ((histograms[i].array() < 0.0).any() || !histograms[i].allFinite()) {
      throw DomainError("calibrate_detection: histogram entries must be finite and non-negative");
    }
    const double s = histograms[i].sum();
    if (!(s > 0.0)) throw DomainError("calibrate_detection: empty histogram");
    h[i] = histograms[i] / s;
  }
  DetectionMap map;
  // least squares per column: one observation for the pure states, the mean for the mixed class
  map.forward.col(0) = h[0];
  map.forward.col(1) = 0.5 * (h[1] + h[2]);
  map.forward.col(2) = h[3];
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(map.forward);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 1e-12 * sv(0))) throw DomainError("calibrate_detection: singular confusion map");
  map.condition_number = sv(0) / sv(2);
  map.inverse = map.forward.inverse();
  return map;
}

NormalizedProbabilities normalize(const DetectionMap& map, const Eigen::Vector3d& raw) {
  NormalizedProbabilities out;
  Eigen::Vector3d p = map.inverse * raw;
  if ((p.array() < 0.0).any() || (p.array() > 1.0).any()) {
    p = p.cwiseMax(0.0).cwiseMin(1.0);
    const double s = p.sum();
    if (s > 0.0) p /= s;
    out.clipped = true;
  }
  out.probabilities = p;
  return out;
}

NormalizedSeries normalize_all(const DetectionMap& map, const std::vector<Eigen::Vector3d>& raw) {
  NormalizedSeries out;
  out.probabilities.reserve(raw.size());
  for (const auto& r : raw) {
    const NormalizedProbabilities n = normalize(map, r);
    if (n.clipped) ++out.clip_events;
    out.probabilities.push_back(n.probabilities);
  }
  return out;
}

ProcessFidelity process_fidelity(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise) {
  ProcessFidelity out;
  out.states = simulate_code_space(p, s, noise);
  out.fidelity = out.states.mean();
  return out;
}

ErrorBudget error_budget(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise,
                         bool use_code_space) {
  const auto run = [&](const NoiseModel& n) {
    return use_code_space ? simulate_code_space(p, s, n).mean() : simulate_gate(p, s, n).bell_fidelity;
  };
  NoiseModel quiet;
  quiet.seed = noise.seed;
  ErrorBudget out;
  out.baseline_fidelity = run(quiet);

  const auto entry = [&](const std::string& name, bool enabled, NoiseModel n) {
    BudgetEntry e{name, 0.0, false};
    if (enabled) e.infidelity = out.baseline_fidelity - run(n);
    out.entries.push_back(e);
  };
  NoiseModel heating = quiet;
  heating.heating_rate = noise.heating_rate;
  entry("heating", noise.heating_rate > 0.0, heating);
  NoiseModel depol = quiet;
  depol.depol_time = noise.depol_time;
  entry("depolarization", noise.depol_time > 0.0, depol);
  NoiseModel bnoise = quiet;
  bnoise.b_noise_rms = noise.b_noise_rms;
  entry("magnetic_noise", noise.b_noise_rms > 0.0, bnoise);
  NoiseModel imbalance = quiet;
  imbalance.dressing_imbalance = noise.dressing_imbalance;
  entry("dressing_imbalance", noise.dressing_imbalance[0] != 0.0 || noise.dressing_imbalance[1] != 0.0, imbalance);

  out.entries.push_back({"carrier_rectangular", carrier_infidelity(p.omega_0, p.nu()), true});
  return out;
}

}  // namespace msgate
