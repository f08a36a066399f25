#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "msgate/simulate.hpp"

namespace msgate {

// F = populations/2 + A/2; `populations` is P(up,up) + P(down,down).
double bell_fidelity(double populations, double amplitude);

struct ParityFit {
  double amplitude = 0.0;  // A >= 0
  double phase = 0.0;      // phi0 in (-pi, pi]
  double offset = 0.0;     // c
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (A, phi0, c)
  std::vector<double> residuals;
  double rms_residual = 0.0;
  double amplitude_error() const { return std::sqrt(covariance(0, 0)); }
};

// Least squares fit of A cos(2 phi + phi0) + c. Optional weights (1/sigma^2).
ParityFit fit_parity(const std::vector<double>& phi, const std::vector<double>& parity,
                     const std::vector<double>& weights = {});

// Binomial standard error for a parity estimated from `shots`.
double parity_sigma(double parity, int shots);

// Forward map M: observed (P0, P1, P2) = M * (P00, P00'+P0'0, P0'0').
struct DetectionMap {
  Eigen::Matrix3d forward = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d inverse = Eigen::Matrix3d::Identity();
  double condition_number = 1.0;
};

struct NormalizedProbabilities {
  Eigen::Vector3d probabilities = Eigen::Vector3d::Zero();
  bool clipped = false;
};

// `histograms` holds the thresholded (P0, P1, P2) after preparing |00>, |00'>,
// |0'0> and |0'0'> in that order. The two single-bright states share a column.
DetectionMap calibrate_detection(const std::array<Eigen::Vector3d, 4>& histograms);

// M^{-1} raw, clipped to [0, 1] and renormalized when the inverse overshoots.
NormalizedProbabilities normalize(const DetectionMap& map, const Eigen::Vector3d& raw);

struct NormalizedSeries {
  std::vector<Eigen::Vector3d> probabilities;
  std::size_t clip_events = 0;
};
NormalizedSeries normalize_all(const DetectionMap& map, const std::vector<Eigen::Vector3d>& raw);

// Mean of the four code-space Bell fidelities.
struct ProcessFidelity {
  double fidelity = 0.0;
  CodeSpaceResult states;
};
ProcessFidelity process_fidelity(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise = {});

struct BudgetEntry {
  std::string source;
  double infidelity = 0.0;
  bool analytic = false;
};

struct ErrorBudget {
  double baseline_fidelity = 0.0;
  std::vector<BudgetEntry> entries;
};

// One-at-a-time toggling of each enabled noise source against a noiseless
// baseline, plus the analytic rectangular-pulse carrier term 4 W0^2/nu^2.
// `use_code_space` averages over the four code states instead of `s.initial`.
ErrorBudget error_budget(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise,
                         bool use_code_space = false);

}  // namespace msgate
