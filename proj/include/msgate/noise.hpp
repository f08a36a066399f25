#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "msgate/space.hpp"

namespace msgate {

struct NoiseModel {
  double heating_rate = 0.0;  // quanta / s
  double depol_time = 0.0;    // s, 0 disables
  double b_noise_rms = 0.0;   // Hz, quasi-static shift of |+-1>
  std::array<double, 2> dressing_imbalance{0.0, 0.0};  // Hz
  std::uint64_t seed = 1;

  void validate() const;
  bool has_dissipation() const { return heating_rate > 0.0 || depol_time > 0.0; }
  bool is_noiseless() const;
};

// {sqrt(r) A, sqrt(r) A^dagger}; A = a, or a - sum_i eta_i sigma_zi in the
// transformed frame where the polaron transform shifts the mode operator.
std::vector<SparseMatrix> heating_collapse_ops(const Space& space, double rate, double eta = 0.0);

// sqrt(1/(4T)) sigma_k, k = x, y, z, on the {0', D} qubit of each ion. Each
// Bloch component then decays as exp(-t/T).
std::vector<SparseMatrix> depolarization_collapse_ops(const Space& space, double depol_time);

}  // namespace msgate
