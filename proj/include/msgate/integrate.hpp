#pragma once

#include <cstddef>
#include <vector>

#include "msgate/hamiltonian.hpp"

namespace msgate {

struct IntegratorOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  // 0 selects (1/50) of the shortest period reported by the Hamiltonian.
  double max_step = 0.0;
  // Step budget between two output times.
  std::size_t max_steps = 20'000'000;
  // Tolerated drift of the norm (pure) or trace (density).
  double norm_tol = 1e-8;

  // Same settings with the step bound halved and the tolerances tightened.
  IntegratorOptions refined() const;
};

// Step bound used for `h` under `opt`.
double effective_max_step(const TimeDependentHamiltonian& h, const IntegratorOptions& opt, double span);

struct StateTrajectory {
  std::vector<double> times;
  std::vector<Matrix> states;  // Schroedinger picture, one column per propagated vector
};

// Propagates every column of psi0 under H(t), recording at t_grid (ascending,
// starting at the initial time). Throws ConvergenceError when the step budget
// is exhausted or the norm drifts by more than opt.norm_tol.
StateTrajectory evolve_unitary(const TimeDependentHamiltonian& h, const Matrix& psi0,
                               const std::vector<double>& t_grid, const IntegratorOptions& opt = {});

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
};

// Lindblad master equation with Schroedinger-picture collapse operators.
DensityTrajectory evolve_lindblad(const TimeDependentHamiltonian& h, const Matrix& rho0,
                                  const std::vector<SparseMatrix>& collapse,
                                  const std::vector<double>& t_grid, const IntegratorOptions& opt = {});

// Fidelity Tr[P rho(T)], P the projector onto the orthonormal columns of
// `targets`, to first order in the dissipator:
//   F = F_coherent + int_0^T dt sum_{k,c} |<chi_c|L_k|psi>|^2 - Re(<chi_c|L_k^dag L_k|psi><psi|chi_c>)
// with psi(t) propagated forward and chi_c(t) = U(T,t)^dag |c> backward.
struct WeakNoiseFidelity {
  double coherent = 0.0;
  double correction = 0.0;
  Matrix final_state;         // coherent final state, Schroedinger picture
  std::vector<Vector> trajectory;  // coherent states on the uniform grid, Schroedinger picture

  double total() const { return coherent + correction; }
};

WeakNoiseFidelity weak_noise_fidelity(const TimeDependentHamiltonian& h, const Vector& psi0, const Matrix& targets,
                                      const std::vector<SparseMatrix>& collapse, double t_final,
                                      std::size_t grid_points, const IntegratorOptions& opt = {});

// Uniform grid of n >= 2 points on [t0, t1].
std::vector<double> linear_grid(double t0, double t1, std::size_t n);

}  // namespace msgate
