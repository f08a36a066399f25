#pragma once

#include <functional>
#include <vector>

#include "msgate/space.hpp"

namespace msgate {

using Coefficient = std::function<cplx(double)>;

// H(t) = H0 + S + sum_k [c_k(t) O_k + conj(c_k(t)) O_k^dagger]
//
// H0 is diagonal and optional. When present the integrators work in the
// interaction picture with respect to H0: psi_I = exp(i H0 t) psi.
// All values are angular frequencies (rad/s).
class TimeDependentHamiltonian {
 public:
  TimeDependentHamiltonian() = default;
  TimeDependentHamiltonian(Eigen::Index dim, BasisTag tag) : dim_(dim), tag_(tag), static_(dim, dim) {}

  Eigen::Index dim() const { return dim_; }
  BasisTag basis() const { return tag_; }

  void add_static(const Matrix& h);
  // c(t) op + h.c.; `frequency` bounds the oscillation rate of c (rad/s).
  void add_term(const Matrix& op, Coefficient c, double frequency);
  // Diagonal H0 removed through the interaction picture. `frequency` is the
  // characteristic rate it imprints on the off-diagonal couplings.
  void set_interaction_frame(Eigen::VectorXd energies, double frequency);

  bool has_interaction_frame() const { return h0_.size() > 0; }
  const Eigen::VectorXd& interaction_energies() const { return h0_; }

  // Schroedinger-picture H(t), including H0.
  Matrix evaluate(double t) const;
  // Interaction-picture H_I(t) = e^{iH0t}(H - H0)e^{-iH0t}.
  Matrix evaluate_interaction(double t) const;

  // out = -i H_I(t) x, columnwise. x holds interaction-picture vectors.
  void apply(double t, const Matrix& x, Matrix& out) const;

  // psi = e^{-iH0t} psi_I and back (no-ops without H0).
  Matrix to_schrodinger(double t, const Matrix& x) const;
  Matrix to_interaction(double t, const Matrix& x) const;
  Matrix density_to_schrodinger(double t, const Matrix& rho) const;
  Matrix density_to_interaction(double t, const Matrix& rho) const;

  // Largest oscillation rate present in the interaction picture (rad/s).
  double max_frequency() const;
  // Largest |c_k(t)| ||O_k|| + ||S|| estimate at t, for step bounds.
  double coupling_scale(double t) const;

  // ||H - H^dagger|| / ||H|| of the Schroedinger matrix at t.
  double hermiticity_defect(double t) const;

 private:
  struct Term {
    SparseMatrix op;
    SparseMatrix op_adjoint;
    Coefficient coeff;
    double frequency = 0.0;
    double norm = 0.0;
  };

  Eigen::VectorXcd phases(double t, double sign) const;

  Eigen::Index dim_ = 0;
  BasisTag tag_{};
  SparseMatrix static_;
  std::vector<Term> terms_;
  Eigen::VectorXd h0_;
  double frame_frequency_ = 0.0;
};

SparseMatrix to_sparse(const Matrix& m, double drop = 1e-15);

}  // namespace msgate
