#include "msgate/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace msgate {

SparseMatrix to_sparse(const Matrix& m, double drop) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > drop) trips.emplace_back(i, j, m(i, j));
    }
  }
  SparseMatrix s(m.rows(), m.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

namespace {

void check_dim(const Matrix& m, Eigen::Index dim) {
  if (m.rows() != dim || m.cols() != dim) throw DomainError("operator dimension does not match Hamiltonian");
}

}  // namespace

void TimeDependentHamiltonian::add_static(const Matrix& h) {
  check_dim(h, dim_);
  static_ += to_sparse(h);
}

void TimeDependentHamiltonian::add_term(const Matrix& op, Coefficient c, double frequency) {
  check_dim(op, dim_);
  Term term;
  term.op = to_sparse(op);
  term.op_adjoint = SparseMatrix(term.op.adjoint());
  term.coeff = std::move(c);
  term.frequency = std::abs(frequency);
  term.norm = op.norm();
  if (term.op.nonZeros() == 0) return;
  terms_.push_back(std::move(term));
}

void TimeDependentHamiltonian::set_interaction_frame(Eigen::VectorXd energies, double frequency) {
  if (energies.size() != dim_) throw DomainError("interaction frame has wrong dimension");
  h0_ = std::move(energies);
  frame_frequency_ = std::abs(frequency);
}

Eigen::VectorXcd TimeDependentHamiltonian::phases(double t, double sign) const {
  Eigen::VectorXcd ph(h0_.size());
  for (Eigen::Index k = 0; k < h0_.size(); ++k) ph(k) = std::polar(1.0, sign * h0_(k) * t);
  return ph;
}

Matrix TimeDependentHamiltonian::evaluate(double t) const {
  Matrix h = Matrix(static_);
  for (const auto& term : terms_) {
    const cplx c = term.coeff(t);
    h += c * Matrix(term.op) + std::conj(c) * Matrix(term.op_adjoint);
  }
  if (has_interaction_frame()) h.diagonal() += h0_.cast<cplx>();
  return h;
}

Matrix TimeDependentHamiltonian::evaluate_interaction(double t) const {
  Matrix h = evaluate(t);
  if (!has_interaction_frame()) return h;
  h.diagonal() -= h0_.cast<cplx>();
  return density_to_interaction(t, h);
}

void TimeDependentHamiltonian::apply(double t, const Matrix& x, Matrix& out) const {
  if (has_interaction_frame()) {
    const Eigen::VectorXcd back = phases(t, -1.0);
    const Matrix y = back.asDiagonal() * x;
    Matrix z = static_ * y;
    for (const auto& term : terms_) {
      const cplx c = term.coeff(t);
      if (c == cplx{}) continue;
      z.noalias() += c * (term.op * y);
      z.noalias() += std::conj(c) * (term.op_adjoint * y);
    }
    out.noalias() = (-kI * back.conjugate()).asDiagonal() * z;
    return;
  }
  out.noalias() = static_ * x;
  for (const auto& term : terms_) {
    const cplx c = term.coeff(t);
    if (c == cplx{}) continue;
    out.noalias() += c * (term.op * x);
    out.noalias() += std::conj(c) * (term.op_adjoint * x);
  }
  out *= -kI;
}

Matrix TimeDependentHamiltonian::to_schrodinger(double t, const Matrix& x) const {
  if (!has_interaction_frame()) return x;
  return phases(t, -1.0).asDiagonal() * x;
}

Matrix TimeDependentHamiltonian::to_interaction(double t, const Matrix& x) const {
  if (!has_interaction_frame()) return x;
  return phases(t, 1.0).asDiagonal() * x;
}

Matrix TimeDependentHamiltonian::density_to_schrodinger(double t, const Matrix& rho) const {
  if (!has_interaction_frame()) return rho;
  const Eigen::VectorXcd p = phases(t, -1.0);
  return p.asDiagonal() * rho * p.conjugate().asDiagonal();
}

Matrix TimeDependentHamiltonian::density_to_interaction(double t, const Matrix& rho) const {
  if (!has_interaction_frame()) return rho;
  const Eigen::VectorXcd p = phases(t, 1.0);
  return p.asDiagonal() * rho * p.conjugate().asDiagonal();
}

double TimeDependentHamiltonian::max_frequency() const {
  double f = 0.0;
  for (const auto& term : terms_) f = std::max(f, term.frequency);
  return f + frame_frequency_;
}

double TimeDependentHamiltonian::coupling_scale(double t) const {
  double s = Matrix(static_).norm();
  for (const auto& term : terms_) s += 2.0 * std::abs(term.coeff(t)) * term.norm;
  return s;
}

double TimeDependentHamiltonian::hermiticity_defect(double t) const {
  const Matrix h = evaluate(t);
  const double n = h.norm();
  return n == 0.0 ? 0.0 : (h - h.adjoint()).norm() / n;
}

}  // namespace msgate
