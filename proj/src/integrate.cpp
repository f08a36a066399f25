#include "msgate/integrate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace msgate {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

Eigen::Map<Matrix> as_matrix(State& s, Eigen::Index rows, Eigen::Index cols) {
  return {reinterpret_cast<cplx*>(s.data()), rows, cols};
}

Eigen::Map<const Matrix> as_matrix(const State& s, Eigen::Index rows, Eigen::Index cols) {
  return {reinterpret_cast<const cplx*>(s.data()), rows, cols};
}

State to_state(const Matrix& m) {
  State s(static_cast<std::size_t>(2 * m.size()));
  as_matrix(s, m.rows(), m.cols()) = m;
  return s;
}

template <class System, class Observer>
void run(System&& sys, State& x, const std::vector<double>& times, double max_step, const IntegratorOptions& opt,
         Observer&& obs) {
  if (times.empty()) return;
  auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, max_step, odeint::runge_kutta_dopri5<State>());
  const double dt0 = max_step * 0.1;
  try {
    odeint::integrate_times(stepper, std::forward<System>(sys), x, times.begin(), times.end(), dt0,
                            std::forward<Observer>(obs), odeint::max_step_checker(opt.max_steps));
  } catch (const odeint::odeint_error& e) {
    throw ConvergenceError(std::string("integrator failed: ") + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e) != nullptr) throw;
    throw ConvergenceError(std::string("integrator failed: ") + e.what());
  }
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw DomainError("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

}  // namespace

IntegratorOptions IntegratorOptions::refined() const {
  IntegratorOptions r = *this;
  r.abs_tol *= 1e-2;
  r.rel_tol *= 1e-2;
  r.max_step = max_step > 0.0 ? 0.5 * max_step : 0.0;
  r.max_steps = 2 * max_steps;
  return r;
}

double effective_max_step(const TimeDependentHamiltonian& h, const IntegratorOptions& opt, double span) {
  double bound = span > 0.0 ? span / 10.0 : 1.0;
  const double f = h.max_frequency();
  if (f > 0.0) bound = std::min(bound, kTwoPi / f / 50.0);
  if (opt.max_step > 0.0) bound = std::min(bound, opt.max_step);
  return bound;
}

std::vector<double> linear_grid(double t0, double t1, std::size_t n) {
  if (n < 2) throw DomainError("grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = t1;
  return g;
}

StateTrajectory evolve_unitary(const TimeDependentHamiltonian& h, const Matrix& psi0,
                               const std::vector<double>& t_grid, const IntegratorOptions& opt) {
  check_grid(t_grid);
  if (psi0.rows() != h.dim()) throw DomainError("initial state dimension does not match Hamiltonian");
  const Eigen::Index rows = psi0.rows();
  const Eigen::Index cols = psi0.cols();
  Eigen::VectorXd norms0 = psi0.colwise().norm().transpose();

  StateTrajectory out;
  State x = to_state(h.to_interaction(t_grid.front(), psi0));
  Matrix work(rows, cols);
  auto sys = [&](const State& s, State& ds, double t) {
    h.apply(t, as_matrix(s, rows, cols), work);
    ds.resize(s.size());
    as_matrix(ds, rows, cols) = work;
  };
  auto obs = [&](const State& s, double t) {
    out.times.push_back(t);
    out.states.push_back(h.to_schrodinger(t, as_matrix(s, rows, cols)));
  };
  const double span = t_grid.back() - t_grid.front();
  if (t_grid.size() == 1) {
    obs(x, t_grid.front());
    return out;
  }
  run(sys, x, t_grid, effective_max_step(h, opt, span), opt, obs);

  const Eigen::VectorXd norms1 = out.states.back().colwise().norm().transpose();
  const double drift = (norms1 - norms0).cwiseAbs().maxCoeff();
  if (drift > opt.norm_tol) {
    throw ConvergenceError("norm drifted by " + std::to_string(drift) + " during unitary evolution");
  }
  return out;
}

DensityTrajectory evolve_lindblad(const TimeDependentHamiltonian& h, const Matrix& rho0,
                                  const std::vector<SparseMatrix>& collapse,
                                  const std::vector<double>& t_grid, const IntegratorOptions& opt) {
  check_grid(t_grid);
  const Eigen::Index d = h.dim();
  if (rho0.rows() != d || rho0.cols() != d) throw DomainError("density matrix dimension does not match Hamiltonian");
  std::vector<SparseMatrix> lk;
  std::vector<SparseMatrix> lk_dag_lk;
  for (const auto& l : collapse) {
    if (l.rows() != d || l.cols() != d) throw DomainError("collapse operator has wrong dimension");
    lk.push_back(l);
    lk_dag_lk.emplace_back(SparseMatrix(l.adjoint()) * l);
  }
  SparseMatrix sum_ldl(d, d);
  for (const auto& m : lk_dag_lk) sum_ldl += m;

  DensityTrajectory out;
  State x = to_state(h.density_to_interaction(t_grid.front(), rho0));
  Matrix k(d, d);
  auto sys = [&](const State& s, State& ds, double t) {
    const auto rho = as_matrix(s, d, d);
    h.apply(t, rho, k);
    ds.resize(s.size());
    auto drho = as_matrix(ds, d, d);
    drho = k + k.adjoint();
    if (!lk.empty()) {
      const Matrix rs = h.density_to_schrodinger(t, rho);
      Matrix dis = -0.5 * (sum_ldl * rs);
      dis += dis.adjoint().eval();
      for (std::size_t i = 0; i < lk.size(); ++i) dis.noalias() += lk[i] * Matrix((lk[i] * rs).adjoint());
      drho += h.density_to_interaction(t, dis);
    }
  };
  auto obs = [&](const State& s, double t) {
    out.times.push_back(t);
    out.states.push_back(h.density_to_schrodinger(t, as_matrix(s, d, d)));
  };
  if (t_grid.size() == 1) {
    obs(x, t_grid.front());
    return out;
  }
  run(sys, x, t_grid, effective_max_step(h, opt, t_grid.back() - t_grid.front()), opt, obs);

  const cplx tr0 = rho0.trace();
  const cplx tr1 = out.states.back().trace();
  if (std::abs(tr1 - tr0) > opt.norm_tol) {
    throw ConvergenceError("trace drifted by " + std::to_string(std::abs(tr1 - tr0)) + " during Lindblad evolution");
  }
  return out;
}

WeakNoiseFidelity weak_noise_fidelity(const TimeDependentHamiltonian& h, const Vector& psi0, const Matrix& targets,
                                      const std::vector<SparseMatrix>& collapse, double t_final,
                                      std::size_t grid_points, const IntegratorOptions& opt) {
  const Eigen::Index d = h.dim();
  if (psi0.size() != d || targets.rows() != d) throw DomainError("state dimension does not match Hamiltonian");
  if (!(t_final > 0.0)) throw DomainError("final time must be positive");
  const auto grid = linear_grid(0.0, t_final, std::max<std::size_t>(grid_points, 3));
  const double max_step = effective_max_step(h, opt, t_final);

  // Forward pass: interaction-picture psi on the grid.
  std::vector<Vector> psi_grid;
  psi_grid.reserve(grid.size());
  {
    State x = to_state(Matrix(psi0));
    Matrix work(d, 1);
    auto sys = [&](const State& s, State& ds, double t) {
      h.apply(t, as_matrix(s, d, 1), work);
      ds.resize(s.size());
      as_matrix(ds, d, 1) = work;
    };
    auto obs = [&](const State& s, double) { psi_grid.emplace_back(as_matrix(s, d, 1)); };
    run(sys, x, grid, max_step, opt, obs);
  }
  WeakNoiseFidelity out;
  out.trajectory.reserve(psi_grid.size());
  for (std::size_t i = 0; i < psi_grid.size(); ++i) out.trajectory.push_back(h.to_schrodinger(grid[i], psi_grid[i]));
  const Vector psi_t = h.to_schrodinger(t_final, psi_grid.back());
  out.final_state = psi_t;
  out.coherent = (targets.adjoint() * psi_t).squaredNorm();
  if (std::abs(psi_t.norm() - psi0.norm()) > opt.norm_tol) throw ConvergenceError("norm drifted in forward pass");
  if (collapse.empty()) return out;

  std::vector<SparseMatrix> ldl;
  for (const auto& l : collapse) ldl.emplace_back(SparseMatrix(l.adjoint()) * l);

  // Backward pass: chi(t) = U(T,t)^dag |c>, integrated forward in tau = T - t.
  std::vector<double> integrand(grid.size(), 0.0);
  {
    std::vector<double> taus;
    taus.reserve(grid.size());
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) taus.push_back(t_final - *it);
    taus.front() = 0.0;
    const Eigen::Index nt = targets.cols();
    const Matrix chi_T = h.to_interaction(t_final, targets);
    const Eigen::VectorXd norms0 = chi_T.colwise().norm().transpose();
    State x = to_state(chi_T);
    Matrix work(d, nt);
    auto sys = [&](const State& s, State& ds, double tau) {
      h.apply(t_final - tau, as_matrix(s, d, nt), work);
      ds.resize(s.size());
      as_matrix(ds, d, nt) = -work;
    };
    std::size_t idx = grid.size();
    Eigen::VectorXd norms1 = norms0;
    auto obs = [&](const State& s, double) {
      --idx;
      const double t = grid[idx];
      const Matrix chi = h.to_schrodinger(t, as_matrix(s, d, nt));
      if (idx == 0) norms1 = chi.colwise().norm().transpose();
      const Vector psi = h.to_schrodinger(t, psi_grid[idx]);
      const Eigen::RowVectorXcd overlap = psi.adjoint() * chi;  // <psi|chi_c>
      double acc = 0.0;
      for (std::size_t k = 0; k < collapse.size(); ++k) {
        const Vector lpsi = collapse[k] * psi;
        const Vector ldlpsi = ldl[k] * psi;
        const Eigen::VectorXcd a = chi.adjoint() * lpsi;
        const Eigen::VectorXcd b = chi.adjoint() * ldlpsi;
        for (Eigen::Index c = 0; c < nt; ++c) acc += std::norm(a(c)) - std::real(b(c) * overlap(c));
      }
      integrand[idx] = acc;
    };
    run(sys, x, taus, max_step, opt, obs);
    if ((norms1 - norms0).cwiseAbs().maxCoeff() > opt.norm_tol) throw ConvergenceError("norm drifted in backward pass");
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) integral += 0.5 * (grid[i] - grid[i - 1]) * (integrand[i] + integrand[i - 1]);
  out.correction = integral;
  return out;
}

}  // namespace msgate
