#include <doctest.h>

#include <cmath>

#include "msgate/integrate.hpp"
#include "msgate/noise.hpp"
#include "msgate/simulate.hpp"

using namespace msgate;

namespace {

double w(double hz) { return 2.0 * kPi * hz; }

Space qubit_space(int n_cut) {
  HilbertConfig cfg;
  cfg.ion_count = 1;
  cfg.n_cut = n_cut;
  cfg.ion_levels = {"0'", "D"};
  return Space(cfg);
}

// Two-level drive (W/2)|1><0| e^{-i det t} + h.c. with an optional frame.
TimeDependentHamiltonian rabi_h(double rabi_hz, double det_hz, bool frame) {
  TimeDependentHamiltonian h(2, BasisTag{});
  Matrix op = Matrix::Zero(2, 2);
  op(1, 0) = 1.0;
  const double om = w(rabi_hz);
  if (frame) {
    // carrier at w_q = 5 MHz; tone at w_q + det
    const double wq = w(5e6);
    const double wt = wq + w(det_hz);
    Eigen::VectorXd e(2);
    e << 0.0, wq;
    h.set_interaction_frame(e, wq);
    h.add_term(op, [om, wt](double t) { return 0.5 * om * std::polar(1.0, -wt * t); }, wt);
  } else {
    const double d = w(det_hz);
    Eigen::MatrixXcd s = Matrix::Zero(2, 2);
    s(1, 1) = -d;
    h.add_static(s);
    h.add_term(op, [om](double) { return cplx(0.5 * om); }, 0.0);
  }
  return h;
}

double rabi_closed_form(double rabi_hz, double det_hz, double t) {
  const double om = w(rabi_hz);
  const double d = w(det_hz);
  const double g = std::sqrt(om * om + d * d);
  const double s = std::sin(0.5 * g * t);
  return om * om / (g * g) * s * s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("resonant and detuned Rabi oscillation") {
  Vector psi0 = Vector::Zero(2);
  psi0(0) = 1.0;
  for (bool frame : {false, true}) {
    for (double det : {0.0, 1e3}) {
      const auto h = rabi_h(1e3, det, frame);
      const auto grid = linear_grid(0.0, 1.3e-3, 14);
      const auto traj = evolve_unitary(h, psi0, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p1 = std::norm(traj.states[k](1, 0));
        CHECK(p1 == doctest::Approx(rabi_closed_form(1e3, det, grid[k])).epsilon(1e-7).scale(1.0));
      }
    }
  }
  // with detuning equal to the Rabi frequency the maximum transfer is 1/2
  const double t_peak = kPi / std::sqrt(2.0) / w(1e3);
  const auto traj = evolve_unitary(rabi_h(1e3, 1e3, false), psi0, {0.0, t_peak});
  CHECK(std::norm(traj.states.back()(1, 0)) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("Lindblad without collapse operators is unitary") {
  const auto h = rabi_h(2e3, 700.0, true);
  Vector psi0(2);
  psi0 << std::sqrt(0.3), cplx(0.0, std::sqrt(0.7));
  const auto grid = linear_grid(0.0, 0.8e-3, 5);
  const auto u = evolve_unitary(h, psi0, grid);
  const auto l = evolve_lindblad(h, psi0 * psi0.adjoint(), {}, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vector v = u.states[k].col(0);
    CHECK((l.states[k] - v * v.adjoint()).norm() < 1e-8);
    CHECK(std::abs(l.states[k].trace() - 1.0) < 1e-8);
  }
}

TEST_CASE("heating raises the mean phonon number linearly") {
  const Space s = qubit_space(30);
  const auto d = static_cast<Eigen::Index>(s.dim());
  TimeDependentHamiltonian h(d, BasisTag{});
  h.add_static(Matrix::Zero(d, d));
  const double rate = 200.0;
  const auto ops = heating_collapse_ops(s, rate);
  const auto [down, up] = qubit_vectors(s);
  const std::vector<Vector> spins{down};
  const Vector psi = s.product_vector(spins, 0);
  const double t = 5e-3;  // one quantum
  const auto traj = evolve_lindblad(h, psi * psi.adjoint(), ops, {0.0, t});
  const double nbar = (number_op(s).matrix() * traj.states.back()).trace().real();
  CHECK(nbar == doctest::Approx(rate * t).epsilon(0.02));
  CHECK(std::abs(traj.states.back().trace() - 1.0) < 1e-8);
  CHECK_THROWS_AS(heating_collapse_ops(s, -1.0), DomainError);
  CHECK(heating_collapse_ops(s, 0.0).empty());
}

TEST_CASE("depolarization decays each Bloch component") {
  const Space s = qubit_space(0);
  TimeDependentHamiltonian h(2, BasisTag{});
  h.add_static(Matrix::Zero(2, 2));
  const double t1 = 1e-3;
  const auto ops = depolarization_collapse_ops(s, t1);
  CHECK(ops.size() == 3);
  const auto [down, up] = qubit_vectors(s);
  const Matrix flip = up * down.adjoint();
  const Matrix sx = flip + flip.adjoint();
  const Matrix sz = up * up.adjoint() - down * down.adjoint();
  const Vector plus = (down + up) / std::sqrt(2.0);
  const double t = 0.7e-3;
  for (const auto& [psi, op] : {std::pair<Vector, Matrix>{plus, sx}, std::pair<Vector, Matrix>{up, sz}}) {
    const auto traj = evolve_lindblad(h, psi * psi.adjoint(), ops, {0.0, t});
    const double bloch = (op * traj.states.back()).trace().real();
    CHECK(bloch == doctest::Approx(std::exp(-t / t1)).epsilon(0.02));
  }
}

TEST_CASE("weak-noise fidelity matches Lindblad") {
  const auto h = rabi_h(1e3, 0.0, true);
  Vector psi0 = Vector::Zero(2);
  psi0(0) = 1.0;
  Matrix target = Matrix::Zero(2, 1);
  target(1, 0) = 1.0;
  const double t_pi = 0.5e-3;
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const std::vector<SparseMatrix> ops{to_sparse(std::sqrt(50.0) * lower), to_sparse(std::sqrt(20.0) * Matrix(lower.adjoint()))};
  const auto wn = weak_noise_fidelity(h, psi0, target, ops, t_pi, 4001);
  const auto lb = evolve_lindblad(h, psi0 * psi0.adjoint(), ops, {0.0, t_pi});
  const double f_l = lb.states.back()(1, 1).real();
  CHECK(wn.coherent == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(wn.correction < 0.0);
  // first order: the residual is second order in the rates
  CHECK(std::abs(wn.total() - f_l) < 2e-4);
  CHECK(std::abs(wn.total() - f_l) < 0.05 * std::abs(wn.correction));
}

TEST_CASE("weak-noise and Lindblad agree on the effective gate") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  GateSettings s;
  s.n_cut = 12;
  s.time_points = 3;
  NoiseModel n;
  n.heating_rate = 7.5;
  n.depol_time = 1.1;
  s.noise_method = NoiseMethod::Lindblad;
  const GateResult l = simulate_gate(p, s, n);
  s.noise_method = NoiseMethod::WeakNoise;
  const GateResult wk = simulate_gate(p, s, n);
  CHECK(l.method == "lindblad");
  CHECK(wk.method == "weak-noise");
  CHECK(wk.bell_fidelity == doctest::Approx(l.bell_fidelity).epsilon(5e-4));
  CHECK(l.bell_fidelity < 0.995);
}

TEST_CASE("sideband cooling") {
  const PhysicalParams p = PhysicalParams::demonstrated();
  const CoolingSchedule sched = default_cooling_schedule(p, 500, 60, 74e3);
  CHECK(sched.pulse_durations.size() == 500);
  for (std::size_t i = 1; i < sched.pulse_durations.size(); ++i)
    CHECK(sched.pulse_durations[i] >= sched.pulse_durations[i - 1]);

  const CoolingResult r = simulate_sideband_cooling(p, sched, 5.0, 76);
  CHECK(r.nbar.front() == doctest::Approx(5.0).epsilon(0.01));
  CHECK(r.final_nbar() < 0.2);
  CHECK(r.nbar.size() == sched.pulse_durations.size() + 1);

  const CoolingResult cold = simulate_sideband_cooling(p, default_cooling_schedule(p, 20, 10, 74e3), 0.0, 20);
  for (double nb : cold.nbar) CHECK(nb < 1e-14);
}

TEST_CASE("red sideband pi pulse empties n = 1") {
  // one pulse of the n = 1 pi time starting from a distribution with nbar small
  const PhysicalParams p = PhysicalParams::demonstrated();
  const CoolingSchedule one = default_cooling_schedule(p, 1, 1, 74e3);
  REQUIRE(one.pulse_durations.size() == 1);
  const CoolingResult r = simulate_sideband_cooling(p, one, 0.01, 12);
  const auto& before = r.distributions.front();
  const auto& after = r.distributions.back();
  CHECK(before[1] > 1e-3);
  // n = 2 feeds n = 1 during the pulse, so only most of it is emptied
  CHECK(after[1] < 1e-2 * before[1]);
  CHECK(after[0] == doctest::Approx(before[0] + before[1]).epsilon(1e-4));
}

TEST_CASE("parity after analysis pulses") {
  Matrix product = Matrix::Zero(4, 4);
  product(0, 0) = 1.0;
  const Vector bell = ms_unitary().col(0);
  const Matrix rho_bell = bell * bell.adjoint();
  double lo = 1.0;
  double hi = -1.0;
  for (int k = 0; k <= 90; ++k) {
    const double phi = kPi * k / 90.0;
    CHECK(std::abs(parity_after_analysis(product, phi)) < 1e-12);
    const double par = parity_after_analysis(rho_bell, phi);
    lo = std::min(lo, par);
    hi = std::max(hi, par);
  }
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(lo == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("MS target unitary") {
  const Matrix u = ms_unitary();
  CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() < 1e-14);
  // exp(i pi/4 YY)|00> = (|00> - i|11>)/sqrt2 with sigma_y sigma_y |00> = -|11>
  CHECK(std::abs(u(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(u(3, 0) - cplx(0.0, -1.0 / std::sqrt(2.0))) < 1e-14);
}

TEST_CASE("gate drive off leaves populations unchanged") {
  PhysicalParams p = PhysicalParams::demonstrated();
  p.omega_0 = 0.0;
  p.omega_rf = 0.0;
  GateSettings s;
  s.auto_timing = false;
  s.gate_time = 1e-3;
  s.time_points = 11;
  const GateResult r = simulate_gate(p, s);
  for (double v : r.p_downdown) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.bell_fidelity == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("truncation is reported") {
  GateSettings s;
  s.n_cut = 4;
  s.nbar = 2.0;
  CHECK_THROWS_AS(simulate_gate(PhysicalParams::demonstrated(), s), TruncationError);
}

}  // TEST_SUITE
