#include "msgate/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace msgate {

namespace {

Matrix pauli_y() {
  Matrix y(2, 2);
  y << 0.0, kI, -kI, 0.0;
  return y;
}

Vector code_vector(CodeState s) {
  Vector v = Vector::Zero(4);
  v(static_cast<int>(s)) = 1.0;
  return v;
}

struct FrameModel {
  Space space;
  TimeDependentHamiltonian h;
  Matrix qubits;  // spin_dim x 4, columns |q1 q2> in spin coordinates
};

Matrix qubit_embedding(const Space& space) {
  const auto [down, up] = qubit_vectors(space);
  const std::array<Vector, 2> q{down, up};
  Matrix out(space.spin_dim(), 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out.col(2 * a + b) = Eigen::kroneckerProduct(q[static_cast<std::size_t>(a)], q[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

// 4-vector in qubit coordinates -> space vector with Fock level n.
Vector embed_qubits(const FrameModel& m, const Vector& c, int n) {
  const Vector spin = m.qubits * c;
  Vector fock = Vector::Zero(m.space.boson_dim());
  fock(n) = 1.0;
  return Eigen::kroneckerProduct(spin, fock);
}

// Qubit density (4x4) traced over the mode, from a pure state or a density.
Matrix reduce_pure(const FrameModel& m, const Vector& psi) {
  const Eigen::Map<const Matrix> amp(psi.data(), m.space.boson_dim(), m.space.spin_dim());
  const Matrix a = m.qubits.adjoint() * amp.transpose();  // 4 x boson
  return a * a.adjoint();
}

Matrix reduce_density(const FrameModel& m, const Matrix& rho) {
  const int nb = m.space.boson_dim();
  Matrix out = Matrix::Zero(4, 4);
  // rho(s n, s' n) blocks
  for (int n = 0; n < nb; ++n) {
    Matrix block(m.space.spin_dim(), m.space.spin_dim());
    for (int s = 0; s < m.space.spin_dim(); ++s) {
      for (int t = 0; t < m.space.spin_dim(); ++t) block(s, t) = rho(s * nb + n, t * nb + n);
    }
    out += m.qubits.adjoint() * block * m.qubits;
  }
  return out;
}

FrameModel build_model(const PhysicalParams& p, const GateSettings& s, const PulseEnvelope& env,
                       const NoiseModel& noise, double zeeman_offset) {
  HilbertConfig cfg;
  cfg.n_cut = s.n_cut;
  if (s.frame == Frame::Effective) cfg.ion_levels = {"0'", "D"};
  Space space(cfg);
  ModelOptions opt;
  opt.order = s.order;
  opt.dressing_imbalance = noise.dressing_imbalance;
  opt.zeeman_offset = zeeman_offset;
  TimeDependentHamiltonian h;
  if (s.frame == Frame::Effective) {
    h = h_effective_gate(p, space, env);
  } else {
    std::vector<DriveField> drives;
    if (s.rf_enabled) drives = gate_drives(p, env, s.compensation);
    h = s.frame == Frame::Transformed ? h_full_gate(p, space, drives, opt) : h_bare_gate(p, space, drives, opt);
  }
  Matrix q = qubit_embedding(space);
  return {std::move(space), std::move(h), std::move(q)};
}

// Real part of e^{i delta T/2} alpha(T); vanishes at loop closure for symmetric envelopes.
double closure_function(const PulseEnvelope& env, double delta) {
  const double T = env.duration();
  const std::size_t n = 4001;
  double acc = 0.0;
  const double h = T / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * env.value(t) * std::cos(delta * (t - 0.5 * T));
  }
  return acc * h / 3.0;
}

// 2 g^2 int int_{t2<t1} f1 f2 sin(delta (t1 - t2)) and |alpha(T)| (both in angular units).
std::pair<double, double> loop_phase(const PulseEnvelope& env, double g, double delta) {
  const double T = env.duration();
  const std::size_t n = 200001;
  const double h = T / static_cast<double>(n - 1);
  double c = 0.0;
  double sn = 0.0;
  double phase = 0.0;
  double prev_f = env.value(0.0);
  double prev_int = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double t0 = h * static_cast<double>(i - 1);
    const double t1 = h * static_cast<double>(i);
    const double f1 = env.value(t1);
    c += 0.5 * h * (prev_f * std::cos(delta * t0) + f1 * std::cos(delta * t1));
    sn += 0.5 * h * (prev_f * std::sin(delta * t0) + f1 * std::sin(delta * t1));
    const double integ = f1 * (std::sin(delta * t1) * c - std::cos(delta * t1) * sn);
    phase += 0.5 * h * (prev_int + integ);
    prev_int = integ;
    prev_f = f1;
  }
  return {2.0 * g * g * phase, g * std::hypot(c, sn)};
}

}  // namespace

Matrix ms_unitary(double theta) {
  const Matrix yy = Eigen::kroneckerProduct(pauli_y(), pauli_y()).eval();
  // (sigma_y sigma_y)^2 = 1
  return std::cos(theta) * Matrix::Identity(4, 4) + kI * std::sin(theta) * yy;
}

GateTiming plan_gate_timing(const PhysicalParams& p, EnvelopeShape shape, double t_ramp, bool tune_detuning) {
  if (!(p.delta > 0.0)) throw DomainError("gate detuning must be positive");
  if (t_ramp < 0.0) throw DomainError("ramp time must be non-negative");
  GateTiming out;
  double delta = angular(p.delta);
  const double g = 0.5 * p.eta * angular(p.omega_0);
  const double ramp = shape == EnvelopeShape::Rectangular ? 0.0 : t_ramp;
  for (int iter = 0; iter < (tune_detuning ? 8 : 1); ++iter) {
    const double period = kTwoPi / delta;
    PulseEnvelope env{shape, ramp, 0.0};
    double hold = std::max(0.0, period - ramp);
    if (ramp > 0.0) {
      const auto f = [&](double th) {
        env.t_hold = th;
        return closure_function(env, delta);
      };
      double lo = std::max(0.0, hold - 0.25 * period);
      double hi = hold + 0.25 * period;
      if (f(lo) * f(hi) > 0.0) throw ConvergenceError("could not bracket the loop-closure time");
      boost::uintmax_t it = 100;
      const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), it);
      hold = 0.5 * (r.first + r.second);
    }
    env.t_hold = hold;
    const auto [phase, alpha] = loop_phase(env, g, delta);
    out.envelope = env;
    out.delta = hertz(delta);
    out.gate_time = env.duration();
    out.phase = phase;
    out.residual_alpha = alpha;
    if (!tune_detuning || phase <= 0.0) break;
    delta *= std::sqrt(phase / (kPi / 4.0));
  }
  return out;
}

GateResult simulate_gate(const PhysicalParams& p_in, const GateSettings& s, const NoiseModel& noise) {
  p_in.validate();
  noise.validate();
  if (s.n_cut < 1) throw DomainError("gate simulation needs n_cut >= 1");
  GateResult result;
  PhysicalParams p = p_in;
  PulseEnvelope env;
  if (s.auto_timing) {
    const GateTiming timing = plan_gate_timing(p, s.shape, s.t_ramp, s.tune_detuning);
    env = timing.envelope;
    p.delta = timing.delta;
  } else {
    if (!(s.gate_time > 0.0)) throw DomainError("gate_time must be positive without auto timing");
    env = s.shape == EnvelopeShape::Rectangular ? PulseEnvelope::rectangular(s.gate_time)
                                                : PulseEnvelope::sin2(s.t_ramp, s.gate_time - 2.0 * s.t_ramp);
  }
  result.gate_time = env.duration();
  result.delta = p.delta;
  if (s.frame != Frame::BareRotating && !effective_regime_ok(p)) {
    result.warnings.push_back("delta << W_mw/sqrt2 << nu is not satisfied");
  }

  std::vector<double> zeeman_shots{0.0};
  if (noise.b_noise_rms > 0.0) {
    if (s.frame == Frame::Effective) {
      result.warnings.push_back("magnetic noise has no first-order effect in the effective frame; ignored");
    } else {
      std::mt19937_64 rng(noise.seed);
      std::normal_distribution<double> dist(0.0, noise.b_noise_rms);
      zeeman_shots.clear();
      for (std::size_t i = 0; i < std::max<std::size_t>(s.b_noise_shots, 1); ++i) zeeman_shots.push_back(dist(rng));
    }
  }
  if (s.frame == Frame::Effective && (noise.dressing_imbalance[0] != 0.0 || noise.dressing_imbalance[1] != 0.0)) {
    result.warnings.push_back("dressing imbalance has no representation in the effective frame; ignored");
  }

  const double T = env.duration();
  // Compensated tones define the qubit frame: |up> of ion i rotates at the tone offset.
  Eigen::VectorXcd frame_phase = Eigen::VectorXcd::Ones(4);
  for (int q = 0; q < 4; ++q) {
    if (q & 2) frame_phase(q) *= std::polar(1.0, -angular(s.compensation[0]) * T);
    if (q & 1) frame_phase(q) *= std::polar(1.0, -angular(s.compensation[1]) * T);
  }
  const Vector target_q = frame_phase.asDiagonal() * (ms_unitary() * code_vector(s.initial));
  const Vector initial_q = code_vector(s.initial);
  const auto grid = linear_grid(0.0, T, std::max<std::size_t>(s.time_points, 2));
  const double shot_weight = 1.0 / static_cast<double>(zeeman_shots.size());

  result.times = grid;
  result.p_upup.assign(grid.size(), 0.0);
  result.p_downdown.assign(grid.size(), 0.0);
  result.p_mixed.assign(grid.size(), 0.0);
  result.p_leak.assign(grid.size(), 0.0);
  result.qubit_density = Matrix::Zero(4, 4);
  Matrix final_rho;
  double fidelity = 0.0;
  double coherent = 0.0;
  double correction = 0.0;

  const auto accumulate = [&](std::size_t k, const Matrix& rq, double total, double w) {
    result.p_downdown[k] += w * rq(0, 0).real();
    result.p_mixed[k] += w * (rq(1, 1).real() + rq(2, 2).real());
    result.p_upup[k] += w * rq(3, 3).real();
    result.p_leak[k] += w * (total - rq.trace().real());
  };

  for (std::size_t shot = 0; shot < zeeman_shots.size(); ++shot) {
    const double b = zeeman_shots[shot];
    FrameModel m = build_model(p, s, env, noise, b);
    const std::vector<SparseMatrix> collapse = [&] {
      std::vector<SparseMatrix> ops;
      const double eta_shift = s.frame == Frame::Transformed ? p.eta : 0.0;
      for (auto& l : heating_collapse_ops(m.space, noise.heating_rate, eta_shift)) ops.push_back(std::move(l));
      for (auto& l : depolarization_collapse_ops(m.space, noise.depol_time)) ops.push_back(std::move(l));
      return ops;
    }();
    const auto d = static_cast<Eigen::Index>(m.space.dim());

    // Initial mixture over Fock levels.
    const ThermalDistribution thermal = thermal_distribution(s.nbar, m.space.n_cut());
    if (thermal.leakage > s.truncation_threshold) {
      throw TruncationError("thermal tail beyond n_cut is " + std::to_string(thermal.leakage));
    }
    std::vector<int> fock;
    std::vector<double> weights;
    for (int n = 0; n <= m.space.n_cut(); ++n) {
      const double w = thermal.probabilities[static_cast<std::size_t>(n)];
      if (w > 1e-12) {
        fock.push_back(n);
        weights.push_back(w);
      }
    }
    Matrix psi0(d, static_cast<Eigen::Index>(fock.size()));
    for (std::size_t i = 0; i < fock.size(); ++i) psi0.col(static_cast<Eigen::Index>(i)) = embed_qubits(m, initial_q, fock[i]);

    Matrix target_proj(d, m.space.boson_dim());
    for (int n = 0; n < m.space.boson_dim(); ++n) target_proj.col(n) = embed_qubits(m, target_q, n);

    const bool dissipative = !collapse.empty();
    NoiseMethod method = s.noise_method;
    if (method == NoiseMethod::Auto) method = (!dissipative || d <= 100) ? NoiseMethod::Lindblad : NoiseMethod::WeakNoise;

    if (!dissipative) {
      result.method = "unitary";
      const auto traj = evolve_unitary(m.h, psi0, grid, s.integrator);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        Matrix rq = Matrix::Zero(4, 4);
        double total = 0.0;
        for (std::size_t i = 0; i < fock.size(); ++i) {
          const Vector col = traj.states[k].col(static_cast<Eigen::Index>(i));
          rq += weights[i] * reduce_pure(m, col);
          total += weights[i] * col.squaredNorm();
          result.truncation_leakage = std::max(result.truncation_leakage, top_fock_population(m.space, col));
        }
        accumulate(k, rq, total, shot_weight);
      }
      const Matrix& fin = traj.states.back();
      Matrix rho = Matrix::Zero(d, d);
      double f = 0.0;
      for (std::size_t i = 0; i < fock.size(); ++i) {
        const Vector col = fin.col(static_cast<Eigen::Index>(i));
        rho += weights[i] * col * col.adjoint();
        f += weights[i] * (target_proj.adjoint() * col).squaredNorm();
      }
      if (final_rho.size() == 0) final_rho = Matrix::Zero(d, d);
      final_rho += shot_weight * rho;
      fidelity += shot_weight * f;
      coherent += shot_weight * f;
    } else if (method == NoiseMethod::Lindblad) {
      result.method = "lindblad";
      Matrix rho0 = Matrix::Zero(d, d);
      for (std::size_t i = 0; i < fock.size(); ++i) {
        rho0 += weights[i] * psi0.col(static_cast<Eigen::Index>(i)) * psi0.col(static_cast<Eigen::Index>(i)).adjoint();
      }
      const auto traj = evolve_lindblad(m.h, rho0, collapse, grid, s.integrator);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        accumulate(k, reduce_density(m, traj.states[k]), traj.states[k].trace().real(), shot_weight);
        result.truncation_leakage = std::max(result.truncation_leakage, top_fock_population(m.space, traj.states[k]));
      }
      const Matrix& rho = traj.states.back();
      if (final_rho.size() == 0) final_rho = Matrix::Zero(d, d);
      final_rho += shot_weight * rho;
      const double f = (target_proj.adjoint() * rho * target_proj).trace().real();
      fidelity += shot_weight * f;
      coherent += shot_weight * f;
    } else {
      result.method = "weak-noise";
      const int kmax = std::min(s.weak_noise_phonons, m.space.n_cut());
      const Matrix targets = target_proj.leftCols(kmax + 1);
      std::size_t points = s.weak_noise_grid;
      if (points == 0) {
        const double f = std::max(m.h.max_frequency(), kTwoPi / T);
        points = static_cast<std::size_t>(std::ceil(T * f / kTwoPi * 8.0)) + 1;
      }
      if (final_rho.size() == 0) final_rho = Matrix::Zero(d, d);
      for (std::size_t i = 0; i < fock.size(); ++i) {
        const Vector col0 = psi0.col(static_cast<Eigen::Index>(i));
        const WeakNoiseFidelity wn = weak_noise_fidelity(m.h, col0, targets, collapse, T, points, s.integrator);
        const double full = (target_proj.adjoint() * wn.final_state).squaredNorm();
        const double w = shot_weight * weights[i];
        fidelity += w * (full + wn.correction);
        coherent += w * full;
        correction += w * wn.correction;
        final_rho += w * wn.final_state * wn.final_state.adjoint();
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const std::size_t idx = std::min(wn.trajectory.size() - 1,
                                           static_cast<std::size_t>(std::llround(grid[k] / T * static_cast<double>(wn.trajectory.size() - 1))));
          const Vector& st = wn.trajectory[idx];
          accumulate(k, reduce_pure(m, st), st.squaredNorm(), w);
          result.truncation_leakage = std::max(result.truncation_leakage, top_fock_population(m.space, st));
        }
      }
    }
    if (zeeman_shots.size() > 1) result.method += "+b-noise";
    if (shot + 1 == zeeman_shots.size()) result.qubit_density = reduce_density(m, final_rho);
  }
  if (result.truncation_leakage > s.truncation_threshold) {
    throw TruncationError("population of Fock level n_cut reached " + std::to_string(result.truncation_leakage));
  }
  result.qubit_density = frame_phase.conjugate().asDiagonal() * result.qubit_density * frame_phase.asDiagonal();
  result.final_state = QuantumState::density(final_rho, BasisTag{s.frame, s.frame == Frame::Effective ? LevelBasis::Dressed : LevelBasis::Bare}, 1e-6);
  result.bell_fidelity = fidelity;
  result.coherent_fidelity = coherent;
  result.noise_correction = correction;
  return result;
}

CodeSpaceResult simulate_code_space(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise) {
  CodeSpaceResult out;
  const std::array<CodeState, 4> states{CodeState::UpUp, CodeState::UpDown, CodeState::DownUp, CodeState::DownDown};
  for (std::size_t i = 0; i < states.size(); ++i) {
    GateSettings si = s;
    si.initial = states[i];
    const GateResult r = simulate_gate(p, si, noise);
    out.fidelity[i] = r.bell_fidelity;
    out.leakage[i] = r.p_leak.back();
    out.gate_time = r.gate_time;
  }
  return out;
}

double parity_after_analysis(const Matrix& rho_qubits, double phi) {
  if (rho_qubits.rows() != 4 || rho_qubits.cols() != 4) throw DomainError("parity needs a 4x4 qubit density");
  const double tr = rho_qubits.trace().real();
  if (!(tr > 0.0)) throw DomainError("qubit density has zero trace");
  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const Matrix gen = std::cos(phi) * x + std::sin(phi) * pauli_y();
  const Matrix r = std::cos(kPi / 4.0) * Matrix::Identity(2, 2) - kI * std::sin(kPi / 4.0) * gen;
  const Matrix rr = Eigen::kroneckerProduct(r, r).eval();
  const Matrix out = rr * (rho_qubits / tr) * rr.adjoint();
  return out(0, 0).real() + out(3, 3).real() - out(1, 1).real() - out(2, 2).real();
}

ParityScan simulate_parity_scan(const PhysicalParams& p, const GateSettings& s, const NoiseModel& noise,
                                const std::vector<double>& phi_grid) {
  ParityScan scan;
  scan.gate = simulate_gate(p, s, noise);
  scan.phi = phi_grid;
  for (double phi : phi_grid) scan.parity.push_back(parity_after_analysis(scan.gate.qubit_density, phi));
  return scan;
}

CoolingSchedule default_cooling_schedule(const PhysicalParams& p, int repetitions, int n_max, double carrier_rabi) {
  if (repetitions < 1 || n_max < 1) throw DomainError("cooling schedule needs positive sizes");
  if (!(p.eta > 0.0) || !(carrier_rabi > 0.0)) throw DomainError("cooling schedule needs eta and Rabi > 0");
  CoolingSchedule out;
  out.carrier_rabi = carrier_rabi;
  const double w = p.eta * angular(carrier_rabi);
  for (int k = 0; k < repetitions; ++k) {
    const double frac = repetitions == 1 ? 1.0 : static_cast<double>(k) / (repetitions - 1);
    const double n = std::pow(static_cast<double>(n_max), 1.0 - frac);
    out.pulse_durations.push_back(kPi / (w * std::sqrt(n)));
  }
  return out;
}

CoolingResult simulate_sideband_cooling(const PhysicalParams& p, const CoolingSchedule& schedule, double initial_nbar,
                                        int n_cut) {
  if (schedule.pulse_durations.empty()) throw DomainError("cooling schedule is empty");
  HilbertConfig cfg;
  cfg.ion_levels = {"0", "+1"};
  cfg.ion_count = 1;
  cfg.n_cut = n_cut;
  const Space space(cfg);
  const TimeDependentHamiltonian h = h_sideband_mw(p, space, Sideband::Red, schedule.carrier_rabi, 0.0);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(h.evaluate(0.0));
  const Matrix& v = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const int nb = space.boson_dim();
  const int ground = space.level_index("0");

  const ThermalDistribution th = thermal_distribution(initial_nbar, n_cut);
  if (th.leakage > 1e-6) throw TruncationError("initial thermal tail beyond n_cut is " + std::to_string(th.leakage));
  Matrix rho_b = Matrix::Zero(nb, nb);
  for (int n = 0; n < nb; ++n) rho_b(n, n) = th.probabilities[static_cast<std::size_t>(n)];

  CoolingResult out;
  const auto record = [&] {
    std::vector<double> dist(static_cast<std::size_t>(nb));
    double nbar = 0.0;
    for (int n = 0; n < nb; ++n) {
      dist[static_cast<std::size_t>(n)] = rho_b(n, n).real();
      nbar += n * rho_b(n, n).real();
    }
    out.nbar.push_back(nbar);
    out.distributions.push_back(std::move(dist));
  };
  record();
  const Matrix v_ground = v.middleRows(ground * nb, nb);  // rows of |0, n>
  for (double t : schedule.pulse_durations) {
    // Columns of U acting on |0, n>: U(:, ground block) = V e^{-i lam t} V(ground rows, :)^dagger
    const Eigen::VectorXcd ph = (-kI * lam.cast<cplx>() * t).array().exp();
    const Matrix u_cols = v * ph.asDiagonal() * v_ground.adjoint();
    const Matrix rho = u_cols * rho_b * u_cols.adjoint();
    if (top_fock_population(space, rho) > 1e-6) throw TruncationError("cooling population reached n_cut");
    Matrix next = Matrix::Zero(nb, nb);
    for (int sidx = 0; sidx < space.levels_per_ion(); ++sidx) next += rho.block(sidx * nb, sidx * nb, nb, nb);
    rho_b = next;
    record();
  }
  return out;
}

}  // namespace msgate
