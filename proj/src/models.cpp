#include "msgate/models.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace msgate {

namespace {

double level_sz(std::string_view label) {
  if (label == "+1") return 1.0;
  if (label == "-1") return -1.0;
  return 0.0;
}

double ion_eta(const PhysicalParams& p, int ion) { return ion == 0 ? p.eta : -p.eta; }

Matrix single_level_op(const Space& space, std::string_view from, std::string_view to) {
  Matrix m = Matrix::Zero(space.levels_per_ion(), space.levels_per_ion());
  m(space.level_index(to), space.level_index(from)) = 1.0;
  return m;
}

Matrix sz_single(const Space& space) {
  Matrix m = Matrix::Zero(space.levels_per_ion(), space.levels_per_ion());
  if (space.has_level("+1")) m(space.level_index("+1"), space.level_index("+1")) = 1.0;
  if (space.has_level("-1")) m(space.level_index("-1"), space.level_index("-1")) = -1.0;
  return m;
}

// Boson factor exp(alpha (a^dagger - a)) at the requested expansion order.
Matrix displacement_factor(int n_cut, double alpha, LambDickeOrder order) {
  if (order == LambDickeOrder::Exact) return displacement(n_cut, alpha);
  const Matrix a = boson_annihilation(n_cut);
  return Matrix::Identity(n_cut + 1, n_cut + 1) + alpha * (a.adjoint() - a);
}

Eigen::VectorXd number_energies(const Space& space, double nu) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < space.dim(); ++i) e(static_cast<Eigen::Index>(i)) = nu * space.coordinates(i).n;
  return e;
}

void check_order(const Space& space, LambDickeOrder order) {
  if (order == LambDickeOrder::First && space.n_cut() < 1) {
    throw DomainError("first-order Lamb-Dicke expansion needs n_cut >= 1");
  }
}

// Sum of tones sharing one operator.
struct ToneGroup {
  struct Tone {
    double half_rabi;  // rad/s
    double offset;     // rad/s
    double phase;
    PulseEnvelope envelope;
  };
  std::vector<Tone> tones;

  cplx operator()(double t) const {
    cplx c{};
    for (const auto& tone : tones) {
      const double f = tone.envelope.value(t);
      if (f == 0.0) continue;
      c += tone.half_rabi * f * std::polar(1.0, -(tone.offset * t + tone.phase));
    }
    return c;
  }
  double max_frequency() const {
    double f = 0.0;
    for (const auto& tone : tones) f = std::max(f, std::abs(tone.offset));
    return f;
  }
};

void add_drives(TimeDependentHamiltonian& h, const PhysicalParams& p, const Space& space,
                const std::vector<DriveField>& drives, bool displaced, LambDickeOrder order) {
  using Key = std::tuple<int, std::string, std::string>;
  std::map<Key, ToneGroup> groups;
  for (const auto& d : drives) {
    if (d.rabi < 0.0) throw DomainError("drive Rabi frequency must be non-negative");
    if (d.ion < 0 || d.ion >= space.ion_count()) throw DomainError("drive targets a missing ion");
    space.level_index(d.from_level);
    space.level_index(d.to_level);
    groups[{d.ion, d.from_level, d.to_level}].tones.push_back(
        {0.5 * angular(d.rabi), d.offset(p.nu_s), d.phase, d.envelope});
  }
  const Matrix id_b = Matrix::Identity(space.boson_dim(), space.boson_dim());
  for (auto& [key, group] : groups) {
    const auto& [ion, from, to] = key;
    Matrix boson = id_b;
    if (displaced) {
      const double alpha = ion_eta(p, ion) * (level_sz(to) - level_sz(from));
      boson = displacement_factor(space.n_cut(), alpha, order);
    }
    const Matrix op = space.embed_ion_boson(ion, single_level_op(space, from, to), boson);
    const double freq = group.max_frequency();
    h.add_term(op, std::move(group), freq);
  }
}

Matrix zeeman_offset_term(const Space& space, double b_hz) {
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
  if (b_hz == 0.0) return h;
  const Matrix sz = sz_single(space);
  for (int ion = 0; ion < space.ion_count(); ++ion) h += angular(b_hz) * space.embed_ion(ion, sz);
  return h;
}

}  // namespace

double PhysicalParams::eta_from_gradient() const {
  using namespace constants;
  if (nu_s <= 0.0 || mass <= 0.0) throw DomainError("eta needs a positive stretch frequency and mass");
  const double nu = angular(nu_s);
  const double z0 = std::sqrt(hbar / (2.0 * mass * nu));
  return z0 * bohr_magneton * gradient / (std::sqrt(2.0) * hbar * nu);
}

void PhysicalParams::validate() const {
  const auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be finite and non-negative");
  };
  non_negative(nu_z, "nu_z");
  non_negative(nu_s, "nu_s");
  non_negative(gradient, "gradient");
  non_negative(eta, "eta");
  non_negative(omega_0, "omega_0");
  non_negative(omega_rf, "omega_rf");
  non_negative(omega_mw1, "omega_mw1");
  non_negative(omega_mw2, "omega_mw2");
  non_negative(delta, "delta");
  non_negative(mass, "mass");
  if (nu_z > 0.0 && nu_s > 0.0 && std::abs(nu_s - std::sqrt(3.0) * nu_z) > 1e-9 * nu_s) {
    throw DomainError("nu_s must equal sqrt(3) nu_z");
  }
  if (omega_0 > 0.0 && omega_rf > 0.0 && std::abs(omega_rf - std::sqrt(2.0) * omega_0) > 1e-9 * omega_rf) {
    throw DomainError("omega_rf must equal sqrt(2) omega_0");
  }
  if (gradient > 0.0 && eta > 0.0) {
    const double e = eta_from_gradient();
    if (std::abs(e - eta) > 0.02 * eta) {
      throw DomainError("eta " + std::to_string(eta) + " disagrees with gradient value " + std::to_string(e));
    }
  }
}

PhysicalParams PhysicalParams::demonstrated() {
  PhysicalParams p;
  p.nu_s = 459.34e3;
  p.nu_z = p.nu_s / std::sqrt(3.0);
  p.gradient = 23.6;
  p.eta = 0.0041;
  p.omega_0 = 45.4e3;
  p.omega_rf = std::sqrt(2.0) * p.omega_0;
  p.omega_mw1 = 20.5e3;
  p.omega_mw2 = 21.6e3;
  p.delta = 2.0 * p.eta * p.omega_0;
  // Assumed second-order splittings; they reproduce g_ph = 0.7 Hz and 0.3 Hz.
  p.Delta1 = 9932.15;
  p.Delta2 = 6299.0;
  p.zeeman1 = 12.0e6;
  p.zeeman2 = 14.8e6;
  p.Delta_B = p.zeeman2 - p.zeeman1;
  p.clock_split = 11.9e3;
  return p;
}

PhysicalParams PhysicalParams::improved() {
  PhysicalParams p;
  p.nu_s = 1.1e6;
  p.nu_z = p.nu_s / std::sqrt(3.0);
  p.gradient = 150.0;
  p.eta = 0.0071;
  p.omega_0 = 198e3;
  p.omega_rf = std::sqrt(2.0) * p.omega_0;
  p.omega_mw1 = 10e3;
  p.omega_mw2 = 10e3;
  p.delta = 2.0 * p.eta * p.omega_0;
  p.dressing_detune = 0.5e3;
  p.Delta1 = 10e3;
  p.Delta2 = 10e3;
  p.Delta_B = 9.8e6;
  return p;
}

double PulseEnvelope::value(double t) const {
  const double total = duration();
  if (t < 0.0 || t > total) return 0.0;
  if (shape == EnvelopeShape::Rectangular || t_ramp <= 0.0) return 1.0;
  const auto rise = [this](double s) {
    const double x = std::sin(0.5 * kPi * s / t_ramp);
    return x * x;
  };
  if (t < t_ramp) return rise(t);
  if (t > total - t_ramp) return rise(total - t);
  return 1.0;
}

PulseEnvelope PulseEnvelope::rectangular(double duration) {
  if (duration < 0.0) throw DomainError("pulse duration must be non-negative");
  return {EnvelopeShape::Rectangular, 0.0, duration};
}

PulseEnvelope PulseEnvelope::sin2(double t_ramp, double t_hold) {
  if (t_ramp < 0.0 || t_hold < 0.0) throw DomainError("ramp and hold times must be non-negative");
  return {EnvelopeShape::Sin2Ramp, t_ramp, t_hold};
}

std::string to_string(Sideband s) {
  switch (s) {
    case Sideband::Carrier:
      return "carrier";
    case Sideband::Red:
      return "red";
    case Sideband::Blue:
      return "blue";
  }
  return "?";
}

double DriveField::offset(double nu_hz) const {
  const double s = sideband == Sideband::Blue ? 1.0 : sideband == Sideband::Red ? -1.0 : 0.0;
  return angular(s * nu_hz + detuning);
}

std::vector<DriveField> gate_drives(const PhysicalParams& p, const PulseEnvelope& env,
                                    std::array<double, 2> compensation_hz) {
  std::vector<DriveField> out;
  for (int ion = 0; ion < 2; ++ion) {
    for (auto sb : {Sideband::Blue, Sideband::Red}) {
      DriveField d;
      d.ion = ion;
      d.rabi = p.omega_rf;
      d.sideband = sb;
      d.detuning = (sb == Sideband::Blue ? p.delta : -p.delta) + compensation_hz[static_cast<std::size_t>(ion)];
      d.envelope = env;
      out.push_back(d);
    }
  }
  return out;
}

OperatorMatrix h_internal(const PhysicalParams& p, const Space& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  Matrix h = Matrix::Zero(d, d);
  for (int ion = 0; ion < space.ion_count(); ++ion) {
    const double zeeman = ion == 0 ? p.zeeman1 : p.zeeman2;
    const double Delta = ion == 0 ? p.Delta1 : p.Delta2;
    const double w_plus = angular(zeeman + 0.5 * Delta);
    const double w_minus = angular(zeeman - 0.5 * Delta);
    const double w_zero = angular(p.clock_frequency + (ion == 0 ? 0.0 : p.clock_split));
    Matrix single = Matrix::Zero(space.levels_per_ion(), space.levels_per_ion());
    if (space.has_level("0")) single(space.level_index("0"), space.level_index("0")) = -w_zero;
    if (space.has_level("-1")) single(space.level_index("-1"), space.level_index("-1")) = -w_minus;
    if (space.has_level("+1")) single(space.level_index("+1"), space.level_index("+1")) = w_plus;
    h += space.embed_ion(ion, single);
  }
  return {h, BasisTag{Frame::BareRotating, LevelBasis::Bare}};
}

OperatorMatrix h_gradient_coupling(const PhysicalParams& p, const Space& space) {
  const Matrix a = boson_annihilation(space.n_cut());
  const Matrix x = a + a.adjoint();
  const auto d = static_cast<Eigen::Index>(space.dim());
  Matrix h = Matrix::Zero(d, d);
  const double nu = angular(p.nu_s);
  for (int ion = 0; ion < space.ion_count(); ++ion) {
    h += nu * ion_eta(p, ion) * space.embed_ion_boson(ion, sz_single(space), x);
  }
  return {h, BasisTag{Frame::BareRotating, LevelBasis::Bare}};
}

OperatorMatrix polaron_transform(const PhysicalParams& p, const Space& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  // sigma_z terms commute, so the exponential factorizes per ion and per level.
  Matrix u = Matrix::Identity(d, d);
  for (int ion = 0; ion < space.ion_count(); ++ion) {
    Matrix ion_u = Matrix::Zero(d, d);
    for (int l = 0; l < space.levels_per_ion(); ++l) {
      Matrix proj = Matrix::Zero(space.levels_per_ion(), space.levels_per_ion());
      proj(l, l) = 1.0;
      const double m = level_sz(space.levels()[static_cast<std::size_t>(l)]);
      ion_u += space.embed_ion_boson(ion, proj, displacement(space.n_cut(), ion_eta(p, ion) * m));
    }
    u = u * ion_u;
  }
  return {u, BasisTag{Frame::BareRotating, LevelBasis::Bare}};
}

TimeDependentHamiltonian h_sideband_mw(const PhysicalParams& p, const Space& space, Sideband which,
                                       double omega_mw, double delta) {
  if (which == Sideband::Carrier) throw DomainError("sideband term needs red or blue");
  if (space.n_cut() < 1) throw DomainError("sideband coupling needs n_cut >= 1");
  const Matrix a = boson_annihilation(space.n_cut());
  const Matrix boson = which == Sideband::Blue ? Matrix(a.adjoint()) : a;
  const Matrix op = space.embed_ion_boson(0, single_level_op(space, "0", "+1"), boson);
  const double sign = which == Sideband::Blue ? 1.0 : -1.0;
  const double g = sign * 0.5 * p.eta * angular(omega_mw);
  const double w = angular(delta);
  TimeDependentHamiltonian h(static_cast<Eigen::Index>(space.dim()),
                             BasisTag{Frame::Transformed, LevelBasis::Bare});
  h.add_term(op, [g, w](double t) { return g * std::polar(1.0, -w * t); }, w);
  return h;
}

OperatorMatrix h_dressing(const PhysicalParams& p, const Space& space, const ModelOptions& opt, bool displaced) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  Matrix h = Matrix::Zero(d, d);
  const Matrix id_b = Matrix::Identity(space.boson_dim(), space.boson_dim());
  for (int ion = 0; ion < space.ion_count(); ++ion) {
    const double w = angular(ion == 0 ? p.omega_mw1 : p.omega_mw2);
    const double dw = angular(opt.dressing_imbalance[static_cast<std::size_t>(ion)]);
    const Matrix boson = displaced ? displacement_factor(space.n_cut(), ion_eta(p, ion), opt.order) : id_b;
    const Matrix up = space.embed_ion_boson(ion, single_level_op(space, "0", "+1"), boson);
    const Matrix down = space.embed_ion_boson(ion, single_level_op(space, "-1", "0"), boson);
    const Matrix t = 0.5 * (w + 0.5 * dw) * up + 0.5 * (w - 0.5 * dw) * down;
    h += t + t.adjoint();
    Matrix det = Matrix::Zero(space.levels_per_ion(), space.levels_per_ion());
    det(space.level_index("0"), space.level_index("0")) = angular(p.dressing_detune);
    h += space.embed_ion(ion, det);
  }
  const BasisTag tag{displaced ? Frame::Transformed : Frame::BareRotating, LevelBasis::Bare};
  return {h, tag};
}

TimeDependentHamiltonian h_full_gate(const PhysicalParams& p, const Space& space,
                                     const std::vector<DriveField>& drives, const ModelOptions& opt) {
  check_order(space, opt.order);
  const double nu = angular(p.nu_s);
  TimeDependentHamiltonian h(static_cast<Eigen::Index>(space.dim()),
                             BasisTag{Frame::Transformed, LevelBasis::Bare});
  h.set_interaction_frame(number_energies(space, nu), nu);

  const auto d = static_cast<Eigen::Index>(space.dim());
  Matrix x = Matrix::Zero(d, d);
  for (int ion = 0; ion < space.ion_count(); ++ion) x += ion_eta(p, ion) * space.embed_ion(ion, sz_single(space));
  h.add_static(-opt.gradient_shift_scale * nu * x * x);
  h.add_static(h_dressing(p, space, opt, true).matrix());
  h.add_static(zeeman_offset_term(space, opt.zeeman_offset));
  add_drives(h, p, space, drives, true, opt.order);
  return h;
}

TimeDependentHamiltonian h_bare_gate(const PhysicalParams& p, const Space& space,
                                     const std::vector<DriveField>& drives, const ModelOptions& opt) {
  const double nu = angular(p.nu_s);
  TimeDependentHamiltonian h(static_cast<Eigen::Index>(space.dim()),
                             BasisTag{Frame::BareRotating, LevelBasis::Bare});
  h.set_interaction_frame(number_energies(space, nu), nu);
  h.add_static(h_gradient_coupling(p, space).matrix());
  h.add_static(h_dressing(p, space, opt, false).matrix());
  h.add_static(zeeman_offset_term(space, opt.zeeman_offset));
  add_drives(h, p, space, drives, false, opt.order);
  return h;
}

TimeDependentHamiltonian h_effective_gate(const PhysicalParams& p, const Space& space, const PulseEnvelope& env) {
  if (!space.has_level("0'") || !space.has_level("D")) {
    throw DomainError("effective frame needs levels {0', D}");
  }
  if (space.ion_count() != 2) throw DomainError("effective gate needs two ions");
  const Matrix flip = single_level_op(space, "0'", "D") - single_level_op(space, "D", "0'");
  const Matrix sigma_y = -kI * flip;
  const Matrix a = boson_annihilation(space.n_cut());
  const Matrix s_adag = space.embed_ion_boson(0, sigma_y, a.adjoint()) - space.embed_ion_boson(1, sigma_y, a.adjoint());
  const double g = 0.5 * p.eta * angular(p.omega_0);
  const double w = angular(p.delta);
  TimeDependentHamiltonian h(static_cast<Eigen::Index>(space.dim()), BasisTag{Frame::Effective, LevelBasis::Dressed});
  h.add_term(s_adag, [g, w, env](double t) { return kI * g * env.value(t) * std::polar(1.0, -w * t); }, w);
  return h;
}

bool effective_regime_ok(const PhysicalParams& p, double margin) {
  const double gap = p.omega_mw_mean() / std::sqrt(2.0);
  return p.delta * margin < gap && gap * margin < p.nu_s;
}

}  // namespace msgate
