#include "msgate/archplan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace msgate {

double crosstalk_estimate(double omega, double delta) {
  if (delta == 0.0 || !std::isfinite(delta)) throw DomainError("crosstalk_estimate: detuning must be non-zero");
  return omega * omega / (2.0 * delta * delta);
}

ShapedCrosstalk shaped_pulse_crosstalk(double omega_max, double delta, double t_w, double t_h) {
  if (!(t_w >= 0.0) || !(t_h >= 0.0)) throw DomainError("shaped_pulse_crosstalk: times must be non-negative");
  const double total = 2.0 * t_w + t_h;
  if (!(total > 0.0)) throw DomainError("shaped_pulse_crosstalk: pulse has zero length");
  if (omega_max == 0.0) return {};
  const double w = angular(omega_max);
  const double d = angular(delta);
  const auto rabi = [&](double t) {
    if (t < t_w) return w * std::pow(std::sin(0.5 * kPi * t / t_w), 2);
    if (t <= t_w + t_h) return w;
    const double s = total - t;
    return s <= 0.0 ? 0.0 : w * std::pow(std::sin(0.5 * kPi * s / t_w), 2);
  };
  // (Re cg, Im cg, Re ce, Im ce, int |ce|^2 dt)
  using State = std::array<double, 5>;
  const auto rhs = [&](const State& x, State& dx, double t) {
    const double o = 0.5 * rabi(t);
    const double h = 0.5 * d;
    // i dc_g = h c_g + o c_e ; i dc_e = o c_g - h c_e
    dx[0] = h * x[1] + o * x[3];
    dx[1] = -(h * x[0] + o * x[2]);
    dx[2] = o * x[1] - h * x[3];
    dx[3] = -(o * x[0] - h * x[2]);
    dx[4] = x[2] * x[2] + x[3] * x[3];
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
  State x{1.0, 0.0, 0.0, 0.0, 0.0};
  const double dt0 = kTwoPi / std::max({std::abs(d), w, kTwoPi / total}) / 100.0;
  const std::array<double, 4> edges{0.0, t_w, t_w + t_h, total};
  try {
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      if (edges[k + 1] > edges[k]) {
        ode::integrate_adaptive(stepper, rhs, x, edges[k], edges[k + 1], std::min(dt0, edges[k + 1] - edges[k]));
      }
    }
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("shaped_pulse_crosstalk: ") + e.what());
  }
  ShapedCrosstalk out;
  out.time_averaged = x[4] / total;
  out.residual = x[2] * x[2] + x[3] * x[3];
  return out;
}

std::string to_string(OperationClass c) {
  switch (c) {
    case OperationClass::Idle: return "idle";
    case OperationClass::Hadamard: return "hadamard";
    case OperationClass::Pi8Z: return "pi8_z";
    case OperationClass::TwoQubit: return "two_qubit";
  }
  return "idle";
}

OperationClass operation_class_from_string(const std::string& s) {
  for (auto c : {OperationClass::Idle, OperationClass::Hadamard, OperationClass::Pi8Z, OperationClass::TwoQubit}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown operation class '" + s + "'");
}

ZonePlan zone_frequency_plan(const std::vector<ZoneSpec>& zones, const ZonePlanOptions& opt) {
  // distinct classes need distinct offsets
  for (std::size_t i = 0; i < zones.size(); ++i) {
    for (std::size_t j = i + 1; j < zones.size(); ++j) {
      if (zones[i].operation != zones[j].operation && zones[i].offset_field == zones[j].offset_field) {
        throw DomainError("zones '" + zones[i].id + "' and '" + zones[j].id +
                          "' have different operations but equal offset fields");
      }
    }
  }
  ZonePlan plan;
  if (zones.empty()) return plan;
  double lo = zones.front().offset_field;
  double hi = lo;
  for (const auto& z : zones) {
    lo = std::min(lo, z.offset_field);
    hi = std::max(hi, z.offset_field);
    plan.zones.push_back({z.id, opt.base_frequency + opt.zeeman_slope * z.offset_field, 0.0, ""});
  }
  plan.field_range = hi - lo;
  for (std::size_t i = 0; i < zones.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < zones.size(); ++j) {
      if (i == j) continue;
      const double sep = std::abs(plan.zones[i].frequency - plan.zones[j].frequency);
      if (j > i) plan.separations.push_back({{i, j}, sep});
      if (sep < best) {
        best = sep;
        plan.zones[i].nearest_zone = zones[j].id;
      }
    }
    plan.zones[i].min_separation = std::isfinite(best) ? best : 0.0;
  }
  return plan;
}

std::vector<ZoneSpec> minimal_universal_zones(double step_gauss, double gradient) {
  std::vector<ZoneSpec> out;
  int k = 0;
  for (auto c : {OperationClass::Idle, OperationClass::Hadamard, OperationClass::Pi8Z, OperationClass::TwoQubit}) {
    out.push_back({to_string(c), c, step_gauss * k, gradient, {}});
    ++k;
  }
  return out;
}

CurrentRamp current_ramp(double dB, double t_ramp, double dac_rate, int dac_bits, double full_scale, double b_start) {
  if (!(dac_rate > 0.0) || dac_bits < 1 || dac_bits > 52) throw DomainError("current_ramp: bad DAC rate or bit depth");
  if (!(full_scale > 0.0)) throw DomainError("current_ramp: full scale must be positive");
  if (!(t_ramp >= 0.0)) throw DomainError("current_ramp: negative ramp time");
  const auto n = static_cast<long>(std::llround(t_ramp * dac_rate));
  if (n < 1) throw DomainError("current_ramp: ramp shorter than one DAC sample");
  const double b_end = b_start + dB;
  if (std::min(b_start, b_end) < 0.0 || std::max(b_start, b_end) > full_scale) {
    throw DomainError("current_ramp: fields outside the DAC full scale");
  }
  CurrentRamp out;
  out.quantization_step = full_scale / std::ldexp(1.0, dac_bits);
  const double top = std::ldexp(1.0, dac_bits) - 1.0;
  for (long k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n) * t_ramp;
    const double s = std::sin(0.5 * kPi * static_cast<double>(k) / static_cast<double>(n));
    const double ideal = b_start + dB * s * s;
    const double code = std::clamp(std::round(ideal / out.quantization_step), 0.0, top);
    const double q = code * out.quantization_step;
    out.times.push_back(t);
    out.samples.push_back(q);
    out.max_quantization_error = std::max(out.max_quantization_error, std::abs(q - ideal));
  }
  return out;
}

CrosstalkReport crosstalk_report(const std::vector<double>& frequencies, const std::vector<CrosstalkField>& fields,
                                 CrosstalkMethod method) {
  const auto n = static_cast<Eigen::Index>(frequencies.size());
  CrosstalkReport r;
  r.method = method;
  r.total = Eigen::MatrixXd::Zero(n, n);
  for (const auto& f : fields) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double delta = frequencies[static_cast<std::size_t>(j)] - frequencies[static_cast<std::size_t>(i)];
        if (method == CrosstalkMethod::Analytic) {
          c(i, j) = crosstalk_estimate(f.rabi, delta);
        } else {
          // square pulses are characterised by the time average, shaped ones by what is left behind
          const ShapedCrosstalk sc = shaped_pulse_crosstalk(f.rabi, delta, f.t_w, f.t_h);
          c(i, j) = f.t_w > 0.0 ? sc.residual : sc.time_averaged;
        }
      }
    }
    r.total += c;
    r.per_field.emplace_back(f.name, std::move(c));
  }
  r.worst = n > 0 ? r.total.maxCoeff() : 0.0;
  return r;
}

}  // namespace msgate
