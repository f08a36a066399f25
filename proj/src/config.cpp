#include "msgate/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace msgate {

namespace {

using Keys = std::set<std::string>;

void check_keys(const Json& j, const Keys& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + (where.empty() ? "config" : where));
  }
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double get_number(const Json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(where, key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(where, key) + " must be finite");
  return x;
}

double get_non_negative(const Json& j, const std::string& key, double fallback, const std::string& where) {
  const double x = get_number(j, key, fallback, where);
  if (x < 0.0) throw ConfigError(join(where, key) + " must be non-negative");
  return x;
}

long long get_int(const Json& j, const std::string& key, long long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(where, key) + " must be an integer");
  return v.get<long long>();
}

bool get_bool(const Json& j, const std::string& key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(join(where, key) + " must be true or false");
  return j.at(key).get<bool>();
}

std::string get_string(const Json& j, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(join(where, key) + " must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_numbers(const Json& j, const std::string& key, const std::string& where) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ConfigError(join(where, key) + " must be an array");
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(join(where, key) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

template <class E>
E get_enum(const Json& j, const std::string& key, E fallback, const std::vector<std::pair<std::string, E>>& names,
           const std::string& where) {
  if (!j.contains(key)) return fallback;
  const std::string s = get_string(j, key, "", where);
  for (const auto& [n, e] : names) {
    if (n == s) return e;
  }
  std::string opts;
  for (const auto& [n, e] : names) opts += (opts.empty() ? "" : ", ") + n;
  throw ConfigError(join(where, key) + " must be one of: " + opts);
}

PhysicalParams parse_params(const Json& j) {
  const std::string w = "params";
  check_keys(j, {"base", "nu_z", "nu_s", "gradient", "eta", "omega_0", "omega_rf", "omega_mw1", "omega_mw2", "delta",
                 "dressing_detune", "Delta1", "Delta2", "Delta_B", "zeeman1", "zeeman2", "mass_amu", "clock_split",
                 "clock_frequency"},
             w);
  const std::string base = get_string(j, "base", "demonstrated", w);
  PhysicalParams p;
  if (base == "demonstrated") {
    p = PhysicalParams::demonstrated();
  } else if (base == "improved") {
    p = PhysicalParams::improved();
  } else {
    throw ConfigError("params.base must be 'demonstrated' or 'improved'");
  }
  p.nu_s = get_non_negative(j, "nu_s", p.nu_s, w);
  // keep the sqrt(3) ratio unless both are given
  p.nu_z = j.contains("nu_z") ? get_non_negative(j, "nu_z", p.nu_z, w) : p.nu_s / std::sqrt(3.0);
  p.gradient = get_non_negative(j, "gradient", p.gradient, w);
  p.eta = get_non_negative(j, "eta", p.eta, w);
  p.omega_0 = get_non_negative(j, "omega_0", p.omega_0, w);
  p.omega_rf = j.contains("omega_rf") ? get_non_negative(j, "omega_rf", p.omega_rf, w) : std::sqrt(2.0) * p.omega_0;
  p.omega_mw1 = get_non_negative(j, "omega_mw1", p.omega_mw1, w);
  p.omega_mw2 = get_non_negative(j, "omega_mw2", p.omega_mw2, w);
  p.delta = get_non_negative(j, "delta", p.delta, w);
  p.dressing_detune = get_number(j, "dressing_detune", p.dressing_detune, w);
  p.Delta1 = get_number(j, "Delta1", p.Delta1, w);
  p.Delta2 = get_number(j, "Delta2", p.Delta2, w);
  p.Delta_B = get_number(j, "Delta_B", p.Delta_B, w);
  p.zeeman1 = get_number(j, "zeeman1", p.zeeman1, w);
  p.zeeman2 = get_number(j, "zeeman2", p.zeeman2, w);
  if (j.contains("mass_amu")) p.mass = get_non_negative(j, "mass_amu", 0.0, w) * constants::amu;
  p.clock_split = get_number(j, "clock_split", p.clock_split, w);
  p.clock_frequency = get_non_negative(j, "clock_frequency", p.clock_frequency, w);
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  return p;
}

CodeState parse_code_state(const std::string& s) {
  if (s == "DD" || s == "up_up") return CodeState::UpUp;
  if (s == "D0'" || s == "up_down") return CodeState::UpDown;
  if (s == "0'D" || s == "down_up") return CodeState::DownUp;
  if (s == "0'0'" || s == "down_down") return CodeState::DownDown;
  throw ConfigError("gate.initial must be one of DD, D0', 0'D, 0'0'");
}

void parse_integrator(const Json& j, IntegratorOptions& o) {
  const std::string w = "integrator";
  check_keys(j, {"abs_tol", "rel_tol", "max_step", "max_steps", "norm_tol"}, w);
  o.abs_tol = get_non_negative(j, "abs_tol", o.abs_tol, w);
  o.rel_tol = get_non_negative(j, "rel_tol", o.rel_tol, w);
  o.max_step = get_non_negative(j, "max_step", o.max_step, w);
  const long long steps = get_int(j, "max_steps", static_cast<long long>(o.max_steps), w);
  if (steps < 1) throw ConfigError("integrator.max_steps must be positive");
  o.max_steps = static_cast<std::size_t>(steps);
  o.norm_tol = get_non_negative(j, "norm_tol", o.norm_tol, w);
  if (!(o.abs_tol > 0.0) || !(o.rel_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
}

void parse_gate(const Json& j, RunConfig& c) {
  const std::string w = "gate";
  check_keys(j, {"frame", "n_cut", "nbar", "shape", "t_ramp", "t_ramp_periods", "auto_timing", "tune_detuning",
                 "gate_time", "order", "compensation", "rf_enabled", "time_points", "initial", "code_space",
                 "noise_method", "weak_noise_grid", "weak_noise_phonons", "b_noise_shots", "truncation_threshold"},
             w);
  GateSettings& g = c.gate;
  g.frame = get_enum<Frame>(j, "frame", g.frame,
                            {{"effective", Frame::Effective}, {"transformed", Frame::Transformed},
                             {"bare", Frame::BareRotating}},
                            w);
  const long long n_cut = get_int(j, "n_cut", g.n_cut, w);
  if (n_cut < 1 || n_cut > 200) throw ConfigError("gate.n_cut must lie in [1, 200]");
  g.n_cut = static_cast<int>(n_cut);
  g.nbar = get_non_negative(j, "nbar", g.nbar, w);
  g.shape = get_enum<EnvelopeShape>(j, "shape", g.shape,
                                    {{"rectangular", EnvelopeShape::Rectangular}, {"sin2", EnvelopeShape::Sin2Ramp}}, w);
  if (j.contains("t_ramp") && j.contains("t_ramp_periods")) {
    throw ConfigError("gate.t_ramp and gate.t_ramp_periods are exclusive");
  }
  g.t_ramp = get_non_negative(j, "t_ramp", g.t_ramp, w);
  // ramp length in units of pi/nu
  if (j.contains("t_ramp_periods")) g.t_ramp = get_non_negative(j, "t_ramp_periods", 0.0, w) * kPi / angular(c.params.nu());
  g.auto_timing = get_bool(j, "auto_timing", g.auto_timing, w);
  g.tune_detuning = get_bool(j, "tune_detuning", g.tune_detuning, w);
  g.gate_time = get_non_negative(j, "gate_time", g.gate_time, w);
  if (!g.auto_timing && !(g.gate_time > 0.0)) throw ConfigError("gate.gate_time is required when auto_timing is false");
  g.order = get_enum<LambDickeOrder>(j, "order", g.order,
                                     {{"exact", LambDickeOrder::Exact}, {"first", LambDickeOrder::First}}, w);
  if (j.contains("compensation")) {
    const Json& v = j.at("compensation");
    if (v.is_string()) {
      c.compensation = get_enum<CompensationMode>(
          j, "compensation", CompensationMode::None,
          {{"none", CompensationMode::None}, {"modelled", CompensationMode::Modelled}, {"full", CompensationMode::Full}},
          w);
    } else {
      const auto vals = get_numbers(j, "compensation", w);
      if (vals.size() != 2) throw ConfigError("gate.compensation must be a mode name or two offsets in Hz");
      c.compensation = CompensationMode::Manual;
      g.compensation = {vals[0], vals[1]};
    }
  }
  g.rf_enabled = get_bool(j, "rf_enabled", g.rf_enabled, w);
  const long long tp = get_int(j, "time_points", static_cast<long long>(g.time_points), w);
  if (tp < 2) throw ConfigError("gate.time_points must be at least 2");
  g.time_points = static_cast<std::size_t>(tp);
  if (j.contains("initial")) g.initial = parse_code_state(get_string(j, "initial", "", w));
  c.code_space = get_bool(j, "code_space", c.code_space, w);
  g.noise_method = get_enum<NoiseMethod>(j, "noise_method", g.noise_method,
                                         {{"auto", NoiseMethod::Auto}, {"lindblad", NoiseMethod::Lindblad},
                                          {"weak_noise", NoiseMethod::WeakNoise}},
                                         w);
  const long long wg = get_int(j, "weak_noise_grid", static_cast<long long>(g.weak_noise_grid), w);
  if (wg < 0 || wg == 1) throw ConfigError("gate.weak_noise_grid must be 0 or at least 2");
  g.weak_noise_grid = static_cast<std::size_t>(wg);
  const long long wp = get_int(j, "weak_noise_phonons", g.weak_noise_phonons, w);
  if (wp < 0) throw ConfigError("gate.weak_noise_phonons must be non-negative");
  g.weak_noise_phonons = static_cast<int>(wp);
  const long long bs = get_int(j, "b_noise_shots", static_cast<long long>(g.b_noise_shots), w);
  if (bs < 1) throw ConfigError("gate.b_noise_shots must be positive");
  g.b_noise_shots = static_cast<std::size_t>(bs);
  g.truncation_threshold = get_non_negative(j, "truncation_threshold", g.truncation_threshold, w);
}

void parse_noise(const Json& j, NoiseModel& n) {
  const std::string w = "noise";
  check_keys(j, {"heating_rate", "depol_time", "b_noise_rms", "dressing_imbalance"}, w);
  n.heating_rate = get_non_negative(j, "heating_rate", n.heating_rate, w);
  n.depol_time = get_non_negative(j, "depol_time", n.depol_time, w);
  n.b_noise_rms = get_non_negative(j, "b_noise_rms", n.b_noise_rms, w);
  if (j.contains("dressing_imbalance")) {
    const auto v = get_numbers(j, "dressing_imbalance", w);
    if (v.size() != 2) throw ConfigError("noise.dressing_imbalance needs two values");
    n.dressing_imbalance = {v[0], v[1]};
  }
}

void parse_crosstalk(const Json& j, CrosstalkSection& x) {
  const std::string w = "crosstalk";
  check_keys(j, {"checks", "shaped", "frequencies", "fields", "method"}, w);
  if (j.contains("checks")) {
    for (const auto& e : j.at("checks")) {
      check_keys(e, {"name", "omega", "delta"}, "crosstalk.checks[]");
      x.checks.push_back({get_string(e, "name", "", w), get_number(e, "omega", 0.0, w), get_number(e, "delta", 0.0, w)});
    }
  }
  if (j.contains("shaped")) {
    for (const auto& e : j.at("shaped")) {
      check_keys(e, {"name", "omega_max", "delta", "t_w", "t_h"}, "crosstalk.shaped[]");
      x.shaped.push_back({get_string(e, "name", "", w), get_number(e, "omega_max", 0.0, w),
                          get_number(e, "delta", 0.0, w), get_non_negative(e, "t_w", 0.0, w),
                          get_non_negative(e, "t_h", 0.0, w)});
    }
  }
  x.frequencies = get_numbers(j, "frequencies", w);
  if (j.contains("fields")) {
    for (const auto& e : j.at("fields")) {
      check_keys(e, {"name", "rabi", "t_w", "t_h"}, "crosstalk.fields[]");
      x.fields.push_back({get_string(e, "name", "", w), get_non_negative(e, "rabi", 0.0, w),
                          get_non_negative(e, "t_w", 0.0, w), get_non_negative(e, "t_h", 0.0, w)});
    }
  }
  x.method = get_enum<CrosstalkMethod>(j, "method", x.method,
                                       {{"analytic", CrosstalkMethod::Analytic},
                                        {"shaped_numerical", CrosstalkMethod::ShapedNumerical}},
                                       w);
}

void parse_plan(const Json& j, PlanSection& p) {
  const std::string w = "plan";
  check_keys(j, {"zones", "zeeman_slope", "base_frequency", "ramp"}, w);
  if (j.contains("zones")) {
    for (const auto& e : j.at("zones")) {
      check_keys(e, {"id", "operation", "offset_field", "gradient", "ion_positions"}, "plan.zones[]");
      ZoneSpec z;
      z.id = get_string(e, "id", "", w);
      try {
        z.operation = operation_class_from_string(get_string(e, "operation", "idle", w));
      } catch (const ConfigError& err) {
        throw ConfigError(std::string("plan.zones[].") + err.what());
      }
      z.offset_field = get_number(e, "offset_field", 0.0, w);
      z.gradient = get_number(e, "gradient", 0.0, w);
      z.ion_positions = get_numbers(e, "ion_positions", w);
      p.zones.push_back(std::move(z));
    }
  }
  p.options.zeeman_slope = get_number(j, "zeeman_slope", p.options.zeeman_slope, w);
  p.options.base_frequency = get_number(j, "base_frequency", p.options.base_frequency, w);
  if (j.contains("ramp")) {
    const Json& r = j.at("ramp");
    check_keys(r, {"dB", "t_ramp", "dac_rate", "dac_bits", "full_scale", "b_start"}, "plan.ramp");
    RampSpec s;
    s.dB = get_number(r, "dB", s.dB, "plan.ramp");
    s.t_ramp = get_non_negative(r, "t_ramp", s.t_ramp, "plan.ramp");
    s.dac_rate = get_non_negative(r, "dac_rate", s.dac_rate, "plan.ramp");
    s.dac_bits = static_cast<int>(get_int(r, "dac_bits", s.dac_bits, "plan.ramp"));
    s.full_scale = get_non_negative(r, "full_scale", s.full_scale, "plan.ramp");
    s.b_start = get_number(r, "b_start", s.b_start, "plan.ramp");
    p.ramp = s;
  }
}

void parse_cool(const Json& j, CoolSection& c) {
  const std::string w = "cool";
  check_keys(j, {"initial_nbar", "n_cut", "repetitions", "n_max", "carrier_rabi"}, w);
  c.initial_nbar = get_non_negative(j, "initial_nbar", c.initial_nbar, w);
  c.n_cut = static_cast<int>(get_int(j, "n_cut", c.n_cut, w));
  c.repetitions = static_cast<int>(get_int(j, "repetitions", c.repetitions, w));
  c.n_max = static_cast<int>(get_int(j, "n_max", c.n_max, w));
  c.carrier_rabi = get_non_negative(j, "carrier_rabi", c.carrier_rabi, w);
  if (c.n_cut < 1 || c.repetitions < 1 || c.n_max < 1) throw ConfigError("cool sizes must be positive");
}

void parse_sweep(const Json& j, SweepSection& s) {
  const std::string w = "sweep";
  check_keys(j, {"command", "axes"}, w);
  s.command = get_string(j, "command", s.command, w);
  static const Keys commands{"simulate", "parity", "budget", "crosstalk", "plan", "cool"};
  if (!commands.count(s.command)) throw ConfigError("sweep.command '" + s.command + "' cannot be swept");
  if (j.contains("axes")) {
    if (!j.at("axes").is_array()) throw ConfigError("sweep.axes must be an array");
    for (const auto& a : j.at("axes")) {
      check_keys(a, {"path", "values", "relative"}, "sweep.axes[]");
      SweepAxis axis;
      axis.path = get_string(a, "path", "", w);
      if (axis.path.empty()) throw ConfigError("sweep axis needs a path");
      if (!a.contains("values") || !a.at("values").is_array() || a.at("values").empty()) {
        throw ConfigError("sweep axis '" + axis.path + "' needs a non-empty values array");
      }
      for (const auto& v : a.at("values")) axis.values.push_back(v);
      axis.relative = get_bool(a, "relative", false, w);
      s.axes.push_back(std::move(axis));
    }
  }
}

}  // namespace

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("MSGATE_PRESET_DIR")) return env;
  return MSGATE_PRESET_DIR;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

Json load_preset(const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos || name.find("..") != std::string::npos) {
    throw ConfigError("invalid preset name '" + name + "'");
  }
  const auto path = preset_directory() / (name + ".json");
  if (!std::filesystem::exists(path)) throw ConfigError("unknown preset '" + name + "'");
  return read_json_file(path);
}

Json resolve_presets(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("preset")) return doc;
  if (!doc.at("preset").is_string()) throw ConfigError("preset must be a string");
  Json base = resolve_presets(load_preset(doc.at("preset").get<std::string>()));
  Json overlay = doc;
  overlay.erase("preset");
  base.merge_patch(overlay);
  base.erase("preset");
  return base;
}

RunConfig parse_config(const Json& doc_in) {
  const Json doc = resolve_presets(doc_in);
  check_keys(doc, {"description", "seed", "params", "gate", "integrator", "noise", "parity", "budget", "crosstalk",
                   "plan", "cool", "sweep"},
             "");
  RunConfig c;
  c.effective = doc;
  if (doc.contains("description") && !doc.at("description").is_string()) {
    throw ConfigError("description must be a string");
  }
  const long long seed = get_int(doc, "seed", 1, "");
  if (seed < 0) throw ConfigError("seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.params = parse_params(doc.value("params", Json::object()));
  parse_gate(doc.value("gate", Json::object()), c);
  parse_integrator(doc.value("integrator", Json::object()), c.gate.integrator);
  parse_noise(doc.value("noise", Json::object()), c.noise);
  c.noise.seed = c.seed;
  if (doc.contains("parity")) {
    const Json& j = doc.at("parity");
    check_keys(j, {"phi_points", "shots"}, "parity");
    const long long pts = get_int(j, "phi_points", static_cast<long long>(c.parity.phi_points), "parity");
    if (pts < 6) throw ConfigError("parity.phi_points must be at least 6");
    c.parity.phi_points = static_cast<std::size_t>(pts);
    c.parity.shots = static_cast<int>(get_int(j, "shots", c.parity.shots, "parity"));
    if (c.parity.shots < 0) throw ConfigError("parity.shots must be non-negative");
  }
  if (doc.contains("budget")) {
    const Json& j = doc.at("budget");
    check_keys(j, {"code_space", "omega_mw", "noise"}, "budget");
    c.budget.code_space = get_bool(j, "code_space", false, "budget");
    c.budget.omega_mw = get_non_negative(j, "omega_mw", 0.0, "budget");
    if (j.contains("noise")) {
      NoiseModel n;
      parse_noise(j.at("noise"), n);
      n.seed = c.seed;
      c.budget.noise = n;
    }
  }
  if (doc.contains("crosstalk")) parse_crosstalk(doc.at("crosstalk"), c.crosstalk);
  if (doc.contains("plan")) parse_plan(doc.at("plan"), c.plan);
  if (doc.contains("cool")) parse_cool(doc.at("cool"), c.cool);
  if (doc.contains("sweep")) parse_sweep(doc.at("sweep"), c.sweep);
  return c;
}

const Json& json_at_path(const Json& doc, const std::string& path) {
  const Json* cur = &doc;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!cur->is_object() || !cur->contains(part)) throw ConfigError("config has no entry '" + path + "'");
    cur = &cur->at(part);
  }
  return *cur;
}

void set_json_path(Json& doc, const std::string& path, const Json& value) {
  Json* cur = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty config path");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur->is_object()) throw ConfigError("config path '" + path + "' crosses a non-object");
    cur = &(*cur)[parts[i]];
    if (cur->is_null()) *cur = Json::object();
  }
  (*cur)[parts.back()] = value;
}

std::string to_string(CodeState s) {
  switch (s) {
    case CodeState::UpUp: return "DD";
    case CodeState::UpDown: return "D0'";
    case CodeState::DownUp: return "0'D";
    case CodeState::DownDown: return "0'0'";
  }
  return "0'0'";
}

std::string to_string(CompensationMode m) {
  switch (m) {
    case CompensationMode::None: return "none";
    case CompensationMode::Modelled: return "modelled";
    case CompensationMode::Full: return "full";
    case CompensationMode::Manual: return "manual";
  }
  return "none";
}

}  // namespace msgate
