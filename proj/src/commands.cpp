#include "msgate/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <random>

#include "msgate/analysis.hpp"
#include "msgate/corrections.hpp"

namespace msgate {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error("table row width does not match its columns");
  rows.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string code_label(int q) { return to_string(static_cast<CodeState>(q)); }

Json warnings_json(const std::vector<std::string>& w) {
  Json a = Json::array();
  for (const auto& s : w) a.push_back(s);
  return a;
}

void add_population_rows(Table& t, const GateResult& r, const std::string& state) {
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.add_row({state, cell(r.times[k]), cell(r.p_upup[k]), cell(r.p_downdown[k]), cell(r.p_mixed[k]),
               cell(r.p_leak[k])});
  }
}

Table population_table() { return Table{{"state", "t", "p_upup", "p_downdown", "p_mixed", "p_leak"}, {}}; }

void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
  }
}

double params_field(const PhysicalParams& p, const std::string& name) {
  const std::map<std::string, double> m{
      {"nu_z", p.nu_z}, {"nu_s", p.nu_s}, {"gradient", p.gradient}, {"eta", p.eta}, {"omega_0", p.omega_0},
      {"omega_rf", p.omega_rf}, {"omega_mw1", p.omega_mw1}, {"omega_mw2", p.omega_mw2}, {"delta", p.delta},
      {"dressing_detune", p.dressing_detune}, {"Delta1", p.Delta1}, {"Delta2", p.Delta2}, {"Delta_B", p.Delta_B},
      {"zeeman1", p.zeeman1}, {"zeeman2", p.zeeman2}, {"clock_split", p.clock_split},
      {"clock_frequency", p.clock_frequency}};
  const auto it = m.find(name);
  if (it == m.end()) throw ConfigError("params has no numeric field '" + name + "'");
  return it->second;
}

double baseline_number(const RunConfig& c, const std::string& path) {
  try {
    const Json& v = json_at_path(c.effective, path);
    if (v.is_number()) return v.get<double>();
  } catch (const ConfigError&) {
  }
  if (path.rfind("params.", 0) == 0) return params_field(c.params, path.substr(7));
  throw ConfigError("relative sweep axis '" + path + "' has no numeric baseline");
}

}  // namespace

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(long long v) { return std::to_string(v); }

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += '\n';
  }
  return out;
}

GateSettings resolved_gate_settings(const RunConfig& c) {
  GateSettings s = c.gate;
  if (c.compensation == CompensationMode::Modelled || c.compensation == CompensationMode::Full) {
    const CompensationOffsets off =
        compensation_offsets(correction_coefficients(c.params), c.compensation == CompensationMode::Modelled);
    s.compensation = off.tone_offset;
  } else if (c.compensation == CompensationMode::None) {
    s.compensation = {0.0, 0.0};
  }
  return s;
}

ResultBundle cmd_simulate(const RunConfig& c) {
  ResultBundle b;
  b.command = "simulate";
  const GateSettings base = resolved_gate_settings(c);
  Table pops = population_table();
  b.summary["compensation"] = {base.compensation[0], base.compensation[1]};
  if (c.code_space) {
    Table cs{{"state", "fidelity", "coherent_fidelity", "leakage"}, {}};
    double sum = 0.0;
    for (int q : {3, 2, 1, 0}) {
      GateSettings s = base;
      s.initial = static_cast<CodeState>(q);
      const GateResult r = simulate_gate(c.params, s, c.noise);
      add_population_rows(pops, r, code_label(q));
      cs.add_row({code_label(q), cell(r.bell_fidelity), cell(r.coherent_fidelity), cell(r.p_leak.back())});
      sum += r.bell_fidelity;
      merge_warnings(b.warnings, r.warnings);
      b.summary["gate_time"] = r.gate_time;
      b.summary["delta"] = r.delta;
      b.summary["method"] = r.method;
    }
    b.summary["process_fidelity"] = sum / 4.0;
    b.summary["fidelity"] = sum / 4.0;
    b.tables.emplace_back("code_space", std::move(cs));
  } else {
    const GateResult r = simulate_gate(c.params, base, c.noise);
    add_population_rows(pops, r, code_label(static_cast<int>(base.initial)));
    merge_warnings(b.warnings, r.warnings);
    b.summary["fidelity"] = r.bell_fidelity;
    b.summary["bell_fidelity"] = r.bell_fidelity;
    b.summary["coherent_fidelity"] = r.coherent_fidelity;
    b.summary["noise_correction"] = r.noise_correction;
    b.summary["leakage"] = r.p_leak.back();
    b.summary["truncation_leakage"] = r.truncation_leakage;
    b.summary["gate_time"] = r.gate_time;
    b.summary["delta"] = r.delta;
    b.summary["method"] = r.method;
  }
  b.tables.emplace_back("populations", std::move(pops));
  return b;
}

ResultBundle cmd_parity(const RunConfig& c) {
  ResultBundle b;
  b.command = "parity";
  const GateSettings s = resolved_gate_settings(c);
  std::vector<double> phi;
  const std::size_t n = c.parity.phi_points;
  for (std::size_t i = 0; i < n; ++i) phi.push_back(kPi * static_cast<double>(i) / static_cast<double>(n - 1));
  const ParityScan scan = simulate_parity_scan(c.params, s, c.noise, phi);
  merge_warnings(b.warnings, scan.gate.warnings);

  std::vector<double> data = scan.parity;
  if (c.parity.shots > 0) {
    std::mt19937_64 rng(c.seed);
    for (auto& v : data) {
      std::binomial_distribution<int> dist(c.parity.shots, std::clamp(0.5 * (1.0 + v), 0.0, 1.0));
      v = 2.0 * dist(rng) / c.parity.shots - 1.0;
    }
  }
  const ParityFit fit = fit_parity(phi, data);
  Table t{{"phi", "parity_model", "parity_data", "parity_fit"}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    t.add_row({cell(phi[i]), cell(scan.parity[i]), cell(data[i]),
               cell(fit.amplitude * std::cos(2.0 * phi[i] + fit.phase) + fit.offset)});
  }
  const Matrix& rho = scan.gate.qubit_density;
  const double tr = rho.trace().real();
  const double pops = (rho(0, 0).real() + rho(3, 3).real()) / tr;
  b.summary["amplitude"] = fit.amplitude;
  b.summary["amplitude_error"] = fit.amplitude_error();
  b.summary["phase"] = fit.phase;
  b.summary["offset"] = fit.offset;
  b.summary["populations"] = pops;
  b.summary["bell_fidelity_from_parity"] = bell_fidelity(std::clamp(pops, 0.0, 1.0), std::clamp(fit.amplitude, 0.0, 1.0));
  b.summary["fidelity"] = scan.gate.bell_fidelity;
  b.summary["gate_time"] = scan.gate.gate_time;
  b.tables.emplace_back("parity", std::move(t));
  return b;
}

ResultBundle cmd_budget(const RunConfig& c) {
  ResultBundle b;
  b.command = "budget";
  const CorrectionCoefficients coef = correction_coefficients(c.params, c.budget.omega_mw, c.noise.dressing_imbalance);
  Table ct{{"coefficient", "value"}, {}};
  for (const auto& [k, v] : correction_table(coef)) ct.add_row({k, cell(v)});
  const CompensationOffsets off = compensation_offsets(coef);
  const CompensationOffsets off_m = compensation_offsets(coef, true);
  for (int i = 0; i < 2; ++i) {
    ct.add_row({"tone_offset_full_" + std::to_string(i + 1), cell(off.tone_offset[static_cast<std::size_t>(i)])});
    ct.add_row({"tone_offset_modelled_" + std::to_string(i + 1), cell(off_m.tone_offset[static_cast<std::size_t>(i)])});
  }
  const ErrorBudget eb = error_budget(c.params, resolved_gate_settings(c), c.budget.noise.value_or(c.noise),
                                     c.budget.code_space);
  Table bt{{"source", "infidelity", "kind"}, {}};
  for (const auto& e : eb.entries) bt.add_row({e.source, cell(e.infidelity), e.analytic ? "analytic" : "simulated"});
  b.summary["baseline_fidelity"] = eb.baseline_fidelity;
  for (const auto& e : eb.entries) b.summary[e.source] = e.infidelity;
  b.tables.emplace_back("coefficients", std::move(ct));
  b.tables.emplace_back("budget", std::move(bt));
  return b;
}

ResultBundle cmd_crosstalk(const RunConfig& c) {
  ResultBundle b;
  b.command = "crosstalk";
  Table checks{{"name", "omega", "delta", "C"}, {}};
  for (const auto& k : c.crosstalk.checks) {
    const double v = crosstalk_estimate(k.omega, k.delta);
    checks.add_row({k.name, cell(k.omega), cell(k.delta), cell(v)});
    if (!k.name.empty()) b.summary[k.name] = v;
  }
  Table shaped{{"name", "omega_max", "delta", "t_w", "t_h", "residual", "time_averaged", "square_estimate"}, {}};
  for (const auto& k : c.crosstalk.shaped) {
    const ShapedCrosstalk s = shaped_pulse_crosstalk(k.omega_max, k.delta, k.t_w, k.t_h);
    shaped.add_row({k.name, cell(k.omega_max), cell(k.delta), cell(k.t_w), cell(k.t_h), cell(s.residual),
                    cell(s.time_averaged), cell(crosstalk_estimate(k.omega_max, k.delta))});
    if (!k.name.empty()) b.summary[k.name] = s.residual;
  }
  b.tables.emplace_back("checks", std::move(checks));
  b.tables.emplace_back("shaped", std::move(shaped));
  if (!c.crosstalk.frequencies.empty()) {
    const CrosstalkReport r = crosstalk_report(c.crosstalk.frequencies, c.crosstalk.fields, c.crosstalk.method);
    Table m{{"field", "i", "j", "C"}, {}};
    for (const auto& [name, mat] : r.per_field) {
      for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index j = 0; j < mat.cols(); ++j) {
          if (i != j) m.add_row({name, cell(static_cast<long long>(i)), cell(static_cast<long long>(j)), cell(mat(i, j))});
        }
      }
    }
    for (Eigen::Index i = 0; i < r.total.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.total.cols(); ++j) {
        if (i != j) m.add_row({"total", cell(static_cast<long long>(i)), cell(static_cast<long long>(j)), cell(r.total(i, j))});
      }
    }
    b.summary["worst"] = r.worst;
    b.tables.emplace_back("matrix", std::move(m));
  }
  return b;
}

ResultBundle cmd_plan(const RunConfig& c) {
  ResultBundle b;
  b.command = "plan";
  const ZonePlan plan = zone_frequency_plan(c.plan.zones, c.plan.options);
  Table z{{"zone", "frequency", "min_separation", "nearest_zone"}, {}};
  for (const auto& f : plan.zones) z.add_row({f.id, cell(f.frequency), cell(f.min_separation), f.nearest_zone});
  Table sep{{"zone_a", "zone_b", "separation"}, {}};
  for (const auto& [ij, v] : plan.separations) sep.add_row({plan.zones[ij.first].id, plan.zones[ij.second].id, cell(v)});
  b.summary["field_range"] = plan.field_range;
  b.tables.emplace_back("zones", std::move(z));
  b.tables.emplace_back("separations", std::move(sep));
  if (c.plan.ramp) {
    const RampSpec& r = *c.plan.ramp;
    const CurrentRamp ramp = current_ramp(r.dB, r.t_ramp, r.dac_rate, r.dac_bits, r.full_scale, r.b_start);
    Table rt{{"t", "field"}, {}};
    for (std::size_t i = 0; i < ramp.samples.size(); ++i) rt.add_row({cell(ramp.times[i]), cell(ramp.samples[i])});
    b.summary["ramp_samples"] = ramp.samples.size();
    b.summary["quantization_step"] = ramp.quantization_step;
    b.summary["max_quantization_error"] = ramp.max_quantization_error;
    b.tables.emplace_back("ramp", std::move(rt));
  }
  return b;
}

ResultBundle cmd_cool(const RunConfig& c) {
  ResultBundle b;
  b.command = "cool";
  const CoolingSchedule sched = default_cooling_schedule(c.params, c.cool.repetitions, c.cool.n_max, c.cool.carrier_rabi);
  const CoolingResult r = simulate_sideband_cooling(c.params, sched, c.cool.initial_nbar, c.cool.n_cut);
  Table t{{"repetition", "pulse_duration", "nbar"}, {}};
  for (std::size_t i = 0; i < r.nbar.size(); ++i) {
    t.add_row({cell(i), i == 0 ? "0" : cell(sched.pulse_durations[i - 1]), cell(r.nbar[i])});
  }
  Table d{{"n", "initial", "final"}, {}};
  for (std::size_t n = 0; n < r.distributions.front().size(); ++n) {
    d.add_row({cell(n), cell(r.distributions.front()[n]), cell(r.distributions.back()[n])});
  }
  b.summary["initial_nbar"] = r.nbar.front();
  b.summary["final_nbar"] = r.final_nbar();
  b.tables.emplace_back("cooling", std::move(t));
  b.tables.emplace_back("distribution", std::move(d));
  return b;
}

ResultBundle cmd_sweep(const RunConfig& c, int jobs) {
  if (c.sweep.axes.empty()) throw ConfigError("sweep needs at least one axis");
  ResultBundle b;
  b.command = "sweep";
  std::vector<std::size_t> sizes;
  std::size_t total = 1;
  for (const auto& a : c.sweep.axes) {
    sizes.push_back(a.values.size());
    total *= a.values.size();
  }
  // base document without the sweep section so points parse as plain runs
  Json base = c.effective;
  base.erase("sweep");

  struct Point {
    std::vector<Json> values;
    std::string status = "ok";
    std::string error;
    Json summary = Json::object();
    std::vector<std::string> warnings;
  };
  std::vector<Point> points(total);
  const auto run_point = [&](std::size_t idx) {
    Point& pt = points[idx];
    std::size_t rem = idx;
    Json doc = base;
    // last axis varies fastest
    std::vector<std::size_t> index(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
      index[k] = rem % sizes[k];
      rem /= sizes[k];
    }
    try {
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        const SweepAxis& ax = c.sweep.axes[k];
        Json v = ax.values[index[k]];
        if (ax.relative) {
          if (!v.is_number()) throw ConfigError("relative sweep values must be numbers");
          v = v.get<double>() * baseline_number(c, ax.path);
        }
        pt.values.push_back(v);
        set_json_path(doc, ax.path, v);
      }
      doc["seed"] = static_cast<long long>(c.seed + idx);
      const RunConfig pc = parse_config(doc);
      const ResultBundle r = run_command(c.sweep.command, pc, 1);
      pt.summary = r.summary;
      pt.warnings = r.warnings;
    } catch (const ConfigError& e) {
      pt.status = "config_error";
      pt.error = e.what();
    } catch (const std::exception& e) {
      pt.status = "failed";
      pt.error = e.what();
    }
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < total; start += workers) {
    std::vector<std::future<void>> fut;
    for (std::size_t i = start; i < std::min(total, start + workers); ++i) {
      fut.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_point, i));
    }
    for (auto& f : fut) f.get();
  }

  std::map<std::string, bool> metric_keys;
  for (const auto& p : points) {
    for (const auto& [k, v] : p.summary.items()) {
      if (v.is_number()) metric_keys[k] = true;
    }
  }
  Table t;
  t.columns.push_back("point");
  for (const auto& a : c.sweep.axes) t.columns.push_back(a.path);
  t.columns.push_back("status");
  for (const auto& [k, _] : metric_keys) t.columns.push_back(k);
  t.columns.push_back("error");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const Point& p = points[i];
    std::vector<std::string> row{cell(i)};
    for (std::size_t k = 0; k < c.sweep.axes.size(); ++k) {
      row.push_back(k < p.values.size() ? (p.values[k].is_number() ? cell(p.values[k].get<double>()) : p.values[k].dump())
                                        : "");
    }
    row.push_back(p.status);
    for (const auto& [k, _] : metric_keys) {
      row.push_back(p.summary.contains(k) && p.summary.at(k).is_number() ? cell(p.summary.at(k).get<double>()) : "");
    }
    row.push_back(p.error);
    t.add_row(std::move(row));
    if (p.status == "ok") ++ok;
    merge_warnings(b.warnings, p.warnings);
  }
  b.summary["points"] = total;
  b.summary["succeeded"] = ok;
  b.tables.emplace_back("sweep", std::move(t));
  if (ok == 0) b.exit_code = kExitSweepFailed;
  return b;
}

ResultBundle run_command(const std::string& name, const RunConfig& c, int jobs) {
  if (name == "simulate") return cmd_simulate(c);
  if (name == "parity") return cmd_parity(c);
  if (name == "budget") return cmd_budget(c);
  if (name == "crosstalk") return cmd_crosstalk(c);
  if (name == "plan") return cmd_plan(c);
  if (name == "cool") return cmd_cool(c);
  if (name == "sweep") return cmd_sweep(c, jobs);
  throw ConfigError("unknown command '" + name + "'");
}

void write_bundle(const ResultBundle& b, const Json& metadata, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, t] : b.tables) {
    std::ofstream out(dir / (name + ".csv"), std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / (name + ".csv")).string());
    out << t.to_csv();
  }
  std::ofstream meta(dir / "metadata.json");
  if (!meta) throw Error("cannot write " + (dir / "metadata.json").string());
  meta << metadata.dump(2) << '\n';
}

int execute(const CliOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::path out_dir = opt.out_dir;
  if (out_dir.empty()) {
    const char* env = std::getenv("MSGATE_OUT_DIR");
    out_dir = env && *env ? env : "msgate_out";
  }
  Json meta;
  meta["tool"] = "msgate";
  meta["version"] = MSGATE_VERSION;
  meta["command"] = opt.command;
  const auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    Json err{{"status", kind}, {"exit_code", code}, {"message", msg}, {"command", opt.command}};
    try {
      std::filesystem::create_directories(out_dir);
      std::ofstream(out_dir / "error.json") << err.dump(2) << '\n';
    } catch (...) {
    }
    std::fprintf(stderr, "msgate: %s: %s\n", kind.c_str(), msg.c_str());
    return code;
  };
  RunConfig cfg;
  try {
    Json doc = Json::object();
    if (!opt.config_path.empty()) doc = read_json_file(opt.config_path);
    if (!opt.preset.empty()) {
      if (doc.contains("preset")) throw ConfigError("--preset given and config names a preset too");
      doc["preset"] = opt.preset;
    }
    if (opt.seed) doc["seed"] = static_cast<long long>(*opt.seed);
    cfg = parse_config(doc);
    if (opt.command == "sweep" && cfg.sweep.axes.empty()) throw ConfigError("sweep needs at least one axis");
    if (opt.jobs < 1) throw ConfigError("--jobs must be positive");
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config_error", e.what());
  } catch (const Json::exception& e) {
    return fail(kExitConfig, "config_error", e.what());
  }
  ResultBundle b;
  try {
    b = run_command(opt.command, cfg, opt.jobs);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config_error", e.what());
  } catch (const std::exception& e) {
    return fail(kExitSimulation, "simulation_error", e.what());
  }
  meta["config"] = cfg.effective;
  meta["seed"] = cfg.seed;
  meta["summary"] = b.summary;
  meta["warnings"] = warnings_json(b.warnings);
  meta["tables"] = Json::array();
  for (const auto& [name, t] : b.tables) meta["tables"].push_back(name + ".csv");
  meta["status"] = b.exit_code == kExitOk ? "ok" : "all_points_failed";
  meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_bundle(b, meta, out_dir);
  } catch (const std::exception& e) {
    return fail(kExitSimulation, "io_error", e.what());
  }
  for (const auto& w : b.warnings) std::fprintf(stderr, "msgate: warning: %s\n", w.c_str());
  std::printf("%s\n", b.summary.dump().c_str());
  return b.exit_code;
}

}  // namespace msgate
