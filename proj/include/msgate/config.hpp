#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msgate/archplan.hpp"
#include "msgate/simulate.hpp"

namespace msgate {

using Json = nlohmann::json;

enum class CompensationMode { None, Modelled, Full, Manual };

struct ParitySection {
  std::size_t phi_points = 41;
  int shots = 0;  // 0: exact parity, else binomial sampling per point
};

struct BudgetSection {
  bool code_space = false;
  double omega_mw = 0.0;  // 0: mean of the dressing Rabi frequencies
  std::optional<NoiseModel> noise;  // replaces the top-level noise for the budget
};

struct CrosstalkCheck {
  std::string name;
  double omega = 0.0;
  double delta = 0.0;
};

struct ShapedCheck {
  std::string name;
  double omega_max = 0.0;
  double delta = 0.0;
  double t_w = 0.0;
  double t_h = 0.0;
};

struct CrosstalkSection {
  std::vector<CrosstalkCheck> checks;
  std::vector<ShapedCheck> shaped;
  std::vector<double> frequencies;
  std::vector<CrosstalkField> fields;
  CrosstalkMethod method = CrosstalkMethod::Analytic;
};

struct RampSpec {
  double dB = 2.0;
  double t_ramp = 5e-6;
  double dac_rate = 2e6;
  int dac_bits = 16;
  double full_scale = 10.0;
  double b_start = 0.0;
};

struct PlanSection {
  std::vector<ZoneSpec> zones;
  ZonePlanOptions options;
  std::optional<RampSpec> ramp;
};

struct CoolSection {
  double initial_nbar = 5.0;
  int n_cut = 76;
  int repetitions = 500;
  int n_max = 60;
  double carrier_rabi = 74e3;
};

struct SweepAxis {
  std::string path;  // dotted path into the config, e.g. "params.delta"
  std::vector<Json> values;
  bool relative = false;  // values multiply the baseline entry
};

struct SweepSection {
  std::string command = "simulate";
  std::vector<SweepAxis> axes;
};

struct RunConfig {
  Json effective;  // full config after preset merge, echoed into results
  PhysicalParams params;
  GateSettings gate;
  bool code_space = false;
  CompensationMode compensation = CompensationMode::None;
  NoiseModel noise;
  ParitySection parity;
  BudgetSection budget;
  CrosstalkSection crosstalk;
  PlanSection plan;
  CoolSection cool;
  SweepSection sweep;
  std::uint64_t seed = 1;
};

std::filesystem::path preset_directory();
// Reads presets/<name>.json.
Json load_preset(const std::string& name);

// Applies an optional "preset" key (recursively) and merges the document on top.
Json resolve_presets(const Json& doc);

// Strict parse: unknown keys, wrong types or invalid values raise ConfigError.
RunConfig parse_config(const Json& doc);

Json read_json_file(const std::filesystem::path& path);

// Dotted-path access used by sweeps.
const Json& json_at_path(const Json& doc, const std::string& path);
void set_json_path(Json& doc, const std::string& path, const Json& value);

std::string to_string(CodeState s);
std::string to_string(CompensationMode m);

}  // namespace msgate
