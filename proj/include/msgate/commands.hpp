#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msgate/config.hpp"

namespace msgate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSimulation = 3;
inline constexpr int kExitSweepFailed = 4;

// Plain text cells; numbers are written with 17 significant digits so reruns
// compare equal byte for byte.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_csv() const;
};

std::string cell(double v);
std::string cell(long long v);
inline std::string cell(int v) { return cell(static_cast<long long>(v)); }
inline std::string cell(std::size_t v) { return cell(static_cast<long long>(v)); }
inline std::string cell(const std::string& s) { return s; }
inline std::string cell(const char* s) { return s; }

struct ResultBundle {
  std::string command;
  Json summary = Json::object();  // scalar results
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::string> warnings;
  int exit_code = kExitOk;
};

// Tone offsets for the configured compensation mode.
GateSettings resolved_gate_settings(const RunConfig& c);

ResultBundle cmd_simulate(const RunConfig& c);
ResultBundle cmd_parity(const RunConfig& c);
ResultBundle cmd_budget(const RunConfig& c);
ResultBundle cmd_crosstalk(const RunConfig& c);
ResultBundle cmd_plan(const RunConfig& c);
ResultBundle cmd_cool(const RunConfig& c);
// Cartesian product of the axes; failing points are recorded, not fatal.
ResultBundle cmd_sweep(const RunConfig& c, int jobs = 1);

ResultBundle run_command(const std::string& name, const RunConfig& c, int jobs = 1);

// <dir>/<table>.csv for each table plus <dir>/metadata.json.
void write_bundle(const ResultBundle& b, const Json& metadata, const std::filesystem::path& dir);

struct CliOptions {
  std::string command;
  std::string config_path;
  std::string preset;
  std::string out_dir;  // empty: $MSGATE_OUT_DIR, else ./msgate_out
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

// Loads the config, runs the command, writes results. Returns the exit code;
// failures are also written to <out>/error.json.
int execute(const CliOptions& opt);

}  // namespace msgate
