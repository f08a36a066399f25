#include <CLI11.hpp>

#include "msgate/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dressed-state Molmer-Sorensen gate simulator"};
  app.set_version_flag("--version", MSGATE_VERSION);
  app.require_subcommand(1);

  msgate::CliOptions opt;
  std::uint64_t seed = 0;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--preset", opt.preset, "shipped preset (demonstrated, improved, architecture)");
    sub->add_option("--out", opt.out_dir, "output directory (default $MSGATE_OUT_DIR or ./msgate_out)");
    sub->add_option("--seed", seed, "master seed, overrides the config");
    sub->add_option("--jobs", opt.jobs, "parallel sweep points")->check(CLI::PositiveNumber);
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "gate dynamics and fidelity"},
      {"parity", "parity scan and fit"},
      {"budget", "correction coefficients and error budget"},
      {"crosstalk", "analytic and shaped-pulse crosstalk"},
      {"plan", "zone frequency plan and current ramp"},
      {"cool", "sideband cooling"},
      {"sweep", "parameter sweep"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : msgate::kExitConfig;
  }
  for (const auto& [name, help] : commands) {
    const CLI::App* sub = app.get_subcommand(name);
    if (sub->parsed()) {
      opt.command = name;
      if (sub->count("--seed") > 0) opt.seed = seed;
    }
  }
  return msgate::execute(opt);
}
