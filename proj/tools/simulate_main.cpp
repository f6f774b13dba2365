#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bohmsim/outputs.hpp"
#include "bohmsim/simulate_run.hpp"

using namespace bohmsim;

int main(int argc, char **argv) {
  CLI::App app{
      "simulate - pilot-wave photon trajectories for the double-slit, photon-pair\n"
      "and glass-slab scenarios"};

  std::string scenario, config_path, out_dir = ".", format = "csv", plot = "svg",
              sampling;
  std::vector<std::string> params;
  long trajectories = -1;
  long long seed = -1;
  int threads = -1;
  bool selfcheck_only = false;

  app.add_option("--scenario", scenario, "single-slit, two-photon or slab")
      ->check(CLI::IsMember({"single-slit", "two-photon", "slab"}));
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--param", params, "override one key, as key=value (repeatable)");
  app.add_option("--trajectories", trajectories, "ensemble size");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "trajectory table format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--plot", plot, "figure output")->check(CLI::IsMember({"svg", "none"}));
  app.add_option("--sampling", sampling, "initial-condition mode")
      ->check(CLI::IsMember({"uniform", "density"}));
  app.add_option("--threads", threads, "worker count (0 = hardware)");
  app.add_flag("--selfcheck-only", selfcheck_only,
               "run the matrix-identity checks and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return kExitConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      for (const auto &[key, value] : parse_config_file(read_file(config_path)))
        apply_param(cfg, key, value);
    }
    if (!scenario.empty()) cfg.scenario = scenario_from_string(scenario);
    if (trajectories >= 0) cfg.sample.count = static_cast<int>(trajectories);
    if (seed >= 0) cfg.sample.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) cfg.threads = threads;
    if (!sampling.empty())
      cfg.sample.mode = sampling == "uniform" ? SampleMode::uniform_slits
                                              : SampleMode::density_weighted;
    cfg.out_dir = out_dir;
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    cfg.plot_svg = plot == "svg";
    for (const auto &p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--param expects key=value, got '" + p + "'");
      apply_param(cfg, p.substr(0, eq), p.substr(eq + 1));
    }
  } catch (const std::exception &e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  }

  return run_simulation(cfg, selfcheck_only, std::cout, std::cerr);
}
