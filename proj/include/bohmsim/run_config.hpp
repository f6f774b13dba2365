#pragma once

#include <map>
#include <optional>
#include <string>

#include "bohmsim/ensemble_stats.hpp"
#include "bohmsim/scenario_fields.hpp"
#include "bohmsim/trajectory_engine.hpp"

namespace bohmsim {

enum class ScenarioKind { single_slit, two_photon, slab };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string &name);

enum class OutputFormat { csv, json };

/// Everything a run needs, with scenario-dependent integrator defaults left
/// optional until resolved. Every key here can be set from the config file
/// or overridden with --param key=value.
struct RunConfig {
  ScenarioKind scenario = ScenarioKind::single_slit;

  DoubleSlitConfig slit;  // single-slit and two-photon scenarios
  SlabConfig slab;

  std::optional<double> dt;
  std::optional<double> stop_x;
  std::optional<double> stop_time;
  std::optional<int> max_steps;
  std::optional<double> x_launch;  // double-slit launch plane, defaults to 50 d
  Method method = Method::rk4;
  double node_slowdown = 0.25;
  int record_stride = 10;

  SampleSpec sample;

  std::string out_dir = ".";
  OutputFormat format = OutputFormat::csv;
  bool plot_svg = true;
  int threads = 0;

  /// Integrator with all scenario defaults materialized.
  IntegratorConfig make_integrator() const;
  double launch_x() const { return x_launch.value_or(50.0 * slit.d); }
  double fringe_spacing() const;  // detection-line fringe period

  /// Fully resolved key = value view, sufficient to rerun identically.
  std::map<std::string, std::string> materialize() const;
};

/// Sets one key; throws std::invalid_argument on unknown keys or bad values.
void apply_param(RunConfig &cfg, const std::string &key, const std::string &value);

/// Flat key = value text with # comments under a [scenario] section header.
/// Returns the key/value pairs in file order; validation happens when they
/// are applied.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string &text);

}  // namespace bohmsim
