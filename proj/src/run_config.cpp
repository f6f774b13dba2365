#include "bohmsim/run_config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bohmsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double parse_double(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception &) {
    throw std::invalid_argument("bad numeric value for '" + key + "': " + value);
  }
}

long parse_long(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("bad integer value for '" + key + "': " + value);
  }
}

bool parse_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("bad boolean value for '" + key + "': " + value);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::single_slit: return "single-slit";
    case ScenarioKind::two_photon: return "two-photon";
    case ScenarioKind::slab: return "slab";
  }
  return "?";
}

ScenarioKind scenario_from_string(const std::string &name) {
  if (name == "single-slit") return ScenarioKind::single_slit;
  if (name == "two-photon") return ScenarioKind::two_photon;
  if (name == "slab") return ScenarioKind::slab;
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (expected single-slit, two-photon or slab)");
}

double RunConfig::fringe_spacing() const { return kPi * slit.D / (slit.k * slit.a); }

IntegratorConfig RunConfig::make_integrator() const {
  IntegratorConfig icfg;
  icfg.method = method;
  icfg.node_slowdown = node_slowdown;
  icfg.record_stride = record_stride;
  switch (scenario) {
    case ScenarioKind::single_slit:
      icfg.dt = dt.value_or(1e-3);
      icfg.stop_x = stop_x.value_or(slit.D);
      icfg.max_steps = max_steps.value_or(30000);
      icfg.domain_lo = Eigen::Vector2d(1e-9, -0.5 * slit.D);
      icfg.domain_hi = Eigen::Vector2d(10.0 * slit.D, 0.5 * slit.D);
      break;
    case ScenarioKind::two_photon:
      icfg.dt = dt.value_or(1e-3);
      if (stop_x) icfg.stop_x = stop_x;
      icfg.stop_time = stop_time.value_or(slit.D);
      icfg.max_steps = max_steps.value_or(8000);
      icfg.domain_lo = Eigen::Vector2d(-0.5 * slit.D, -0.5 * slit.D);
      icfg.domain_hi = Eigen::Vector2d(0.5 * slit.D, 0.5 * slit.D);
      break;
    case ScenarioKind::slab: {
      icfg.dt = dt.value_or(2e-3);
      if (stop_x) icfg.stop_x = stop_x;
      const double span = std::abs(slab.x0) + (slab.slab_end - slab.slab_start);
      icfg.stop_time = stop_time.value_or(2.0 * span + 0.6);
      icfg.max_steps = max_steps.value_or(8000);
      icfg.domain_lo = Eigen::Vector2d(slab.x0 - 2.0 * span, -1.0);
      icfg.domain_hi = Eigen::Vector2d(slab.slab_end + 2.0 * span, 1.0);
      break;
    }
  }
  return icfg;
}

void apply_param(RunConfig &cfg, const std::string &key, const std::string &value) {
  if (key == "scenario") {
    cfg.scenario = scenario_from_string(value);
  } else if (key == "E0") {
    cfg.slit.E0 = cfg.slab.E0 = parse_double(key, value);
  } else if (key == "B0") {
    cfg.slit.B0 = parse_double(key, value);
  } else if (key == "k") {
    cfg.slit.k = parse_double(key, value);
  } else if (key == "lambda") {
    const double lambda = parse_double(key, value);
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    cfg.slit.k = 2.0 * kPi / lambda;
  } else if (key == "d") {
    cfg.slit.d = parse_double(key, value);
  } else if (key == "a") {
    cfg.slit.a = parse_double(key, value);
  } else if (key == "D") {
    cfg.slit.D = parse_double(key, value);
  } else if (key == "far_field_mode") {
    if (value == "fixed_D")
      cfg.slit.far_field_mode = FarFieldMode::fixed_D;
    else if (value == "local_x")
      cfg.slit.far_field_mode = FarFieldMode::local_x;
    else
      throw std::invalid_argument("far_field_mode must be fixed_D or local_x");
  } else if (key == "keep_inverse_r") {
    cfg.slit.keep_inverse_r = parse_bool(key, value);
  } else if (key == "x_launch") {
    cfg.x_launch = parse_double(key, value);
  } else if (key == "sigma0") {
    cfg.slab.sigma0 = parse_double(key, value);
  } else if (key == "x0") {
    cfg.slab.x0 = parse_double(key, value);
  } else if (key == "n") {
    cfg.slab.n = parse_double(key, value);
  } else if (key == "slab_start") {
    cfg.slab.slab_start = parse_double(key, value);
  } else if (key == "slab_end") {
    cfg.slab.slab_end = parse_double(key, value);
  } else if (key == "amplitude_cutoff") {
    cfg.slab.amplitude_cutoff = parse_double(key, value);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, value);
  } else if (key == "method") {
    if (value == "rk4")
      cfg.method = Method::rk4;
    else if (value == "rk2")
      cfg.method = Method::rk2;
    else
      throw std::invalid_argument("method must be rk4 or rk2");
  } else if (key == "max_steps") {
    cfg.max_steps = static_cast<int>(parse_long(key, value));
  } else if (key == "stop_x") {
    cfg.stop_x = parse_double(key, value);
  } else if (key == "stop_time") {
    cfg.stop_time = parse_double(key, value);
  } else if (key == "node_slowdown") {
    cfg.node_slowdown = parse_double(key, value);
  } else if (key == "record_stride") {
    cfg.record_stride = static_cast<int>(parse_long(key, value));
  } else if (key == "trajectories") {
    cfg.sample.count = static_cast<int>(parse_long(key, value));
  } else if (key == "seed") {
    cfg.sample.seed = static_cast<std::uint64_t>(parse_long(key, value));
  } else if (key == "sampling") {
    if (value == "uniform")
      cfg.sample.mode = SampleMode::uniform_slits;
    else if (value == "density")
      cfg.sample.mode = SampleMode::density_weighted;
    else
      throw std::invalid_argument("sampling must be uniform or density");
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_long(key, value));
  } else {
    throw std::invalid_argument("unknown configuration key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string &text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  bool in_section = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[scenario]")
        throw std::invalid_argument("unknown section " + line + " at line " +
                                    std::to_string(line_no));
      in_section = true;
      continue;
    }
    if (!in_section)
      throw std::invalid_argument("configuration keys must follow a [scenario] header");
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key = value at line " + std::to_string(line_no));
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

std::map<std::string, std::string> RunConfig::materialize() const {
  const IntegratorConfig icfg = make_integrator();
  std::map<std::string, std::string> m;
  m["scenario"] = to_string(scenario);
  m["E0"] = fmt(slit.E0);
  m["B0"] = fmt(slit.B0);
  m["k"] = fmt(slit.k);
  m["lambda"] = fmt(2.0 * kPi / slit.k);
  m["d"] = fmt(slit.d);
  m["a"] = fmt(slit.a);
  m["D"] = fmt(slit.D);
  m["far_field_mode"] =
      slit.far_field_mode == FarFieldMode::fixed_D ? "fixed_D" : "local_x";
  m["keep_inverse_r"] = slit.keep_inverse_r ? "true" : "false";
  m["x_launch"] = fmt(launch_x());
  m["sigma0"] = fmt(slab.sigma0);
  m["x0"] = fmt(slab.x0);
  m["n"] = fmt(slab.n);
  m["slab_start"] = fmt(slab.slab_start);
  m["slab_end"] = fmt(slab.slab_end);
  m["amplitude_cutoff"] = fmt(slab.amplitude_cutoff);
  m["dt"] = fmt(icfg.dt);
  m["method"] = method == Method::rk4 ? "rk4" : "rk2";
  m["max_steps"] = std::to_string(icfg.max_steps);
  if (icfg.stop_x) m["stop_x"] = fmt(*icfg.stop_x);
  if (icfg.stop_time) m["stop_time"] = fmt(*icfg.stop_time);
  m["node_slowdown"] = fmt(node_slowdown);
  m["record_stride"] = std::to_string(record_stride);
  m["trajectories"] = std::to_string(sample.count);
  m["seed"] = std::to_string(sample.seed);
  m["sampling"] =
      sample.mode == SampleMode::uniform_slits ? "uniform" : "density";
  m["threads"] = std::to_string(threads);
  return m;
}

}  // namespace bohmsim
