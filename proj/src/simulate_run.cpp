#include "bohmsim/simulate_run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "bohmsim/bohm_velocity.hpp"
#include "bohmsim/outputs.hpp"

namespace bohmsim {

namespace {

struct Emitted {
  std::string name;
  std::size_t bytes = 0;
  std::string digest;
};

class Emitter {
 public:
  Emitter(std::string dir) : dir_(std::move(dir)) {}
  void emit(const std::string &name, const std::string &content) {
    write_file((std::filesystem::path(dir_) / name).string(), content);
    files_.push_back({name, content.size(), fnv1a64_hex(content)});
  }
  const std::vector<Emitted> &files() const { return files_; }

 private:
  std::string dir_;
  std::vector<Emitted> files_;
};

nlohmann::json selfcheck_json(const AlgebraReport &rep) {
  return {
      {"algebra", rep.algebra},
      {"gamma_idempotent", rep.gamma_idempotent},
      {"gamma_anticommute", rep.gamma_anticommute},
      {"eigenvalue_deviation", rep.eigenvalue_deviation},
      {"plane_wave_evolution", rep.schroedinger_plane_wave},
      {"constraint_divergence", rep.constraint_divergence},
      {"worst", rep.worst()},
  };
}

long count_reached(const std::vector<Trajectory> &ens) {
  long n = 0;
  for (const auto &tr : ens) n += tr.status == TerminalStatus::reached_line;
  return n;
}

struct GuardResult {
  bool certified = true;
  std::string message;
  nlohmann::json info;
};

GuardResult guarded_equivariance(const std::vector<double> &endpoints, long launched,
                                 const std::function<double(double)> &density, double lo,
                                 double hi) {
  GuardResult g;
  try {
    const auto cmp = equivariance_check(endpoints, launched, density, lo, hi, 50);
    g.certified = cmp.certified;
    g.message = cmp.warning;
    g.info = {{"l1_distance", cmp.l1_distance},
              {"bins", 50},
              {"window_lo", lo},
              {"window_hi", hi},
              {"samples", cmp.sample_count},
              {"certified", cmp.certified}};
  } catch (const std::runtime_error &e) {
    g.certified = false;
    g.message = e.what();
  }
  return g;
}

std::vector<std::vector<std::pair<double, double>>> polyline_view(
    const std::vector<Trajectory> &ens, bool swap_axes) {
  std::vector<std::vector<std::pair<double, double>>> lines;
  lines.reserve(ens.size());
  for (const auto &tr : ens) {
    std::vector<std::pair<double, double>> line;
    line.reserve(tr.points.size());
    for (const auto &p : tr.points)
      line.emplace_back(swap_axes ? p.q[0] : p.t, swap_axes ? p.t : p.q[0]);
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

int run_simulation(const RunConfig &cfg, bool selfcheck_only, std::ostream &out,
                   std::ostream &err) {
  const auto wall_start = std::chrono::steady_clock::now();

  // configuration validation
  std::vector<std::string> warnings;
  try {
    auto w1 = cfg.slit.validate();
    warnings.insert(warnings.end(), w1.begin(), w1.end());
    if (cfg.scenario == ScenarioKind::slab) {
      auto w2 = cfg.slab.validate();
      warnings.insert(warnings.end(), w2.begin(), w2.end());
    }
    if (cfg.sample.count < 1) throw std::invalid_argument("trajectories must be >= 1");
  } catch (const std::exception &e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  }
  for (const auto &w : warnings) err << "warning: " << w << "\n";

  // algebra selfcheck gates every run
  BetaSet betas;
  AlgebraReport report;
  try {
    betas = build_spin1_betas();
    report = betaset_selfcheck(betas);
  } catch (const std::exception &e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  if (report.worst() >= 1e-12) {
    err << "numerical failure: algebra selfcheck residual " << report.worst() << "\n";
    return kExitNumericalFailure;
  }
  if (selfcheck_only) {
    out << "selfcheck: max residual " << report.worst() << " (algebra " << report.algebra
        << ", projector " << std::max(report.gamma_idempotent, report.gamma_anticommute)
        << ", spectrum " << report.eigenvalue_deviation << ", evolution "
        << report.schroedinger_plane_wave << ", constraint "
        << report.constraint_divergence << ")\n";
    return kExitOk;
  }

  try {
    std::filesystem::create_directories(cfg.out_dir);
    Emitter emitter(cfg.out_dir);
    const IntegratorConfig icfg = cfg.make_integrator();
    const double fringe = cfg.fringe_spacing();

    nlohmann::json stats;
    std::vector<Trajectory> ens;
    CsvSchema schema;
    SvgPlot plot;
    std::vector<std::pair<double, double>> density_scan;
    bool certified_needed = cfg.sample.mode == SampleMode::density_weighted;
    bool certified = true;
    std::string guard_message;

    if (cfg.scenario == ScenarioKind::single_slit) {
      const SingleSlitField field(cfg.slit, betas);
      const double xl = cfg.launch_x();

      LaunchGeometry geom;
      geom.uniform_intervals = {
          {-cfg.slit.a - cfg.slit.d / 2, -cfg.slit.a + cfg.slit.d / 2},
          {cfg.slit.a - cfg.slit.d / 2, cfg.slit.a + cfg.slit.d / 2}};
      geom.lo = -(cfg.slit.a + 12.0 * cfg.slit.d);
      geom.hi = cfg.slit.a + 12.0 * cfg.slit.d;
      geom.line_density = [&](double y) { return field.density_on_line(xl, y); };
      geom.lift = [&](double y) { return Eigen::Vector2d(xl, y); };

      const auto starts = sample_initial(cfg.sample, geom);
      ens = integrate_ensemble(field, starts, 0.0, icfg, cfg.threads);

      std::vector<double> endpoints;
      for (const auto &tr : ens)
        if (tr.status == TerminalStatus::reached_line) endpoints.push_back(tr.back().q[1]);

      const double window = 5.0 * fringe;
      for (int i = 0; i <= 1000; ++i) {
        const double y = -window + 2.0 * window * i / 1000.0;
        density_scan.emplace_back(y, field.density_on_line(cfg.slit.D, y));
      }
      auto on_line = [&](double y) { return field.density_on_line(cfg.slit.D, y); };
      const auto maxima = fringe_positions(on_line, -window, window);
      stats["fringe_maxima"] = maxima;
      stats["expected_fringe_spacing"] = fringe;
      stats["reached"] = count_reached(ens);
      stats["launched"] = ens.size();

      if (certified_needed) {
        const GuardResult g = guarded_equivariance(
            endpoints, static_cast<long>(ens.size()), on_line, -window, window);
        if (!g.info.is_null()) stats["equivariance"] = g.info;
        certified = g.certified;
        guard_message = g.message;
      }

      schema = CsvSchema{"x", "y", false};
      plot.lines.clear();
      for (const auto &tr : ens) {
        std::vector<std::pair<double, double>> line;
        for (const auto &p : tr.points) line.emplace_back(p.q[0], p.q[1]);
        plot.lines.push_back(std::move(line));
      }
      plot.strip = density_scan;
      plot.title = "double-slit photon trajectories";
      plot.xlabel = "x";
      plot.ylabel = "y";
    } else if (cfg.scenario == ScenarioKind::two_photon) {
      const TwoPhotonField field(cfg.slit, betas);

      LaunchGeometry geom;
      geom.uniform_intervals = {{cfg.slit.a - cfg.slit.d / 2, cfg.slit.a + cfg.slit.d / 2}};
      geom.lo = -5.0 * fringe;
      geom.hi = 5.0 * fringe;
      geom.line_density = [&](double y) { return field.joint_density(y, -y); };
      geom.lift = [](double y) { return Eigen::Vector2d(y, -y); };

      const auto starts = sample_initial(cfg.sample, geom);
      ens = integrate_ensemble(field, starts, 0.0, icfg, cfg.threads);

      std::vector<double> endpoints;
      double worst_sum_drift = 0.0;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        if (ens[i].status != TerminalStatus::reached_line) continue;
        endpoints.push_back(ens[i].back().q[0]);
        const double s0 = starts[i][0] + starts[i][1];
        worst_sum_drift =
            std::max(worst_sum_drift,
                     std::abs(ens[i].back().q[0] + ens[i].back().q[1] - s0));
      }

      const double window = 5.0 * fringe;
      for (int i = 0; i <= 1000; ++i) {
        const double y = -window + 2.0 * window * i / 1000.0;
        density_scan.emplace_back(y, field.joint_density(y, -y));
      }
      auto on_sector = [&](double y) { return field.joint_density(y, -y); };
      stats["fringe_maxima"] = fringe_positions(on_sector, -window, window);
      stats["pair_sum_drift"] = worst_sum_drift;
      stats["reached"] = count_reached(ens);
      stats["launched"] = ens.size();

      if (certified_needed) {
        const GuardResult g = guarded_equivariance(
            endpoints, static_cast<long>(ens.size()), on_sector, -window, window);
        if (!g.info.is_null()) stats["equivariance"] = g.info;
        certified = g.certified;
        guard_message = g.message;
      }

      schema = CsvSchema{"y1", "y2", false};
      for (const auto &tr : ens) {
        std::vector<std::pair<double, double>> l1, l2;
        for (const auto &p : tr.points) {
          l1.emplace_back(p.t, p.q[0]);
          l2.emplace_back(p.t, p.q[1]);
        }
        plot.lines.push_back(std::move(l1));
        plot.lines.push_back(std::move(l2));
      }
      plot.title = "photon-pair trajectories";
      plot.xlabel = "c t";
      plot.ylabel = "y";
    } else {
      const SlabField field(cfg.slab, betas);
      const double sigma_w = std::sqrt(cfg.slab.sigma0);

      LaunchGeometry geom;
      geom.uniform_intervals = {{cfg.slab.x0 - 3.0 * sigma_w, cfg.slab.x0 + 3.0 * sigma_w}};
      geom.lo = cfg.slab.x0 - 6.0 * sigma_w;
      geom.hi = cfg.slab.x0 + 6.0 * sigma_w;
      geom.line_density = [&](double x) { return field.density_at(x, 0.0); };
      geom.lift = [](double x) { return Eigen::Vector2d(x, 0.0); };

      const auto starts = sample_initial(cfg.sample, geom);
      ens = integrate_ensemble(field, starts, 0.0, icfg, cfg.threads);

      long transmitted = 0, reflected = 0;
      std::vector<double> endpoints;
      for (const auto &tr : ens) {
        if (tr.status != TerminalStatus::reached_line) continue;
        const double x_end = tr.back().q[0];
        endpoints.push_back(x_end);
        if (x_end > cfg.slab.slab_end) ++transmitted;
        if (x_end < cfg.slab.slab_start) ++reflected;
      }
      stats["reached"] = count_reached(ens);
      stats["launched"] = ens.size();
      stats["transmitted_fraction"] =
          endpoints.empty() ? 0.0 : double(transmitted) / double(endpoints.size());
      stats["reflected_fraction"] =
          endpoints.empty() ? 0.0 : double(reflected) / double(endpoints.size());

      const double t_end = icfg.stop_time.value_or(0.0);
      double x_lo = 1e300, x_hi = -1e300;
      for (double x : endpoints) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
      }
      if (endpoints.empty()) {
        x_lo = cfg.slab.x0;
        x_hi = cfg.slab.slab_end;
      }
      x_lo -= 4.0 * sigma_w;
      x_hi += 4.0 * sigma_w;
      for (int i = 0; i <= 1000; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / 1000.0;
        density_scan.emplace_back(x, field.density_at(x, t_end));
      }

      if (certified_needed) {
        const GuardResult g = guarded_equivariance(
            endpoints, static_cast<long>(ens.size()),
            [&](double x) { return field.density_at(x, t_end); }, x_lo, x_hi);
        if (!g.info.is_null()) stats["equivariance"] = g.info;
        certified = g.certified;
        guard_message = g.message;
      }

      schema = CsvSchema{"x", "y", true};
      plot.lines = polyline_view(ens, true);
      plot.has_band = true;
      plot.band_lo = cfg.slab.slab_start;
      plot.band_hi = cfg.slab.slab_end;
      plot.title = "glass-slab photon trajectories";
      plot.xlabel = "x";
      plot.ylabel = "c t";
    }

    long failed = 0;
    for (const auto &tr : ens)
      if (!tr.error.empty()) ++failed;
    stats["member_failures"] = failed;

    if (certified_needed && !certified) {
      err << "statistics guard: " << guard_message << "\n";
      return kExitStatsRefusal;
    }

    if (cfg.format == OutputFormat::csv)
      emitter.emit("trajectories.csv", trajectories_to_csv(ens, schema));
    else
      emitter.emit("trajectories.json", trajectories_to_json(ens, schema));
    emitter.emit("density.csv", density_to_csv(density_scan));
    if (cfg.plot_svg) emitter.emit("figure.svg", render_svg(plot));

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
            .count();

    nlohmann::json manifest;
    manifest["tool"] = {{"name", "bohmsim"}, {"version", "0.1.0"}};
    manifest["scenario"] = to_string(cfg.scenario);
    manifest["config"] = cfg.materialize();
    manifest["seed"] = cfg.sample.seed;
    manifest["selfcheck"] = selfcheck_json(report);
    manifest["stats"] = stats;
    manifest["timing"] = {{"total_seconds", elapsed}};
    manifest["notes"] = {
        {"axes", "lengths in the config's length unit; time scaled so c = 1"},
        {"digest", "fnv1a64"}};
    auto &outputs = manifest["outputs"] = nlohmann::json::array();
    for (const auto &f : emitter.files())
      outputs.push_back({{"file", f.name}, {"bytes", f.bytes}, {"digest", f.digest}});
    write_file((std::filesystem::path(cfg.out_dir) / "manifest.json").string(),
               manifest.dump(1) + "\n");

    out << "wrote " << emitter.files().size() + 1 << " files to " << cfg.out_dir << " ("
        << stats["reached"].get<long>() << "/" << ens.size() << " trajectories reached the "
        << "detection line)\n";
    return kExitOk;
  } catch (const std::exception &e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace bohmsim
