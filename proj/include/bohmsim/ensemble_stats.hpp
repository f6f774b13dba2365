#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bohmsim {

enum class SampleMode { uniform_slits, density_weighted };

struct SampleSpec {
  SampleMode mode = SampleMode::uniform_slits;
  int count = 100;
  std::uint64_t seed = 0;
};

/// Counter-based uniform in [0, 1): a pure function of (seed, index, draw),
/// so samples are identical no matter how work is ordered or split.
double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t draw);

/// Tabulated inverse-CDF sampler over a 1d interval (trapezoid-integrated).
/// Throws std::invalid_argument when the density carries no mass.
class LineDensitySampler {
 public:
  LineDensitySampler(const std::function<double(double)> &density, double lo, double hi,
                     int nodes = 10000);

  double sample(double u01) const;
  double total_mass() const { return mass_; }

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;  // normalized to [0, 1]
  double mass_ = 0.0;
};

/// How a scenario exposes its launch manifold to the samplers: a 1d launch
/// coordinate, intervals for the uniform aperture mode, a density for the
/// weighted mode, and the lift into configuration space.
struct LaunchGeometry {
  double lo = 0.0, hi = 1.0;
  std::vector<std::pair<double, double>> uniform_intervals;
  std::function<double(double)> line_density;
  std::function<Eigen::Vector2d(double)> lift;
};

/// uniform_slits: points uniform over each interval, split evenly;
/// density_weighted: inverse-CDF draws from the tabulated line density.
std::vector<Eigen::Vector2d> sample_initial(const SampleSpec &spec,
                                            const LaunchGeometry &geom);

struct HistogramComparison {
  std::vector<double> edges;
  std::vector<double> empirical;  // mass per bin, sums to 1
  std::vector<double> reference;  // mass per bin, sums to 1
  double l1_distance = 0.0;
  long sample_count = 0;  // endpoints that landed inside the window
  bool certified = false;
  std::string warning;
};

/// Endpoint histogram against the scenario density on the detection line,
/// both normalized over the covered interval. Throws when fewer than 99% of
/// the launched members arrived; refuses to certify (with a warning) below
/// min_certified_count samples.
HistogramComparison equivariance_check(const std::vector<double> &endpoints,
                                       long launched_count,
                                       const std::function<double(double)> &line_density,
                                       double lo, double hi, int bins,
                                       long min_certified_count = 1000);

/// Local maxima of a 1d density: coarse scan plus golden-section refinement.
std::vector<double> fringe_positions(const std::function<double(double)> &density,
                                     double lo, double hi, int scan_nodes = 10000);

/// Kolmogorov-Smirnov statistic of samples against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf);

}  // namespace bohmsim
