#include "bohmsim/ensemble_stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bohmsim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t draw) {
  const std::uint64_t z = splitmix64(seed ^ splitmix64(index ^ splitmix64(draw)));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

LineDensitySampler::LineDensitySampler(const std::function<double(double)> &density,
                                       double lo, double hi, int nodes) {
  if (!(hi > lo) || nodes < 2)
    throw std::invalid_argument("sampler needs hi > lo and at least two nodes");
  grid_.resize(nodes);
  cdf_.resize(nodes);
  std::vector<double> rho(nodes);
  for (int i = 0; i < nodes; ++i) {
    grid_[i] = lo + (hi - lo) * i / (nodes - 1);
    rho[i] = std::max(0.0, density(grid_[i]));
  }
  cdf_[0] = 0.0;
  for (int i = 1; i < nodes; ++i)
    cdf_[i] = cdf_[i - 1] + 0.5 * (rho[i] + rho[i - 1]) * (grid_[i] - grid_[i - 1]);
  mass_ = cdf_.back();
  if (!(mass_ > 0.0))
    throw std::invalid_argument("line density carries no mass on the launch interval");
  for (double &c : cdf_) c /= mass_;
}

double LineDensitySampler::sample(double u01) const {
  const double u = std::clamp(u01, 0.0, 1.0);
  auto hi = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (hi == cdf_.begin()) return grid_.front();
  if (hi == cdf_.end()) return grid_.back();
  const std::size_t j = static_cast<std::size_t>(hi - cdf_.begin());
  const double span = cdf_[j] - cdf_[j - 1];
  const double w = span > 0.0 ? (u - cdf_[j - 1]) / span : 0.0;
  return grid_[j - 1] + w * (grid_[j] - grid_[j - 1]);
}

std::vector<Eigen::Vector2d> sample_initial(const SampleSpec &spec,
                                            const LaunchGeometry &geom) {
  if (spec.count < 1) throw std::invalid_argument("sample count must be >= 1");
  std::vector<Eigen::Vector2d> out;
  out.reserve(spec.count);

  if (spec.mode == SampleMode::uniform_slits) {
    if (geom.uniform_intervals.empty())
      throw std::invalid_argument("uniform mode needs launch intervals");
    const int n_int = static_cast<int>(geom.uniform_intervals.size());
    for (int i = 0; i < spec.count; ++i) {
      const auto &[lo, hi] = geom.uniform_intervals[i % n_int];
      const double u = counter_uniform(spec.seed, i, 0);
      out.push_back(geom.lift(lo + u * (hi - lo)));
    }
    return out;
  }

  const LineDensitySampler sampler(geom.line_density, geom.lo, geom.hi);
  for (int i = 0; i < spec.count; ++i)
    out.push_back(geom.lift(sampler.sample(counter_uniform(spec.seed, i, 0))));
  return out;
}

HistogramComparison equivariance_check(const std::vector<double> &endpoints,
                                       long launched_count,
                                       const std::function<double(double)> &line_density,
                                       double lo, double hi, int bins,
                                       long min_certified_count) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("bad histogram window");
  if (launched_count > 0 &&
      static_cast<double>(endpoints.size()) < 0.99 * static_cast<double>(launched_count)) {
    std::ostringstream msg;
    msg << "equivariance check needs >= 99% arrivals: " << endpoints.size() << " of "
        << launched_count;
    throw std::runtime_error(msg.str());
  }

  HistogramComparison cmp;
  cmp.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) cmp.edges[i] = lo + (hi - lo) * i / bins;

  cmp.empirical.assign(bins, 0.0);
  long inside = 0;
  for (double y : endpoints) {
    if (y < lo || y >= hi) continue;
    const int b = std::min(bins - 1, static_cast<int>((y - lo) / (hi - lo) * bins));
    cmp.empirical[b] += 1.0;
    ++inside;
  }
  cmp.sample_count = inside;
  if (inside > 0)
    for (double &m : cmp.empirical) m /= static_cast<double>(inside);

  cmp.reference.assign(bins, 0.0);
  const int sub = 64;
  double total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double w = (cmp.edges[b + 1] - cmp.edges[b]) / sub;
    double acc = 0.0;
    for (int j = 0; j <= sub; ++j) {
      const double weight = (j == 0 || j == sub) ? 0.5 : 1.0;
      acc += weight * std::max(0.0, line_density(cmp.edges[b] + j * w));
    }
    cmp.reference[b] = acc * w;
    total += cmp.reference[b];
  }
  if (!(total > 0.0)) throw std::invalid_argument("reference density has no mass");
  for (double &m : cmp.reference) m /= total;

  for (int b = 0; b < bins; ++b)
    cmp.l1_distance += std::abs(cmp.empirical[b] - cmp.reference[b]);

  if (inside < min_certified_count) {
    std::ostringstream w;
    w << "insufficient statistics to certify: " << inside << " samples < "
      << min_certified_count;
    cmp.warning = w.str();
    cmp.certified = false;
  } else {
    cmp.certified = true;
  }
  return cmp;
}

std::vector<double> fringe_positions(const std::function<double(double)> &density,
                                     double lo, double hi, int scan_nodes) {
  std::vector<double> maxima;
  if (scan_nodes < 3) return maxima;
  std::vector<double> x(scan_nodes), f(scan_nodes);
  for (int i = 0; i < scan_nodes; ++i) {
    x[i] = lo + (hi - lo) * i / (scan_nodes - 1);
    f[i] = density(x[i]);
  }

  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i + 1 < scan_nodes; ++i) {
    if (!(f[i] > f[i - 1] && f[i] >= f[i + 1])) continue;
    double a = x[i - 1], b = x[i + 1];
    double c = b - golden * (b - a), d = a + golden * (b - a);
    double fc = density(c), fd = density(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15 * (hi - lo); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - golden * (b - a);
        fc = density(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + golden * (b - a);
        fd = density(d);
      }
    }
    maxima.push_back(0.5 * (a + b));
  }
  return maxima;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    worst = std::max(worst, std::abs(F - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return worst;
}

}  // namespace bohmsim
