#include "bohmsim/scenario_fields.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace bohmsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Kemmer-Duffin amplitude of the wave diffracted by slit A (at y = +a): the
// in-plane electric pair and a z magnetic component, transverse to the
// outgoing direction (cos th, -sin th).
Vec10c slit_a_spinor(double sin_th, double cos_th, double e0, double b0) {
  Vec10c m = Vec10c::Zero();
  m[0] = -e0 * sin_th;
  m[1] = -e0 * cos_th;
  m[5] = b0;
  return m;
}

// Slit B (at y = -a), outgoing direction (cos th, +sin th).
Vec10c slit_b_spinor(double sin_th, double cos_th, double e0, double b0) {
  Vec10c m = Vec10c::Zero();
  m[0] = e0 * sin_th;
  m[1] = -e0 * cos_th;
  m[5] = b0;
  return m;
}

}  // namespace

double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

std::vector<std::string> DoubleSlitConfig::validate() const {
  if (!(k > 0) || !(d > 0) || !(a > 0) || !(D > 0))
    throw std::invalid_argument("double-slit config requires k, d, a, D > 0");
  std::vector<std::string> warnings;
  const double fraunhofer_scale = d * d * k / (2.0 * kPi);
  if (D < 10.0 * fraunhofer_scale) {
    std::ostringstream w;
    w << "detection distance D = " << D << " is not far-field (d^2/lambda = "
      << fraunhofer_scale << ")";
    warnings.push_back(w.str());
  }
  return warnings;
}

SlitGeometry slit_geometry(double x, double y, const DoubleSlitConfig &cfg) {
  if (!(x > 0)) throw std::invalid_argument("slit geometry undefined for x <= 0");
  SlitGeometry g;
  const double dya = y - cfg.a;
  const double dyb = y + cfg.a;
  g.r_a = std::sqrt(x * x + dya * dya);
  g.r_b = std::sqrt(x * x + dyb * dyb);
  g.sin_a = -dya / g.r_a;
  g.cos_a = x / g.r_a;
  g.sin_b = dyb / g.r_b;
  g.cos_b = x / g.r_b;
  g.theta_a = std::atan2(g.sin_a, g.cos_a);
  g.theta_b = std::atan2(g.sin_b, g.cos_b);
  const double d_eff = (cfg.far_field_mode == FarFieldMode::fixed_D) ? cfg.D : x;
  g.g_a = sinc(cfg.k * dya * cfg.d / (2.0 * d_eff));
  g.g_b = sinc(cfg.k * dyb * cfg.d / (2.0 * d_eff));
  return g;
}

Spinor10 single_photon_psi(double x, double y, const DoubleSlitConfig &cfg) {
  const SlitGeometry g = slit_geometry(x, y, cfg);
  const std::complex<double> ika(0.0, cfg.k * g.r_a);
  const std::complex<double> ikb(0.0, cfg.k * g.r_b);
  std::complex<double> amp_a = g.g_a * std::exp(ika);
  std::complex<double> amp_b = g.g_b * std::exp(ikb);
  if (cfg.keep_inverse_r) {
    amp_a /= g.r_a;
    amp_b /= g.r_b;
  }
  Spinor10 psi;
  psi.c = slit_a_spinor(g.sin_a, g.cos_a, cfg.E0, cfg.B0) * amp_a +
          slit_b_spinor(g.sin_b, g.cos_b, cfg.E0, cfg.B0) * amp_b;
  return psi;
}

TwoPhotonSpinor two_photon_psi(double y1, double y2, const DoubleSlitConfig &cfg) {
  const SlitGeometry g1 = slit_geometry(cfg.D, y1, cfg);
  const SlitGeometry g2 = slit_geometry(cfg.D, y2, cfg);

  // common per-particle diffraction factor of the pair amplitude
  const double gf1 = sinc(cfg.k * y1 * cfg.d / (2.0 * cfg.D));
  const double gf2 = sinc(cfg.k * y2 * cfg.d / (2.0 * cfg.D));

  const Vec10c a1 = slit_a_spinor(g1.sin_a, g1.cos_a, cfg.E0, cfg.B0);
  const Vec10c b1 = slit_b_spinor(g1.sin_b, g1.cos_b, cfg.E0, cfg.B0);
  const Vec10c a2 = slit_a_spinor(g2.sin_a, g2.cos_a, cfg.E0, cfg.B0);
  const Vec10c b2 = slit_b_spinor(g2.sin_b, g2.cos_b, cfg.E0, cfg.B0);

  const double phase = cfg.k * cfg.a * (y1 - y2) / cfg.D;
  const std::complex<double> em(std::cos(phase), -std::sin(phase));
  const std::complex<double> ep = std::conj(em);

  const std::complex<double> pref =
      std::exp(std::complex<double>(0.0, 2.0 * cfg.k * cfg.D)) / (cfg.D * cfg.D) *
      (cfg.d * cfg.d) * gf1 * gf2;

  TwoPhotonSpinor psi;
  psi.amp = pref * (em * (a1 * b2.transpose()) + ep * (b1 * a2.transpose()));
  return psi;
}

std::vector<std::string> SlabConfig::validate() const {
  if (!(sigma0 > 0)) throw std::invalid_argument("slab config requires sigma0 > 0");
  if (!(n >= 1.0)) throw std::invalid_argument("slab config requires n >= 1");
  if (!(x0 < slab_start) || !(slab_start < slab_end))
    throw std::invalid_argument("slab config requires x0 < slab_start < slab_end");
  std::vector<std::string> warnings;
  if (slab_start - x0 < 5.0 * std::sqrt(sigma0)) {
    std::ostringstream w;
    w << "initial packet at x0 = " << x0 << " overlaps the slab entrance at "
      << slab_start;
    warnings.push_back(w.str());
  }
  return warnings;
}

int SlabDecomposition::region_of(double x) const {
  if (x < edges[0]) return 0;
  if (x <= edges[1]) return 1;
  return 2;
}

SlabDecomposition decompose_slab(const SlabConfig &cfg) {
  SlabDecomposition dec;
  dec.edges[0] = cfg.slab_start;
  dec.edges[1] = cfg.slab_end;
  dec.index[0] = 1.0;
  dec.index[1] = cfg.n;
  dec.index[2] = 1.0;

  struct Pending {
    SlabPacket pk;
    int region;
  };
  std::deque<Pending> queue;
  queue.push_back({{1.0, 1.0, 0.0}, 0});

  while (!queue.empty()) {
    const Pending cur = queue.front();
    queue.pop_front();
    if (std::abs(cur.pk.amp) < cfg.amplitude_cutoff) continue;
    dec.region[cur.region].push_back(cur.pk);

    const bool rightward = cur.pk.q > 0;
    // packets leaving the system have no further interface events
    if (cur.region == 0 && !rightward) continue;
    if (cur.region == 2 && rightward) continue;

    const double xi = rightward ? dec.edges[cur.region == 0 ? 0 : 1]
                                : dec.edges[cur.region == 1 ? 0 : 1];
    const int next_region = cur.region + (rightward ? 1 : -1);
    const double na = dec.index[cur.region];
    const double nb = dec.index[next_region];
    const double r = (na - nb) / (na + nb);
    const double t = 2.0 * na / (na + nb);
    const double arg_at_interface = cur.pk.q * xi + cur.pk.p;

    // mirror image about the interface, same region
    queue.push_back({{cur.pk.amp * r, -cur.pk.q, 2.0 * cur.pk.q * xi + cur.pk.p},
                     cur.region});
    // continued packet at the neighbour's speed
    const double qn = rightward ? nb : -nb;
    queue.push_back({{cur.pk.amp * t, qn, arg_at_interface - qn * xi}, next_region});
  }
  return dec;
}

SlabFieldSample slab_fields(double x, double t, const SlabDecomposition &dec, double x0,
                            double sigma0, double E0) {
  SlabFieldSample f;
  const int reg = dec.region_of(x);
  for (const SlabPacket &pk : dec.region[reg]) {
    const double arg = pk.q * x + pk.p - t - x0;
    const double env = E0 * pk.amp * std::exp(-arg * arg / (2.0 * sigma0));
    f.E += env;
    f.B += pk.q * env;
  }
  return f;
}

SlabFieldSample slab_fields(double x, double t, const SlabConfig &cfg) {
  return slab_fields(x, t, decompose_slab(cfg), cfg.x0, cfg.sigma0, cfg.E0);
}

Spinor10 slab_psi(double x, double t, const SlabDecomposition &dec, const SlabConfig &cfg) {
  const SlabFieldSample f = slab_fields(x, t, dec, cfg.x0, cfg.sigma0, cfg.E0);
  const double nloc = dec.index[dec.region_of(x)];
  Spinor10 psi;
  psi.c[1] = std::complex<double>(-nloc * f.E, 0.0);
  psi.c[5] = std::complex<double>(f.B, 0.0);
  return psi;
}

Spinor10 slab_psi(double x, double t, const SlabConfig &cfg) {
  return slab_psi(x, t, decompose_slab(cfg), cfg);
}

}  // namespace bohmsim
