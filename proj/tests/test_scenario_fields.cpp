#include <doctest.h>

#include <cmath>
#include <random>

#include "bohmsim/kdp_algebra.hpp"
#include "bohmsim/scenario_fields.hpp"

using namespace bohmsim;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

double density_of(const Spinor10 &psi, const BetaSet &b) {
  return massless_current(psi, b).density;
}

// density from the slit geometry alone, written out term by term
double closed_density(double x, double y, const DoubleSlitConfig &cfg) {
  const SlitGeometry g = slit_geometry(x, y, cfg);
  const double e2 = cfg.E0 * cfg.E0, b2 = cfg.B0 * cfg.B0;
  double ga = g.g_a, gb = g.g_b;
  double cross = 2.0 * ga * gb;
  if (cfg.keep_inverse_r) {
    cross /= g.r_a * g.r_b;
    ga /= g.r_a;
    gb /= g.r_b;
  }
  // phase difference formed from the individually rounded optical phases so
  // that it tracks the complex-exponential route at machine precision
  return (e2 + b2) * (ga * ga + gb * gb) +
         cross * (e2 * std::cos(g.theta_a + g.theta_b) + b2) *
             std::cos(cfg.k * g.r_a - cfg.k * g.r_b);
}

// seven-point second derivative, O(h^6)
template <typename F>
double second_derivative(F f, double x, double h) {
  return (2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x) +
          270 * f(x + h) - 27 * f(x + 2 * h) + 2 * f(x + 3 * h)) /
         (180.0 * h * h);
}

}  // namespace

TEST_CASE("slit geometry on the symmetry axis and at sinc landmarks") {
  DoubleSlitConfig cfg;
  cfg.far_field_mode = FarFieldMode::fixed_D;

  SUBCASE("y = 0 is symmetric") {
    const SlitGeometry g = slit_geometry(0.3, 0.0, cfg);
    CHECK(g.r_a == g.r_b);
    CHECK(g.g_a == g.g_b);
    CHECK(g.theta_a == doctest::Approx(g.theta_b).epsilon(1e-15));
  }

  SUBCASE("half-pi argument gives 2/pi") {
    const double y = cfg.a + kPi * cfg.D / (cfg.k * cfg.d);  // u_a = pi/2
    const SlitGeometry g = slit_geometry(0.5, y, cfg);
    CHECK(g.g_a == doctest::Approx(2.0 / kPi).epsilon(1e-12));
  }

  SUBCASE("pi argument is the first zero") {
    const double y = cfg.a + 2.0 * kPi * cfg.D / (cfg.k * cfg.d);  // u_a = pi
    const SlitGeometry g = slit_geometry(0.5, y, cfg);
    CHECK(std::abs(g.g_a) < 1e-12);
  }

  SUBCASE("diffraction factors stay in the sinc range") {
    for (double y = -0.2; y <= 0.2; y += 1.3e-4) {
      const SlitGeometry g = slit_geometry(0.7, y, cfg);
      CHECK(g.g_a >= -0.2173);
      CHECK(g.g_a <= 1.0);
      CHECK(g.g_b >= -0.2173);
      CHECK(g.g_b <= 1.0);
    }
  }

  SUBCASE("behind the slit plane is rejected") {
    CHECK_THROWS_AS(slit_geometry(0.0, 0.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(slit_geometry(-0.1, 0.0, cfg), std::invalid_argument);
  }

  SUBCASE("near-field configuration warns") {
    DoubleSlitConfig nf;
    nf.D = 1e-4;
    CHECK(!nf.validate().empty());
    CHECK(DoubleSlitConfig{}.validate().empty());
  }
}

TEST_CASE("single-photon density matches the term-by-term expansion") {
  const BetaSet b = build_spin1_betas();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.05, 1.0), uy(-6e-3, 6e-3);

  for (bool inverse_r : {true, false}) {
    DoubleSlitConfig cfg;
    cfg.keep_inverse_r = inverse_r;
    cfg.B0 = 0.8;  // exercise unequal amplitudes
    for (int i = 0; i < 200; ++i) {
      const double x = ux(rng), y = uy(rng);
      const Spinor10 psi = single_photon_psi(x, y, cfg);
      CHECK(psi.unphysical_norm() == 0.0);
      const double rho = density_of(psi, b);
      CHECK(rho >= 0.0);
      CHECK(rho == doctest::Approx(closed_density(x, y, cfg)).epsilon(1e-12));
    }
  }
}

TEST_CASE("axis point is the local density maximum") {
  const BetaSet b = build_spin1_betas();
  DoubleSlitConfig cfg;
  const double x = cfg.D;
  const double fringe = kPi * cfg.D / (cfg.k * cfg.a);
  const double rho0 = density_of(single_photon_psi(x, 0.0, cfg), b);
  for (double y = -0.45 * fringe; y <= 0.45 * fringe; y += fringe / 40.0) {
    if (y == 0.0) continue;
    CHECK(density_of(single_photon_psi(x, y, cfg), b) <= rho0);
  }
}

TEST_CASE("interference node in the literal far-field form") {
  const BetaSet b = build_spin1_betas();
  DoubleSlitConfig cfg;
  cfg.far_field_mode = FarFieldMode::fixed_D;
  cfg.keep_inverse_r = false;

  // bisect for the half-wave path difference near the first dark fringe
  const double x = cfg.D;
  auto path_phase = [&](double y) {
    const SlitGeometry g = slit_geometry(x, y, cfg);
    return cfg.k * (g.r_a - g.r_b) + kPi;  // zero at the node
  };
  double lo = 0.2e-3, hi = 1.0e-3;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (path_phase(lo) * path_phase(mid) <= 0 ? hi : lo) = mid;
  }
  const double y_node = 0.5 * (lo + hi);
  const double rho_node = density_of(single_photon_psi(x, y_node, cfg), b);
  const double rho_peak = density_of(single_photon_psi(x, 0.0, cfg), b);
  CHECK(rho_node < 1e-6 * rho_peak);
}

TEST_CASE("pair amplitude is exchange symmetric") {
  DoubleSlitConfig cfg;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uy(-5e-3, 5e-3);

  auto residual = [&](double y1, double y2) {
    const TwoPhotonSpinor p12 = two_photon_psi(y1, y2, cfg);
    const TwoPhotonSpinor p21 = two_photon_psi(y2, y1, cfg);
    const double scale = std::max(1e-30, p12.amp.cwiseAbs().maxCoeff());
    return (p12.amp - p21.amp.transpose()).cwiseAbs().maxCoeff() / scale;
  };

  CHECK(residual(1e-4, -3e-4) < 1e-12);
  for (int i = 0; i < 50; ++i) CHECK(residual(uy(rng), uy(rng)) < 1e-12);
}

TEST_CASE("joint density carries the fourth-order fringe") {
  const BetaSet b = build_spin1_betas();
  DoubleSlitConfig cfg;

  // s_00 against the closed modulation formula on mirror configurations,
  // prefactors included
  for (double y = 1e-5; y < 4e-3; y += 1.7e-4) {
    const auto s = two_photon_tensor_current(two_photon_psi(y, -y, cfg), b);
    const SlitGeometry g = slit_geometry(cfg.D, y, cfg);
    const double gf = sinc(cfg.k * y * cfg.d / (2.0 * cfg.D));
    const double gf2 = sinc(cfg.k * (-y) * cfg.d / (2.0 * cfg.D));
    const double sum_cos = std::cos(g.theta_a + g.theta_b) + 1.0;
    const double pref = 8.0 * std::pow(cfg.d, 4) * gf * gf * gf2 * gf2 *
                        cfg.E0 * cfg.E0 * cfg.B0 * cfg.B0 / std::pow(cfg.D, 4);
    const double expected =
        pref * (1.0 + 0.25 * sum_cos * sum_cos *
                          std::cos(2.0 * cfg.k * cfg.a * (y - (-y)) / cfg.D));
    CHECK(s(0, 0) == doctest::Approx(expected).epsilon(1e-11));
  }

  SUBCASE("zero separation maximizes the joint density") {
    const double y = 7e-4;
    const auto s_eq = two_photon_tensor_current(two_photon_psi(y, y, cfg), b);
    for (double dy : {1e-4, 3e-4, 5e-4}) {
      const auto s_off = two_photon_tensor_current(two_photon_psi(y + dy, y - dy, cfg), b);
      CHECK(s_eq(0, 0) > s_off(0, 0));
    }
  }

  SUBCASE("equal x-velocity ratios at the origin") {
    const auto s = two_photon_tensor_current(two_photon_psi(0.0, 0.0, cfg), b);
    CHECK(s(1, 0) / s(0, 0) == doctest::Approx(s(0, 1) / s(0, 0)).epsilon(1e-12));
  }
}

TEST_CASE("slab reduces to a free packet for n = 1") {
  SlabConfig cfg;
  cfg.n = 1.0;
  const SlabDecomposition dec = decompose_slab(cfg);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 1.5);
  for (int i = 0; i < 300; ++i) {
    const double x = ux(rng), t = ut(rng);
    const SlabFieldSample f = slab_fields(x, t, dec, cfg.x0, cfg.sigma0, cfg.E0);
    const double arg = x - t - cfg.x0;
    const double expected = cfg.E0 * std::exp(-arg * arg / (2.0 * cfg.sigma0));
    CHECK(f.E == doctest::Approx(expected).epsilon(1e-12));
    CHECK(f.B == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("slab fields are continuous at both interfaces") {
  SlabConfig cfg;
  const SlabDecomposition dec = decompose_slab(cfg);
  const double eps = 1e-9;
  for (double t = 0.0; t <= 2.0; t += 0.01) {
    for (double xi : {cfg.slab_start, cfg.slab_end}) {
      const SlabFieldSample left = slab_fields(xi - eps, t, dec, cfg.x0, cfg.sigma0, cfg.E0);
      const SlabFieldSample right = slab_fields(xi + eps, t, dec, cfg.x0, cfg.sigma0, cfg.E0);
      CHECK(std::abs(left.E - right.E) < 1e-7 * cfg.E0 + 1e-12);
      CHECK(std::abs(left.B - right.B) < 1e-7 * cfg.E0 + 1e-12);
    }
  }
}

TEST_CASE("external reflection carries the expected amplitude") {
  SlabConfig cfg;  // n = 1.5
  const double r = (1.0 - cfg.n) / (1.0 + cfg.n);
  CHECK(r * r == doctest::Approx(0.04).epsilon(1e-12));

  // once the reflected packet has separated, its peak sits at -(t - |x0|)
  const double t = 1.0;
  const double x_peak = -(t + cfg.x0);
  const SlabFieldSample f = slab_fields(x_peak, t, cfg);
  CHECK(f.E == doctest::Approx(r * cfg.E0).epsilon(1e-9));
  CHECK(f.B == doctest::Approx(-r * cfg.E0).epsilon(1e-9));
}

TEST_CASE("slab envelopes satisfy the regional wave equation") {
  SlabConfig cfg;
  const SlabDecomposition dec = decompose_slab(cfg);
  const double h = std::sqrt(cfg.sigma0) / 100.0;

  double max_e = 0.0, worst = 0.0;
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ut(0.2, 1.4);
  const double probes[] = {-0.35, -0.12, 0.05, 0.13, 0.35, 0.6};
  for (double x : probes) {
    for (int i = 0; i < 40; ++i) {
      const double t = ut(rng);
      const double n_loc = dec.index[dec.region_of(x)];
      auto e_of_x = [&](double xx) {
        return slab_fields(xx, t, dec, cfg.x0, cfg.sigma0, cfg.E0).E;
      };
      auto e_of_t = [&](double tt) {
        return slab_fields(x, tt, dec, cfg.x0, cfg.sigma0, cfg.E0).E;
      };
      const double lap = second_derivative(e_of_x, x, h);
      const double acc = second_derivative(e_of_t, t, h);
      worst = std::max(worst, std::abs(lap - n_loc * n_loc * acc));
      max_e = std::max(max_e, std::abs(e_of_x(x)));
    }
  }
  CHECK(worst < 1e-6 * std::max(max_e, cfg.E0));
}

TEST_CASE("slab wave function properties") {
  const BetaSet b = build_spin1_betas();
  SlabConfig cfg;
  const SlabDecomposition dec = decompose_slab(cfg);
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 1.6);

  SUBCASE("real, positive density, vanishing charge current") {
    for (int i = 0; i < 1000; ++i) {
      const Spinor10 psi = slab_psi(ux(rng), ut(rng), dec, cfg);
      CHECK(psi.c.imag().cwiseAbs().maxCoeff() == 0.0);
      CHECK(massless_current(psi, b).density >= 0.0);
      for (const auto &j : charge_current(psi, b)) CHECK(std::abs(j) < 1e-12);
    }
  }

  SUBCASE("early packet is supported left of the slab") {
    const double peak = massless_current(slab_psi(cfg.x0, 0.0, dec, cfg), b).density;
    for (double x = cfg.slab_start; x <= 1.0; x += 0.05) {
      CHECK(massless_current(slab_psi(x, 0.0, dec, cfg), b).density < 1e-8 * peak);
    }
  }
}
