#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bohmsim/kdp_algebra.hpp"

using namespace bohmsim;
using cplx = std::complex<double>;

namespace {

Vec3c random_vec3(std::mt19937_64 &rng, bool complex_parts) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec3c v;
  for (int i = 0; i < 3; ++i)
    v[i] = complex_parts ? cplx(dist(rng), dist(rng)) : cplx(dist(rng), 0.0);
  return v;
}

// classical energy flux of the stored fields, computed independently of the
// matrix machinery
Eigen::Vector3d poynting(const Spinor10 &psi) {
  const Eigen::Vector3d d = psi.electric().real();
  const Eigen::Vector3d b = psi.magnetic().real();
  return d.cross(b);
}

// five-point central difference, O(h^4)
template <typename F>
Vec10c fd_derivative(F f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

}  // namespace

TEST_CASE("matrix identities hold exhaustively") {
  const BetaSet b = build_spin1_betas();

  int triple[3];
  CHECK(check_kdp_algebra(b, triple) < 1e-12);

  // equal-index triple reduces to beta0^3 = beta0
  CHECK((b.beta[0] * b.beta[0] * b.beta[0] - b.beta[0]).cwiseAbs().maxCoeff() == 0.0);

  CHECK((b.gamma * b.gamma - b.gamma).cwiseAbs().maxCoeff() < 1e-12);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK((b.gamma * b.beta[mu] + b.beta[mu] * b.gamma - b.beta[mu]).cwiseAbs().maxCoeff() <
          1e-12);
  }

  for (int i = 0; i < 3; ++i) {
    const Mat10 rebuilt = b.beta[0] * b.beta[i + 1] - b.beta[i + 1] * b.beta[0];
    CHECK((rebuilt - b.tilde_beta[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("velocity operators have spectrum {-1, 0, +1} with both extremes") {
  const BetaSet b = build_spin1_betas();
  for (int i = 0; i < 3; ++i) {
    Eigen::SelfAdjointEigenSolver<Mat10> es(b.tilde_beta[i]);
    double lo = 2, hi = -2;
    for (int k = 0; k < 10; ++k) {
      const double ev = es.eigenvalues()[k];
      const double dev = std::min({std::abs(ev + 1), std::abs(ev), std::abs(ev - 1)});
      CHECK(dev < 1e-10);
      lo = std::min(lo, ev);
      hi = std::max(hi, ev);
    }
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("checker flags a perturbed representation") {
  const BetaSet clean = build_spin1_betas();

  // a 1e-3 bump on any structurally nonzero entry must push the residual
  // past 1e-4
  for (int mu = 0; mu < 4; ++mu) {
    for (int r = 0; r < 10; ++r) {
      for (int c = 0; c < 10; ++c) {
        if (clean.beta[mu](r, c) == 0.0) continue;
        BetaSet bad = clean;
        bad.beta[mu](r, c) += 1e-3;
        CHECK(check_kdp_algebra(bad) >= 1e-4);
      }
    }
  }
}

TEST_CASE("zeroed spatial matrix trips the product identity") {
  // triples that sandwich the zeroed index, e.g. (2,1,1), keep a nonzero
  // right-hand side while the products vanish
  BetaSet bad = build_spin1_betas();
  bad.beta[1].setZero();
  bad.tilde_beta[0] = bad.beta[0] * bad.beta[1] - bad.beta[1] * bad.beta[0];
  int triple[3];
  CHECK(check_kdp_algebra(bad, triple) >= 1.0);
  CHECK(triple[1] == 1);  // the zeroed index sits in the metric slot

  Eigen::SelfAdjointEigenSolver<Mat10> es(bad.tilde_beta[0]);
  CHECK(es.eigenvalues().cwiseAbs().maxCoeff() < 0.5);  // no unit-speed modes left
  CHECK(betaset_selfcheck(bad).worst() > 0.5);
}

TEST_CASE("plane wave satisfies the evolution equation on a sampled grid") {
  const BetaSet b = build_spin1_betas();
  const double k = 1.0, omega = 1.0, t0 = 0.37;

  // D = (0, cos(kx - wt), 0), B = (0, 0, cos(kx - wt))
  auto psi_at = [&](double x, double t) {
    Vec3c d(0, std::cos(k * x - omega * t), 0);
    Vec3c bb(0, 0, std::cos(k * x - omega * t));
    return Spinor10::from_fields(d, bb).c;
  };
  auto dpsi_dt = [&](double x, double t) {
    Vec3c d(0, omega * std::sin(k * x - omega * t), 0);
    Vec3c bb(0, 0, omega * std::sin(k * x - omega * t));
    return Spinor10::from_fields(d, bb).c;
  };

  const double h = 5e-3;
  double worst_displacement_rows = 0, worst_magnetic_rows = 0;
  for (double x = 0.0; x < 6.28; x += 0.17) {
    const Vec10c lhs = dpsi_dt(x, t0);
    const Vec10c rhs =
        -b.tilde_beta[0] * fd_derivative([&](double xx) { return psi_at(xx, t0); }, x, h);
    const Vec10c res = lhs - rhs;
    worst_displacement_rows =
        std::max(worst_displacement_rows, res.segment<3>(0).cwiseAbs().maxCoeff());
    worst_magnetic_rows = std::max(worst_magnetic_rows, res.segment<3>(3).cwiseAbs().maxCoeff());
  }
  // the two curl equations, one per block of rows
  CHECK(worst_displacement_rows < 1e-10);
  CHECK(worst_magnetic_rows < 1e-10);
}

TEST_CASE("constraint row measures the transverse divergence") {
  const BetaSet b = build_spin1_betas();
  const Mat10 beta0_sq = b.beta[0] * b.beta[0];
  const double h = 5e-3;

  // skew propagation direction, transverse polarization
  const Eigen::Vector3d khat = Eigen::Vector3d(1, 2, 2).normalized();
  const Eigen::Vector3d dpol = khat.cross(Eigen::Vector3d(0, 0, 1)).normalized();
  const Eigen::Vector3d bpol = khat.cross(dpol);

  auto psi_at = [&](const Eigen::Vector3d &r, const Eigen::Vector3d &dd,
                    const Eigen::Vector3d &bb) {
    const double phase = std::cos(khat.dot(r));
    return Spinor10::from_fields((dd * phase).cast<cplx>(), (bb * phase).cast<cplx>()).c;
  };

  auto constraint_row = [&](const Eigen::Vector3d &dd, const Eigen::Vector3d &bb) {
    const Eigen::Vector3d r0(0.3, -0.8, 0.15);
    Vec10c acc = Vec10c::Zero();
    for (int i = 0; i < 3; ++i) {
      auto along = [&](double s) {
        Eigen::Vector3d r = r0;
        r[i] = s;
        return psi_at(r, dd, bb);
      };
      acc += b.beta[i + 1] * (beta0_sq * fd_derivative(along, r0[i], h));
    }
    return std::abs(acc(9));
  };

  CHECK(constraint_row(dpol, bpol) < 1e-10);
  // a longitudinal (unphysical) polarization must trip it
  CHECK(constraint_row(khat, bpol) > 0.1);
}

TEST_CASE("projector is idempotent on random vectors") {
  const BetaSet b = build_spin1_betas();
  std::mt19937_64 rng(61);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec10c v;
    for (int i = 0; i < 10; ++i) v[i] = cplx(dist(rng), dist(rng));
    const Vec10c once = b.gamma * v;
    const Vec10c twice = b.gamma * once;
    CHECK((twice - once).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("massless current on reference states") {
  const BetaSet b = build_spin1_betas();

  SUBCASE("zero state") {
    const auto cur = massless_current(Spinor10{}, b);
    CHECK(cur.density == 0.0);
    CHECK(cur.flux.norm() == 0.0);
  }

  SUBCASE("plane wave moves at unit speed along +x") {
    const double e0 = 0.7;
    const auto psi = Spinor10::from_fields(Vec3c(0, e0, 0), Vec3c(0, 0, e0));
    const auto cur = massless_current(psi, b);
    CHECK(cur.density == doctest::Approx(2 * e0 * e0).epsilon(1e-14));
    CHECK(cur.flux[0] == doctest::Approx(2 * e0 * e0).epsilon(1e-14));
    CHECK(std::abs(cur.flux[1]) < 1e-14);
    CHECK(std::abs(cur.flux[2]) < 1e-14);
  }

  SUBCASE("standing superposition carries no net flux") {
    // equal-amplitude counter-propagating waves at an antinode: the
    // magnetic parts cancel, the electric parts add
    const double e0 = 1.0;
    const auto right = Spinor10::from_fields(Vec3c(0, e0, 0), Vec3c(0, 0, e0));
    const auto left = Spinor10::from_fields(Vec3c(0, e0, 0), Vec3c(0, 0, -e0));
    Spinor10 sum;
    sum.c = right.c + left.c;
    const auto cur = massless_current(sum, b);
    CHECK(cur.flux.norm() < 1e-14);
    CHECK(cur.density == doctest::Approx(4 * e0 * e0).epsilon(1e-14));
  }

  SUBCASE("unprojected input is rejected") {
    Spinor10 psi;
    psi.c[7] = 0.5;
    CHECK_THROWS_AS(massless_current(psi, b), std::invalid_argument);
  }
}

TEST_CASE("flux equals twice the classical energy flux on random real states") {
  const BetaSet b = build_spin1_betas();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Spinor10 psi =
        Spinor10::from_fields(random_vec3(rng, false), random_vec3(rng, false));
    const auto cur = massless_current(psi, b);
    const Eigen::Vector3d expected = 2.0 * poynting(psi);
    const double scale = std::max(1e-30, expected.norm());
    CHECK((cur.flux - expected).norm() / scale < 1e-10);
  }
}

TEST_CASE("charge current vanishes on projected states") {
  const BetaSet b = build_spin1_betas();
  std::mt19937_64 rng(23);

  SUBCASE("zero state") {
    for (const auto &j : charge_current(Spinor10{}, b)) CHECK(std::abs(j) == 0.0);
  }

  SUBCASE("random real field states") {
    for (int trial = 0; trial < 20; ++trial) {
      const Spinor10 psi =
          Spinor10::from_fields(random_vec3(rng, false), random_vec3(rng, false));
      for (const auto &j : charge_current(psi, b)) CHECK(std::abs(j) < 1e-12);
    }
  }

  SUBCASE("complex states reported, not asserted") {
    // analytic-signal states stay in the projected sector, where the spatial
    // matrices are antisymmetric quadratic forms; record the observed size
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Spinor10 psi =
          Spinor10::from_fields(random_vec3(rng, true), random_vec3(rng, true));
      for (const auto &j : charge_current(psi, b)) worst = std::max(worst, std::abs(j));
    }
    CHECK(std::isfinite(worst));
    MESSAGE("largest |j_mu| over random complex projected states: ", worst);
  }
}

TEST_CASE("tensor current factorizes on product states") {
  const BetaSet b = build_spin1_betas();
  std::mt19937_64 rng(101);

  SUBCASE("zero amplitude gives zero current") {
    const auto s = two_photon_tensor_current(TwoPhotonSpinor{}, b);
    CHECK(s.cwiseAbs().maxCoeff() == 0.0);
  }

  for (int trial = 0; trial < 25; ++trial) {
    const Spinor10 a = Spinor10::from_fields(random_vec3(rng, true), random_vec3(rng, true));
    const Spinor10 c = Spinor10::from_fields(random_vec3(rng, true), random_vec3(rng, true));
    const auto s = two_photon_tensor_current(TwoPhotonSpinor::product(a, c), b);

    const auto cur_a = massless_current(a, b);
    const auto cur_c = massless_current(c, b);
    Eigen::Vector4d sa, sc;
    sa << cur_a.density, cur_a.flux[0], cur_a.flux[1], cur_a.flux[2];
    sc << cur_c.density, cur_c.flux[0], cur_c.flux[1], cur_c.flux[2];

    const Eigen::Matrix4d expected = sa * sc.transpose();
    const double scale = std::max(1e-30, expected.cwiseAbs().maxCoeff());
    CHECK((s - expected).cwiseAbs().maxCoeff() / scale < 1e-10);

    CHECK(s(0, 0) > 0.0);
  }
}
