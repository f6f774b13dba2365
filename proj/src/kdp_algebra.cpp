#include "bohmsim/kdp_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bohmsim {

namespace {

double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  // parity of the permutation (i,j,k) of (0,1,2)
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

Mat10 gamma_projector() {
  Mat10 g = Mat10::Zero();
  for (int i = 0; i < 6; ++i) g(i, i) = 1.0;
  return g;
}

}  // namespace

Spinor10 Spinor10::from_fields(const Vec3c &d_field, const Vec3c &b_field) {
  Spinor10 psi;
  psi.c.segment<3>(0) = -d_field;
  psi.c.segment<3>(3) = b_field;
  return psi;
}

bool Spinor10::is_projected(double tol) const {
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  return unphysical_norm() <= tol * scale;
}

TwoPhotonSpinor TwoPhotonSpinor::product(const Spinor10 &a, const Spinor10 &b) {
  TwoPhotonSpinor p;
  p.amp = a.c * b.c.transpose();
  return p;
}

double AlgebraReport::worst() const {
  return std::max({algebra, gamma_idempotent, gamma_anticommute, eigenvalue_deviation,
                   schroedinger_plane_wave, constraint_divergence});
}

BetaSet build_spin1_betas() {
  BetaSet b;
  b.metric << 1.0, -1.0, -1.0, -1.0;

  for (auto &m : b.beta) m = Mat10::Zero();

  // Time component couples the electric slots 0..2 to the vector-potential
  // slots 6..8 symmetrically.
  for (int i = 0; i < 3; ++i) {
    b.beta[0](i, 6 + i) = 1.0;
    b.beta[0](6 + i, i) = 1.0;
  }

  // Spatial components: electric slot j pairs with the scalar slot 9, and
  // the magnetic slots 3..5 pair with the vector-potential slots 6..8
  // through the antisymmetric symbol.
  for (int j = 0; j < 3; ++j) {
    Mat10 &bj = b.beta[j + 1];
    bj(j, 9) = 1.0;
    bj(9, j) = -1.0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        const double e = levi_civita(r, j, c);
        if (e != 0.0) {
          bj(3 + r, 6 + c) = e;
          bj(6 + r, 3 + c) = e;
        }
      }
    }
  }

  b.gamma = gamma_projector();
  for (int i = 0; i < 3; ++i) {
    b.tilde_beta[i] = b.beta[0] * b.beta[i + 1] - b.beta[i + 1] * b.beta[0];
    b.projected_tilde[i] = b.gamma * b.tilde_beta[i] * b.gamma;
  }

  const Mat10 eta0 = 2.0 * b.beta[0] * b.beta[0] - Mat10::Identity();
  for (int mu = 0; mu < 4; ++mu) {
    Mat10 sym = b.beta[mu] * b.beta[0] + b.beta[0] * b.beta[mu];
    if (mu == 0) sym -= Mat10::Identity();
    b.current_kernel[mu] = (eta0 * sym) * b.gamma;
  }

  const AlgebraReport rep = betaset_selfcheck(b);
  if (rep.worst() >= 1e-12) {
    std::ostringstream msg;
    msg << "spin-1 matrix construction failed: worst residual " << rep.worst()
        << " (algebra residual " << rep.algebra << " at triple (" << rep.worst_triple[0]
        << "," << rep.worst_triple[1] << "," << rep.worst_triple[2] << "))";
    throw std::logic_error(msg.str());
  }
  return b;
}

double check_kdp_algebra(const BetaSet &b, int worst_triple[3]) {
  double worst = 0.0;
  int wt[3] = {0, 0, 0};
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int la = 0; la < 4; ++la) {
        const Mat10 lhs =
            b.beta[mu] * b.beta[nu] * b.beta[la] + b.beta[la] * b.beta[nu] * b.beta[mu];
        const Mat10 rhs = (nu == la ? b.metric[nu] : 0.0) * b.beta[mu] +
                          (nu == mu ? b.metric[nu] : 0.0) * b.beta[la];
        const double r = (lhs - rhs).cwiseAbs().maxCoeff();
        if (r > worst) {
          worst = r;
          wt[0] = mu;
          wt[1] = nu;
          wt[2] = la;
        }
      }
    }
  }
  if (worst_triple) std::copy(wt, wt + 3, worst_triple);
  return worst;
}

AlgebraReport betaset_selfcheck(const BetaSet &b) {
  AlgebraReport rep;
  rep.algebra = check_kdp_algebra(b, rep.worst_triple);

  rep.gamma_idempotent = (b.gamma * b.gamma - b.gamma).cwiseAbs().maxCoeff();
  for (const auto &beta : b.beta) {
    const double r = (b.gamma * beta + beta * b.gamma - beta).cwiseAbs().maxCoeff();
    rep.gamma_anticommute = std::max(rep.gamma_anticommute, r);
  }

  for (const auto &tb : b.tilde_beta) {
    Eigen::SelfAdjointEigenSolver<Mat10> es(tb);
    double extremal_max = -2.0, extremal_min = 2.0;
    for (int i = 0; i < 10; ++i) {
      const double ev = es.eigenvalues()[i];
      const double dev = std::min({std::abs(ev + 1.0), std::abs(ev), std::abs(ev - 1.0)});
      rep.eigenvalue_deviation = std::max(rep.eigenvalue_deviation, dev);
      extremal_max = std::max(extremal_max, ev);
      extremal_min = std::min(extremal_min, ev);
    }
    // the velocity operator must reach both extremal speeds
    rep.eigenvalue_deviation = std::max(rep.eigenvalue_deviation, std::abs(extremal_max - 1.0));
    rep.eigenvalue_deviation = std::max(rep.eigenvalue_deviation, std::abs(extremal_min + 1.0));
  }

  // Monochromatic transverse plane waves must be unit-speed eigenstates of
  // the evolution operator along their propagation axis, and divergence-free
  // under the constraint row. Checked for both polarizations on each axis.
  const Mat10 beta0_sq = b.beta[0] * b.beta[0];
  for (int axis = 0; axis < 3; ++axis) {
    for (int pol = 0; pol < 2; ++pol) {
      Eigen::Vector3d k_hat = Eigen::Vector3d::Zero();
      k_hat[axis] = 1.0;
      Eigen::Vector3d d_dir = Eigen::Vector3d::Zero();
      d_dir[(axis + 1 + pol) % 3] = 1.0;
      const Eigen::Vector3d b_dir = k_hat.cross(d_dir);

      Spinor10 psi = Spinor10::from_fields(d_dir.cast<std::complex<double>>(),
                                           b_dir.cast<std::complex<double>>());
      const Vec10c evolved = b.tilde_beta[axis] * psi.c;
      rep.schroedinger_plane_wave =
          std::max(rep.schroedinger_plane_wave, (evolved - psi.c).cwiseAbs().maxCoeff());

      Vec10c constraint = Vec10c::Zero();
      for (int i = 0; i < 3; ++i)
        constraint += k_hat[i] * (b.beta[i + 1] * (beta0_sq * psi.c));
      rep.constraint_divergence =
          std::max(rep.constraint_divergence, std::abs(constraint(9)));
    }
  }
  return rep;
}

MasslessCurrent massless_current(const Spinor10 &psi, const BetaSet &b) {
  if (!psi.is_projected()) {
    std::ostringstream msg;
    msg << "massless_current requires a projected state; potential slots hold "
        << psi.unphysical_norm();
    throw std::invalid_argument(msg.str());
  }
  MasslessCurrent cur;
  cur.density = std::real(psi.c.dot(b.gamma * psi.c));
  for (int i = 0; i < 3; ++i)
    cur.flux[i] = std::real(psi.c.dot(b.projected_tilde[i] * psi.c));
  return cur;
}

std::array<std::complex<double>, 4> charge_current(const Spinor10 &psi, const BetaSet &b) {
  std::array<std::complex<double>, 4> j;
  for (int mu = 0; mu < 4; ++mu)
    j[mu] = psi.c.transpose() * b.beta[mu] * psi.c;
  return j;
}

Eigen::Matrix4d two_photon_tensor_current(const TwoPhotonSpinor &psi, const BetaSet &b) {
  // Observer fixed to (1,0,0,0); kernels act on the first tensor index via a
  // left product and on the second via the transposed right product.
  std::array<Mat10c, 4> left;  // psi^dag (kernel_mu psi)
  for (int mu = 0; mu < 4; ++mu)
    left[mu] = psi.amp.adjoint() * (b.current_kernel[mu] * psi.amp);

  Eigen::Matrix4d s;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      s(mu, nu) =
          std::real(left[mu].cwiseProduct(b.current_kernel[nu].cast<std::complex<double>>()).sum());
  return s;
}

}  // namespace bohmsim
