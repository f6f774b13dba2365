#pragma once

#include <array>
#include <complex>
#include <Eigen/Dense>

namespace bohmsim {

using Mat10 = Eigen::Matrix<double, 10, 10>;
using Vec10c = Eigen::Matrix<std::complex<double>, 10, 1>;
using Mat10c = Eigen::Matrix<std::complex<double>, 10, 10>;
using Vec3c = Eigen::Matrix<std::complex<double>, 3, 1>;

/// 10-component spin-1 wave function. The physical (projected) layout is
/// (-D_x, -D_y, -D_z, B_x, B_y, B_z, 0, 0, 0, 0); the last four slots carry
/// potential-like components that the projector removes.
struct Spinor10 {
  Vec10c c = Vec10c::Zero();

  static Spinor10 from_fields(const Vec3c &d_field, const Vec3c &b_field);

  Vec3c electric() const { return -c.segment<3>(0); }
  Vec3c magnetic() const { return c.segment<3>(3); }

  /// Largest magnitude found in the projector-removed slots 6..9.
  double unphysical_norm() const { return c.segment<4>(6).cwiseAbs().maxCoeff(); }
  bool is_projected(double tol = 1e-12) const;
};

/// Two-photon amplitude: index 1 is the first particle's spinor index,
/// index 2 the second's.
struct TwoPhotonSpinor {
  Mat10c amp = Mat10c::Zero();

  static TwoPhotonSpinor product(const Spinor10 &a, const Spinor10 &b);
};

/// Residuals of the defining matrix identities, filled by betaset_selfcheck.
struct AlgebraReport {
  double algebra = 0.0;        // worst three-index product identity residual
  int worst_triple[3] = {0, 0, 0};
  double gamma_idempotent = 0.0;
  double gamma_anticommute = 0.0;
  double eigenvalue_deviation = 0.0;  // from the set {-1, 0, +1}
  double schroedinger_plane_wave = 0.0;
  double constraint_divergence = 0.0;

  double worst() const;
};

/// The four 10x10 spin-1 matrices, the massless projector and the derived
/// velocity operators. Immutable after construction; safe to share.
struct BetaSet {
  std::array<Mat10, 4> beta;        // beta[mu], mu = 0..3
  Mat10 gamma;                      // projector onto the field slots
  std::array<Mat10, 3> tilde_beta;  // beta0*beta_i - beta_i*beta0
  Eigen::Vector4d metric;           // diag(+1,-1,-1,-1)

  std::array<Mat10, 3> projected_tilde;  // gamma * tilde_beta_i * gamma

  // Lab-frame current kernels eta0*(beta_mu*beta_0 + beta_0*beta_mu - g_mu0)*gamma
  // with eta0 = 2*beta_0^2 - 1, the adjoint-row factor. Reduces to gamma for
  // mu = 0 and tilde_beta_mu*gamma for spatial mu.
  std::array<Mat10, 4> current_kernel;
};

/// Builds the representation whose evolution equation reproduces the two
/// Maxwell curl equations on the layout above and whose constraint row gives
/// div E = 0. Throws std::logic_error (with the offending index triple) if
/// any defining identity fails to hold to 1e-12.
BetaSet build_spin1_betas();

/// Worst elementwise residual of the three-index product identity over all
/// 64 index triples. Pure diagnostic.
double check_kdp_algebra(const BetaSet &b, int worst_triple[3] = nullptr);

/// Full identity sweep plus the plane-wave evolution/constraint checks.
AlgebraReport betaset_selfcheck(const BetaSet &b);

/// Probability density psi^dag Gamma psi and flux Re(psi^dag Gamma
/// tilde_beta_i Gamma psi). For the physical layout the flux equals
/// 2 Re(D* x B), i.e. twice the Poynting vector. Requires a projected state.
struct MasslessCurrent {
  double density = 0.0;
  Eigen::Vector3d flux = Eigen::Vector3d::Zero();
};
MasslessCurrent massless_current(const Spinor10 &psi, const BetaSet &b);

/// j_mu = psi^T beta_mu psi with the plain transpose; vanishes identically
/// on projected states (the spatial matrices are antisymmetric and the time
/// component only couples field slots to the zeroed potential slots).
std::array<std::complex<double>, 4> charge_current(const Spinor10 &psi, const BetaSet &b);

/// Rank-2 tensor current with the observer fixed to the lab frame.
/// s_00 is the joint density; s_i0/s_00 and s_0i/s_00 are the per-particle
/// velocity ratios.
Eigen::Matrix4d two_photon_tensor_current(const TwoPhotonSpinor &psi, const BetaSet &b);

}  // namespace bohmsim
