#pragma once

#include "bohmsim/kdp_algebra.hpp"
#include "bohmsim/scenario_fields.hpp"

namespace bohmsim {

// c = 1 internally; velocities are in units of c.

enum class Quality { ok, degenerate };

struct VelocityDensity {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  double density = 0.0;
  Quality quality = Quality::ok;
};

/// v_i = flux_i / density from the bilinear currents. This is the
/// authoritative velocity definition; the closed forms below are validation
/// targets. Densities below the floor are flagged degenerate and the
/// reported ratio is speed-clamped.
VelocityDensity velocity_generic(const Spinor10 &psi, const BetaSet &b,
                                 double density_floor = 0.0);

struct PlaneSample {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double density = 0.0;
  Quality quality = Quality::ok;
};

/// Closed-form double-slit velocity written from the slit geometry alone.
/// Honors the config's diffraction-factor mode and, when keep_inverse_r is
/// set, weighs each slit amplitude by its 1/r decay so the form tracks the
/// bilinear route in either convention.
PlaneSample velocity_single_closed(double x, double y, const DoubleSlitConfig &cfg,
                                   double density_floor = 0.0);

struct PairSample {
  Eigen::Vector2d v1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d v2 = Eigen::Vector2d::Zero();
  double density = 0.0;
  Quality quality = Quality::ok;
};

/// Per-particle velocities from the tensor current on the pair amplitude:
/// v1_i = s_i0/s_00, v2_i = s_0i/s_00 (components i = x, y).
PairSample velocity_two_generic(double y1, double y2, const DoubleSlitConfig &cfg,
                                const BetaSet &b, double density_floor = 0.0);

/// The printed closed-form pair velocities. Angles are taken at the first
/// particle's position, the interference weight at the second's, and the
/// overall constant is fixed by matching the generic route at a symmetric
/// reference configuration. Diagnostic only; deviations from the generic
/// route are reported, not asserted.
class TwoPhotonClosedForm {
 public:
  TwoPhotonClosedForm(const DoubleSlitConfig &cfg, const BetaSet &b);

  PairSample eval(double y1, double y2, double density_floor = 0.0) const;
  double scale() const { return scale_; }

 private:
  DoubleSlitConfig cfg_;
  double scale_ = 1.0;
};

struct SlabSample {
  double v = 0.0;
  double density = 0.0;
  Quality quality = Quality::ok;
};

/// v_x = (c / n(x)) * flux/density: the envelope transport ratio at the
/// local propagation speed. Reduces to c/n on a lone packet inside the slab
/// and to the two-Gaussian ratio on the vacuum side.
SlabSample velocity_slab(double x, double t, const SlabDecomposition &dec,
                         const SlabConfig &cfg, const BetaSet &b, double density_floor = 0.0);
SlabSample velocity_slab(double x, double t, const SlabConfig &cfg, const BetaSet &b);

/// Evaluation contract handed to the trajectory engine: configuration point
/// and time to velocity, density and a quality flag. Implementations are
/// immutable after construction and safe for concurrent evaluation.
struct FieldSample {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double density = 0.0;
  Quality quality = Quality::ok;
};

class VelocityField {
 public:
  virtual ~VelocityField() = default;
  virtual int dimension() const = 0;
  virtual FieldSample eval(const Eigen::Vector2d &q, double t) const = 0;

  /// Positive pseudo-time rescaling: the integrator advances
  /// dq/dtau = v * dilation and dt/dtau = dilation, which reparameterizes
  /// the integral curves without changing them. Defaults to physical time.
  virtual double time_dilation(const Eigen::Vector2d &q) const {
    (void)q;
    return 1.0;
  }

  double density_floor() const { return density_floor_; }
  double density_scale() const { return density_scale_; }

 protected:
  // degenerate-point threshold relative to the largest density on the
  // scenario's sampling line
  static constexpr double kNodeEpsilon = 1e-12;
  double density_scale_ = 1.0;
  double density_floor_ = 0.0;

  void set_density_scale(double scale) {
    density_scale_ = scale;
    density_floor_ = kNodeEpsilon * scale;
  }
};

/// Double-slit field over (x, y), pseudo-time dilated by x so the launch
/// region near the slits is resolved with a fixed step.
class SingleSlitField : public VelocityField {
 public:
  enum class Route { generic, closed };

  SingleSlitField(const DoubleSlitConfig &cfg, const BetaSet &b, Route route = Route::generic);

  int dimension() const override { return 2; }
  FieldSample eval(const Eigen::Vector2d &q, double t) const override;
  double time_dilation(const Eigen::Vector2d &q) const override { return q[0]; }

  double density_on_line(double x, double y) const;

 private:
  DoubleSlitConfig cfg_;
  const BetaSet &betas_;
  Route route_;
};

/// Pair field over (y1, y2) on the detection plane, evolved in pseudo-time.
class TwoPhotonField : public VelocityField {
 public:
  TwoPhotonField(const DoubleSlitConfig &cfg, const BetaSet &b);

  int dimension() const override { return 2; }
  FieldSample eval(const Eigen::Vector2d &q, double t) const override;

  double joint_density(double y1, double y2) const;

 private:
  DoubleSlitConfig cfg_;
  const BetaSet &betas_;
};

/// Packet-on-slab field over x, integrated in physical time.
class SlabField : public VelocityField {
 public:
  SlabField(const SlabConfig &cfg, const BetaSet &b);

  int dimension() const override { return 1; }
  FieldSample eval(const Eigen::Vector2d &q, double t) const override;

  double density_at(double x, double t) const;
  const SlabDecomposition &decomposition() const { return dec_; }

 private:
  SlabConfig cfg_;
  SlabDecomposition dec_;
  const BetaSet &betas_;
};

}  // namespace bohmsim
