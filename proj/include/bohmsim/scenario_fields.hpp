#pragma once

#include <string>
#include <vector>

#include "bohmsim/kdp_algebra.hpp"

namespace bohmsim {

/// sin(u)/u with the removable singularity filled in.
double sinc(double u);

enum class FarFieldMode { fixed_D, local_x };

/// Double-slit geometry: slits of width d centered at y = +a and y = -a,
/// detection line at x = D. far_field_mode selects whether the diffraction
/// factors use the constant D or the current x; keep_inverse_r keeps the
/// spherical 1/r amplitude decay (the literal textbook form drops it).
struct DoubleSlitConfig {
  double E0 = 1.0;
  double B0 = 1.0;
  double k = 2.0 * 3.14159265358979323846 / 5e-7;
  double d = 1e-5;
  double a = 2e-4;
  double D = 1.0;
  FarFieldMode far_field_mode = FarFieldMode::local_x;
  bool keep_inverse_r = true;

  /// Throws std::invalid_argument on bad values; returns non-fatal warnings.
  std::vector<std::string> validate() const;
};

/// Per-point slit geometry: distances, signed diffraction angles and the
/// sinc diffraction factors. Angles are signed so that each single-slit flow
/// is radially outward from its slit center.
struct SlitGeometry {
  double r_a = 0, r_b = 0;
  double theta_a = 0, theta_b = 0;
  double sin_a = 0, cos_a = 0, sin_b = 0, cos_b = 0;
  double g_a = 0, g_b = 0;
};

/// Requires x > 0 (geometry is undefined behind the slit plane).
SlitGeometry slit_geometry(double x, double y, const DoubleSlitConfig &cfg);

/// Superposition of the two diffracted slit waves at (x, y).
Spinor10 single_photon_psi(double x, double y, const DoubleSlitConfig &cfg);

/// Path-entangled pair amplitude on the detection plane x1 = x2 = D,
/// symmetric under particle exchange.
TwoPhotonSpinor two_photon_psi(double y1, double y2, const DoubleSlitConfig &cfg);

/// Gaussian packet incident from x0 < slab_start on a slab of index n
/// occupying [slab_start, slab_end]. amplitude_cutoff truncates the family
/// of reflected/transmitted packets once relative amplitudes drop below it.
struct SlabConfig {
  double E0 = 1.0;
  double sigma0 = 2.5e-3;  // squared width of the Gaussian envelope
  double x0 = -0.5;
  double n = 1.5;
  double slab_start = 0.0;
  double slab_end = 0.2;
  double amplitude_cutoff = 1e-12;

  std::vector<std::string> validate() const;
};

/// One envelope term A*exp(-(q*x + p - c*t - x0)^2 / (2*sigma0)); q = +-(local
/// index), so the magnetic contribution is q times the electric one.
struct SlabPacket {
  double amp = 0;
  double q = 0;
  double p = 0;
};

/// The packet families per region (0: left vacuum, 1: slab, 2: right vacuum),
/// generated once per config by tracing reflections/transmissions until the
/// amplitude cutoff.
struct SlabDecomposition {
  std::vector<SlabPacket> region[3];
  double edges[2];  // slab_start, slab_end
  double index[3];  // refractive index per region

  int region_of(double x) const;
};
SlabDecomposition decompose_slab(const SlabConfig &cfg);

struct SlabFieldSample {
  double E = 0;
  double B = 0;
};
SlabFieldSample slab_fields(double x, double t, const SlabConfig &cfg);
SlabFieldSample slab_fields(double x, double t, const SlabDecomposition &dec, double x0,
                            double sigma0, double E0);

/// Wave function of the slab scenario. The transverse electric component is
/// stored index-weighted (-n(x)*E in the y electric slot) so that the
/// density is the medium energy density and the flux/density ratio is the
/// envelope transport ratio; B sits in the z magnetic slot.
Spinor10 slab_psi(double x, double t, const SlabConfig &cfg);
Spinor10 slab_psi(double x, double t, const SlabDecomposition &dec, const SlabConfig &cfg);

}  // namespace bohmsim
