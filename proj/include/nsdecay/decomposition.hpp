#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/vortex.hpp"

namespace nsdecay {

/// w0 = u0 + v0: a finite-energy velocity plus the velocity of a Gaussian
/// vortex carrying all of the circulation.
struct Decomposition {
  VelocityField u0;
  RadialVortexParams vortex;
  /// Box circulation of omega0 minus the sampled background (should vanish).
  double residual_circulation = 0.0;
  /// The sampled background vorticity that was subtracted.
  SpectralField background;
};

/// Box integral of a vorticity, L^2 * omega_hat(0).
double circulation(const SpectralField& omega);

/// Rejects data whose |omega| mass outside radius L/4 exceeds this fraction.
inline constexpr double kBoundaryMassFraction = 0.01;

Decomposition radial_energy_decompose(const SpectralField& omega0, double t0);

struct FarFieldFit {
  double slope = 0.0;
  /// slope < -1/2: the field decays away from the origin.
  bool localized = false;
  std::vector<std::pair<double, double>> samples;  // (r, max |u| on the ring)
};

/// Largest radius allowed: nearest periodic image contributes < 10%, i.e.
/// (r / (L - r))^2 < 0.1.
double far_field_max_radius(const GridSpec& grid);

/// Log-log slope of max_{|x| ~ r} |u0(x)| against r.
FarFieldFit far_field_exponent(const VelocityField& u0, std::span<const double> radii);

/// Box L^p norm of |u0| for p in (1, 2].
double lp_membership_check(const VelocityField& u0, double p);

}  // namespace nsdecay
