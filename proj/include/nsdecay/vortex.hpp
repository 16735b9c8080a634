#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/heat.hpp"

namespace nsdecay {

using Vec2 = std::array<double, 2>;

/// Gaussian vortex of total circulation `alpha` whose core has already
/// diffused for a time `t0`; at time t it is the Oseen vortex at age t + t0.
struct RadialVortexParams {
  double alpha = 1.0;
  double t0 = 1.0;

  void validate() const;
  bool operator==(const RadialVortexParams&) const = default;
};

/// alpha / (4 pi (t + t0)) * exp(-|x|^2 / (4 (t + t0))).
double radial_vorticity(const RadialVortexParams& p, Vec2 x, double t);

/// (alpha / 2 pi) x_perp / |x|^2 (1 - exp(-|x|^2 / (4 (t + t0)))), x_perp = (-x2, x1).
Vec2 oseen_velocity(const RadialVortexParams& p, Vec2 x, double t);

/// Jacobian entries d_j v_i of the Oseen velocity.
struct VelocityGradient {
  double d1v1 = 0.0, d2v1 = 0.0, d1v2 = 0.0, d2v2 = 0.0;
  [[nodiscard]] double frobenius() const;
};
VelocityGradient oseen_gradient(const RadialVortexParams& p, Vec2 x, double t);

/// Velocity of a radial vorticity profile: (x_perp / |x|^2) int_0^|x| s w(s) ds,
/// integrated adaptively to relative accuracy 1e-10.
Vec2 radial_velocity_from_profile(const std::function<double(double)>& profile, Vec2 x);

/// Periodic Biot-Savart inversion u_hat = i (k2, -k1) w_hat / |k|^2. The mean
/// mode (and the Nyquist rows, which carry no resolvable velocity) are dropped.
VelocityField biot_savart_spectral(const SpectralField& omega);

/// Analytic background sampled at the grid points at time t. The gradient
/// fields are left empty when not requested.
struct BackgroundSnapshot {
  double t = 0.0;
  PhysicalField v1, v2;
  PhysicalField omega;
  PhysicalField d1v1, d2v1, d1v2, d2v2;
};
BackgroundSnapshot sample_background(const RadialVortexParams& p, const GridSpec& grid, double t,
                                     bool with_gradient = true);
PhysicalField sample_radial_vorticity(const RadialVortexParams& p, const GridSpec& grid, double t);

/// Samples t^(1/2 + deriv/2 - 1/eta) ||grad^deriv v(t)||_eta over the
/// snapshots. Admissible pairs: deriv = 0 with 2 < eta <= inf, deriv = 1 with
/// eta = inf. Fails when the quantity grows by more than 10% between the
/// first and the last decade of the sampled times.
ScaledNormReport vass_check(std::span<const BackgroundSnapshot> snapshots, double eta, int deriv);

/// ||v||_inf / (||omega||_p^a ||omega||_q^(1-a)) with 1/2 = a/p + (1-a)/q and
/// v the periodic Biot-Savart velocity of the zero-mean `omega`.
struct InterpolationRatio {
  double ratio = 0.0;
  double a = 0.0;
};
InterpolationRatio interpolation_bound_check(const SpectralField& omega, double p, double q);

}  // namespace nsdecay
