#include "nsdecay/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsdecay/spectral.hpp"
#include "nsdecay/stats.hpp"

namespace nsdecay {

double circulation(const SpectralField& omega) {
  const double l = omega.grid().length;
  return l * l * omega(0, 0).real();
}

Decomposition radial_energy_decompose(const SpectralField& omega0, double t0) {
  if (!(t0 > 0.0)) throw std::invalid_argument("radial_energy_decompose: t0 must be positive");
  const auto& g = omega0.grid();
  if (2.0 * std::sqrt(t0) > g.length / 8.0)
    throw std::invalid_argument("radial_energy_decompose: Gaussian core wider than box/8, background not resolved");

  const auto w = to_physical(omega0);
  double total = 0.0, outside = 0.0;
  const double r_edge = g.length / 4.0;
  for (int i = 0; i < g.n; ++i) {
    const double x1 = g.coord(i);
    for (int j = 0; j < g.n; ++j) {
      const double x2 = g.coord(j);
      const double m = std::abs(w(i, j));
      total += m;
      if (x1 * x1 + x2 * x2 > r_edge * r_edge) outside += m;
    }
  }
  if (total > 0.0 && outside > kBoundaryMassFraction * total)
    throw std::invalid_argument("radial_energy_decompose: more than 1% of |omega| lies outside radius L/4");

  Decomposition d;
  d.vortex = RadialVortexParams{circulation(omega0), t0};

  auto bar = sample_radial_vorticity(d.vortex, g, 0.0);
  // Rescale so the grid integral is exactly alpha.
  double grid_integral = 0.0;
  for (double x : bar.values()) grid_integral += x;
  grid_integral *= g.cell_area();
  if (grid_integral != 0.0) {
    const double s = d.vortex.alpha / grid_integral;
    for (double& x : bar.values()) x *= s;
  }
  d.background = from_physical(bar);
  d.background(0, 0) = Complex(d.vortex.alpha / (g.length * g.length), 0.0);

  const SpectralField remainder = omega0 - d.background;
  d.residual_circulation = circulation(remainder);
  d.u0 = biot_savart_spectral(remainder);
  return d;
}

double far_field_max_radius(const GridSpec& grid) {
  // r / (L - r) = sqrt(0.1)
  const double s = std::sqrt(0.1);
  return grid.length * s / (1.0 + s);
}

FarFieldFit far_field_exponent(const VelocityField& u0, std::span<const double> radii) {
  const auto& g = u0.grid();
  if (radii.size() < 2) throw std::invalid_argument("far_field_exponent: need at least two radii");
  const double r_lo = g.length / 8.0;
  const double r_hi = std::min(0.45 * g.length, far_field_max_radius(g));
  for (double r : radii)
    if (!(r > r_lo && r < r_hi))
      throw std::invalid_argument("far_field_exponent: radius " + std::to_string(r) + " outside (" +
                                  std::to_string(r_lo) + ", " + std::to_string(r_hi) +
                                  "), where periodic images contaminate by less than 10%");

  const auto p1 = to_physical(u0.u1);
  const auto p2 = to_physical(u0.u2);
  const double half_width = 0.5 * g.spacing();
  FarFieldFit fit;
  std::vector<double> x, y;
  for (double r : radii) {
    double m = 0.0;
    bool hit = false;
    for (int i = 0; i < g.n; ++i) {
      const double x1 = g.coord(i);
      if (std::abs(x1) > r + half_width) continue;
      for (int j = 0; j < g.n; ++j) {
        const double rr = std::hypot(x1, g.coord(j));
        if (rr < r - half_width || rr >= r + half_width) continue;
        hit = true;
        m = std::max(m, std::hypot(p1(i, j), p2(i, j)));
      }
    }
    if (!hit || m == 0.0) throw std::invalid_argument("far_field_exponent: empty or zero ring");
    fit.samples.emplace_back(r, m);
    x.push_back(std::log(r));
    y.push_back(std::log(m));
  }
  fit.slope = fit_line(x, y).slope;
  fit.localized = fit.slope < -0.5;
  return fit;
}

double lp_membership_check(const VelocityField& u0, double p) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("lp_membership_check: p must lie in (1, 2]");
  return lp_norm(to_physical(u0.u1), to_physical(u0.u2), p);
}

}  // namespace nsdecay
