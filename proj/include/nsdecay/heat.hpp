#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nsdecay/field.hpp"

namespace nsdecay {

/// Exact heat flow: every coefficient multiplied by exp(-|k|^2 t).
SpectralField heat_evolve(const SpectralField& f, double t);
VelocityField heat_evolve(const VelocityField& u, double t);

/// ||exp(t Laplacian) u0||_2^2 evaluated directly on the spectrum.
double heat_energy(const VelocityField& u0, double t);

/// Sampled t^e * ||f(t)||_p together with its supremum and trend.
struct ScaledNormReport {
  std::vector<double> times;
  std::vector<double> scaled;
  double sup = 0.0;
  /// decade_growth of `scaled`; the check fails above `kGrowthTolerance`.
  double growth = 0.0;
  bool pass = true;
};

/// Relative growth across the sampled window tolerated by the "bounded in
/// time" style checks.
inline constexpr double kGrowthTolerance = 0.10;

/// Samples t^(1 - 1/p) ||exp(t Laplacian) omega0||_p at the given times.
ScaledNormReport heat_lp_decay_check(const SpectralField& omega0, double p, std::span<const double> times);

/// Radius of the spectral ball that carries the synthetic data.
inline constexpr double kInitialDataCutoff = 1.0;

/// Random-phase divergence-free data with |u0_hat(k)|^2 following the cell
/// average of |xi|^(2 gamma - 2) inside |k| <= 1. The mass of the excluded
/// k = 0 cell is given to the four nearest modes so that the discrete heat
/// energy tracks the whole-plane (1 + t)^(-gamma) law. `amplitude` is the
/// RMS speed over the box. Deterministic for a given seed.
VelocityField make_initial_data(double gamma, const GridSpec& grid, std::uint64_t seed, double amplitude);

struct HeatDecayProfile {
  /// Fitted exponent clamped to [0, 1.5].
  double gamma = 0.0;
  /// Unclamped negative slope of log E against log(1 + t).
  double raw_gamma = 0.0;
  double stderr_gamma = 0.0;
  std::vector<std::pair<double, double>> samples;
  std::pair<double, double> fit_window;
  /// False when the energy is not a power law on the window (raw exponent
  /// beyond the clamp or log-log residuals above 0.1).
  bool algebraic = true;
};

inline constexpr double kMaxHeatExponent = 1.5;

HeatDecayProfile estimate_heat_exponent(const VelocityField& u0, std::pair<double, double> window, int n_samples);

}  // namespace nsdecay
