#include "nsdecay/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nsdecay/spectral.hpp"
#include "nsdecay/stats.hpp"

namespace nsdecay {

SpectralField heat_evolve(const SpectralField& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_evolve: negative time");
  const auto& g = f.grid();
  SpectralField out(g);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      out(a, b) = std::exp(-(k1 * k1 + k2 * k2) * t) * f(a, b);
    }
  }
  return out;
}

VelocityField heat_evolve(const VelocityField& u, double t) {
  return VelocityField(heat_evolve(u.u1, t), heat_evolve(u.u2, t));
}

double heat_energy(const VelocityField& u0, double t) {
  const auto& g = u0.grid();
  double s = 0.0;
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      const double m = std::norm(u0.u1(a, b)) + std::norm(u0.u2(a, b));
      if (m == 0.0) continue;
      s += g.column_weight(b) * std::exp(-2.0 * (k1 * k1 + k2 * k2) * t) * m;
    }
  }
  return g.length * g.length * s;
}

ScaledNormReport heat_lp_decay_check(const SpectralField& omega0, double p, std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("heat_lp_decay_check: empty time list");
  if (!(p >= 1.0)) throw std::invalid_argument("heat_lp_decay_check: p must lie in [1, inf]");
  std::vector<double> ts(times.begin(), times.end());
  std::sort(ts.begin(), ts.end());
  const double limit = omega0.grid().validity_time();
  for (double t : ts)
    if (!(t > 0.0) || t > limit)
      throw std::invalid_argument("heat_lp_decay_check: times must be positive and inside the box-validity window");

  const double exponent = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  ScaledNormReport report;
  report.times = ts;
  for (double t : ts) {
    const double norm = lp_norm(to_physical(heat_evolve(omega0, t)), p);
    report.scaled.push_back(std::pow(t, exponent) * norm);
  }
  report.sup = *std::max_element(report.scaled.begin(), report.scaled.end());
  report.growth = decade_growth(report.times, report.scaled);
  report.pass = report.growth <= kGrowthTolerance;
  return report;
}

namespace {

/// Integral of |xi|^(2 gamma - 2) over the square [-d/2, d/2]^2.
double origin_cell_integral(double gamma, double d) {
  // 8 * int_0^{pi/4} (d / (2 cos th))^(2 gamma) / (2 gamma) dth, composite Simpson.
  const int panels = 256;
  const double h = (std::numbers::pi / 4.0) / panels;
  double s = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double th = i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * std::pow(d / (2.0 * std::cos(th)), 2.0 * gamma);
  }
  return 8.0 * (s * h / 3.0) / (2.0 * gamma);
}

/// Cell average of |xi|^(2 gamma - 2) over the lattice cell centred at k.
double cell_average(double gamma, double k1, double k2, double d) {
  constexpr int sub = 8;
  double s = 0.0;
  for (int i = 0; i < sub; ++i) {
    const double x = k1 + d * ((i + 0.5) / sub - 0.5);
    for (int j = 0; j < sub; ++j) {
      const double y = k2 + d * ((j + 0.5) / sub - 0.5);
      s += std::pow(x * x + y * y, gamma - 1.0);
    }
  }
  return s / (sub * sub);
}

}  // namespace

VelocityField make_initial_data(double gamma, const GridSpec& grid, std::uint64_t seed, double amplitude) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("make_initial_data: gamma must lie in (0, 1]");
  if (!(amplitude > 0.0)) throw std::invalid_argument("make_initial_data: amplitude must be positive");
  grid.validate();
  const double d = grid.dk();
  if (d >= kInitialDataCutoff)
    throw std::invalid_argument("make_initial_data: box too small, lowest wavenumber exceeds the data cutoff");
  if (grid.dealias_cutoff() * d <= kInitialDataCutoff)
    throw std::invalid_argument("make_initial_data: grid too coarse to resolve the data cutoff");

  const double origin_share = origin_cell_integral(gamma, d) / (d * d) / 4.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  const Complex I(0.0, 1.0);

  SpectralField psi(grid);
  for (int a = 0; a < grid.n; ++a) {
    const int m1 = grid.mode_row(a);
    const double k1 = grid.k_row(a);
    for (int b = 0; b < grid.half(); ++b) {
      const int m2 = grid.mode_col(b);
      if (b == 0 && m1 <= 0) continue;  // mirrored below
      const double k2 = grid.k_col(b);
      const double kk = k1 * k1 + k2 * k2;
      if (kk > kInitialDataCutoff * kInitialDataCutoff) continue;
      // Phases are drawn for every mode of the ball so the sequence does not
      // depend on gamma.
      const double phase = phase_dist(rng);
      double weight = cell_average(gamma, k1, k2, d);
      if (std::abs(m1) + std::abs(m2) == 1) weight += origin_share;
      psi(a, b) = std::polar(std::sqrt(weight) / std::sqrt(kk), phase);
    }
  }
  for (int a = grid.n / 2 + 1; a < grid.n; ++a) psi(a, 0) = std::conj(psi(grid.n - a, 0));

  VelocityField u(grid);
  for (int a = 0; a < grid.n; ++a) {
    const double k1 = grid.k_row(a);
    for (int b = 0; b < grid.half(); ++b) {
      const double k2 = grid.k_col(b);
      u.u1(a, b) = I * k2 * psi(a, b);
      u.u2(a, b) = -I * k1 * psi(a, b);
    }
  }
  const double rms = std::sqrt(energy(u) / (grid.length * grid.length));
  u *= amplitude / rms;
  return u;
}

HeatDecayProfile estimate_heat_exponent(const VelocityField& u0, std::pair<double, double> window, int n_samples) {
  const auto [t_min, t_max] = window;
  const double limit = u0.grid().validity_time();
  if (!(t_min > 0.0 && t_min < t_max && t_max < limit))
    throw std::invalid_argument("estimate_heat_exponent: window must satisfy 0 < t_min < t_max < (L/2pi)^2/4 = " +
                                std::to_string(limit));
  if (n_samples < 8) throw std::invalid_argument("estimate_heat_exponent: need at least 8 samples");
  if (energy(u0) == 0.0) throw std::invalid_argument("estimate_heat_exponent: zero data has no decay exponent");

  HeatDecayProfile profile;
  profile.fit_window = window;
  std::vector<double> x, y;
  const double ratio = std::log(t_max / t_min) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    const double t = i == n_samples - 1 ? t_max : t_min * std::exp(ratio * i);
    const double e = heat_energy(u0, t);
    if (!(e > 0.0)) throw std::invalid_argument("estimate_heat_exponent: heat energy underflowed on the window");
    profile.samples.emplace_back(t, e);
    x.push_back(std::log1p(t));
    y.push_back(std::log(e));
  }
  const auto fit = fit_line(x, y);
  profile.raw_gamma = -fit.slope;
  profile.stderr_gamma = fit.slope_stderr;
  profile.gamma = std::clamp(profile.raw_gamma, 0.0, kMaxHeatExponent);
  profile.algebraic = profile.raw_gamma <= kMaxHeatExponent && fit.max_abs_residual <= 0.1;
  return profile;
}

}  // namespace nsdecay
