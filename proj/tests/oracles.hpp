#pragma once
// Independent reference computations used by the tests. Nothing here calls
// the library's transforms or closed forms; each oracle works from the
// defining formula (direct sums, finite differences, 1D maximization).

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/grid.hpp"

namespace oracle {

using nsdecay::GridSpec;
using nsdecay::PhysicalField;
using nsdecay::SpectralField;
using nsdecay::VelocityField;
constexpr double pi = std::numbers::pi;

inline PhysicalField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  PhysicalField f(g);
  for (auto& v : f.values()) v = nd(rng);
  return f;
}

/// Smooth random field: a handful of low Fourier modes with random
/// amplitudes, evaluated pointwise (no FFT).
inline PhysicalField smooth_field(const GridSpec& g, unsigned seed, int kmax = 3, bool zero_mean = true) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  struct Mode { int m1, m2; double a, b; };
  std::vector<Mode> modes;
  for (int m1 = -kmax; m1 <= kmax; ++m1)
    for (int m2 = 0; m2 <= kmax; ++m2) {
      if (m2 == 0 && m1 < 0) continue;
      if (zero_mean && m1 == 0 && m2 == 0) continue;
      modes.push_back({m1, m2, ud(rng), ud(rng)});
    }
  PhysicalField f(g);
  const double dk = 2.0 * pi / g.length;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double s = 0.0;
      for (const auto& m : modes) {
        const double ph = dk * (m.m1 * g.coord(i) + m.m2 * g.coord(j));
        s += m.a * std::cos(ph) + m.b * std::sin(ph);
      }
      f(i, j) = s;
    }
  return f;
}

/// Second-order periodic central difference along axis 0 (x1) or 1 (x2).
inline PhysicalField fd_derivative(const PhysicalField& f, int axis) {
  const auto& g = f.grid();
  const int n = g.n;
  const double h = g.spacing();
  PhysicalField d(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (axis == 0) d(i, j) = (f((i + 1) % n, j) - f((i + n - 1) % n, j)) / (2.0 * h);
      else d(i, j) = (f(i, (j + 1) % n) - f(i, (j + n - 1) % n)) / (2.0 * h);
    }
  return d;
}

inline double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double max_abs(const PhysicalField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Golden-section maximization of a unimodal function on [a, b].
inline std::pair<double, double> maximize(const std::function<double(double)>& f, double a, double b) {
  // coarse scan to bracket the maximum, then golden refinement
  const int n = 4000;
  int best = 0;
  double fb = -1e300;
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    const double v = f(x);
    if (v > fb) { fb = v; best = i; }
  }
  double lo = a + (b - a) * std::max(0, best - 1) / n, hi = a + (b - a) * std::min(n, best + 1) / n;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) { lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = f(x2); }
    else { hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = f(x1); }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

/// Azimuthal Oseen speed at radius r for core parameter c = 4 (t + t0).
inline double oseen_speed(double alpha, double c, double r) {
  return alpha / (2.0 * pi) * (1.0 - std::exp(-r * r / c)) / r;
}

/// sup_x |v(x, t)| from a 1D maximization over the radius.
inline double oseen_sup(double alpha, double t, double t0) {
  const double c = 4.0 * (t + t0);
  const auto [r, v] = maximize([&](double r) { return oseen_speed(std::abs(alpha), c, r); }, 1e-6, 10.0 * std::sqrt(c));
  (void)r;
  return v;
}

/// sup_x |grad v(x, t)|_F. For an azimuthal field the Jacobian has
/// Frobenius norm sqrt(v'(r)^2 + (v(r)/r)^2); v' by a centred difference.
inline double oseen_grad_sup(double alpha, double t, double t0) {
  const double c = 4.0 * (t + t0);
  auto frob = [&](double r) {
    const double d = 1e-5 * std::sqrt(c);
    const double vp = (oseen_speed(alpha, c, r + d) - oseen_speed(alpha, c, r - d)) / (2.0 * d);
    const double v = oseen_speed(alpha, c, r);
    return std::sqrt(vp * vp + (v / r) * (v / r));
  };
  return maximize(frob, 1e-3 * std::sqrt(c), 10.0 * std::sqrt(c)).second;
}

/// Periodic Biot-Savart by direct quadrature: the band-limited periodized
/// kernel K(x) = (1/L^2) sum_{k != 0} i (k2, -k1) / |k|^2 e^{i k.x} is summed
/// directly (Nyquist wavenumbers excluded), then u(x_i) = h^2 sum_j K(x_i - x_j) w(x_j).
inline std::pair<PhysicalField, PhysicalField> biot_savart_direct(const PhysicalField& w) {
  const auto& g = w.grid();
  const int n = g.n;
  const double dk = 2.0 * pi / g.length;
  const double L2 = g.length * g.length;
  // Kernel on the lattice of grid differences (index offsets d1, d2).
  std::vector<double> K1(static_cast<std::size_t>(n) * n), K2(K1.size());
  for (int d1 = 0; d1 < n; ++d1)
    for (int d2 = 0; d2 < n; ++d2) {
      const double x1 = d1 * g.spacing(), x2 = d2 * g.spacing();
      double s1 = 0.0, s2 = 0.0;
      for (int m1 = -n / 2 + 1; m1 < n / 2; ++m1)
        for (int m2 = -n / 2 + 1; m2 < n / 2; ++m2) {
          if (m1 == 0 && m2 == 0) continue;
          const double k1 = dk * m1, k2 = dk * m2;
          const double kk = k1 * k1 + k2 * k2;
          const double ph = k1 * x1 + k2 * x2;
          // Re[i k2 e^{i ph}] = -k2 sin(ph);  Re[-i k1 e^{i ph}] = k1 sin(ph)
          s1 += -k2 * std::sin(ph) / kk;
          s2 += k1 * std::sin(ph) / kk;
        }
      K1[static_cast<std::size_t>(d1) * n + d2] = s1 / L2;
      K2[static_cast<std::size_t>(d1) * n + d2] = s2 / L2;
    }
  PhysicalField u1(g), u2(g);
  const double h2 = g.cell_area();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double a = 0.0, b = 0.0;
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          const std::size_t d = static_cast<std::size_t>((i1 - j1 + n) % n) * n + (i2 - j2 + n) % n;
          a += K1[d] * w(j1, j2);
          b += K2[d] * w(j1, j2);
        }
      u1(i1, i2) = a * h2;
      u2(i1, i2) = b * h2;
    }
  return {u1, u2};
}

/// Discrete heat energy sum_k e^{-2|k|^2 t} |u_hat(k)|^2 L^2 over the full
/// spectrum, expanding the stored half plane by Hermitian symmetry.
inline double heat_energy_sum(const VelocityField& u, double t) {
  const auto& g = u.grid();
  const double dk = 2.0 * pi / g.length;
  double s = 0.0;
  for (int m1 = -g.n / 2; m1 < g.n / 2; ++m1)
    for (int m2 = -g.n / 2; m2 < g.n / 2; ++m2) {
      // stored entry for (m1, m2) or its conjugate (-m1, -m2)
      int a = m1, b = m2;
      if (b < 0) { a = -a; b = -b; }
      if (b > g.n / 2) continue;
      const int row = ((a % g.n) + g.n) % g.n;
      const double e = std::norm(u.u1(row, b)) + std::norm(u.u2(row, b));
      const double kk = dk * dk * (static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2);
      s += std::exp(-2.0 * kk * t) * e;
    }
  return s * g.length * g.length;
}

/// Whole-plane heat energy of the envelope |xi|^(gamma - 1) on |xi| <= 1:
/// 2 pi int_0^1 e^{-2 rho^2 t} rho^(2 gamma - 1) d rho, with rho = s^(1/(2 gamma)).
inline double continuum_heat_energy(double gamma, double t) {
  const int n = 20000;
  auto f = [&](double s) { return std::exp(-2.0 * t * std::pow(s, 1.0 / gamma)); };
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / n);
  return 2.0 * pi / (2.0 * gamma) * sum / (3.0 * n);
}

/// Ordinary least-squares slope.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { sxy += (x[i] - mx) * (y[i] - my); sxx += (x[i] - mx) * (x[i] - mx); }
  return sxy / sxx;
}

/// Negative log-log slope of the heat energy over log-spaced times in [t0, t1].
inline double heat_exponent(const std::function<double(double)>& energy, double t0, double t1, int samples = 32) {
  std::vector<double> x, y;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (samples - 1));
    x.push_back(std::log1p(t));
    y.push_back(std::log(energy(t)));
  }
  return -ols_slope(x, y);
}

/// Taylor-Green velocity with wavenumber k0 at time t under viscosity 1.
inline std::pair<PhysicalField, PhysicalField> taylor_green(const GridSpec& g, double amp, double t) {
  const double k0 = 2.0 * pi / g.length;
  const double decay = std::exp(-2.0 * k0 * k0 * t);
  PhysicalField a(g), b(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x = k0 * g.coord(i), y = k0 * g.coord(j);
      a(i, j) = amp * decay * std::sin(x) * std::cos(y);
      b(i, j) = -amp * decay * std::cos(x) * std::sin(y);
    }
  return {a, b};
}

/// Gaussian vorticity with circulation alpha and core parameter tau, centred at c.
inline PhysicalField gaussian(const GridSpec& g, double alpha, double tau, double c1 = 0.0, double c2 = 0.0) {
  PhysicalField w(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x = g.coord(i) - c1, y = g.coord(j) - c2;
      w(i, j) = alpha / (4.0 * pi * tau) * std::exp(-(x * x + y * y) / (4.0 * tau));
    }
  return w;
}

/// Zero-circulation dipole: two opposite Gaussians separated along x1.
inline PhysicalField dipole(const GridSpec& g, double strength, double tau, double sep) {
  auto a = gaussian(g, strength, tau, 0.5 * sep, 0.0);
  auto b = gaussian(g, strength, tau, -0.5 * sep, 0.0);
  for (std::size_t i = 0; i < a.values().size(); ++i) a.values()[i] -= b.values()[i];
  return a;
}

}  // namespace oracle
