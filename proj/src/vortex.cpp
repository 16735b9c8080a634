#include "nsdecay/vortex.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nsdecay/spectral.hpp"
#include "nsdecay/stats.hpp"

namespace nsdecay {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Radial factors of the Oseen vortex at r^2 = rho with c = 4 (t + t0):
///   v = f x_perp, f = (alpha / 2 pi) (1 - e^{-s}) / rho, s = rho / c,
///   df = d f / d rho, w = alpha / (pi c) e^{-s}.
struct RadialFactors {
  double f, df, w;
};

RadialFactors radial_factors(double alpha, double c, double rho) {
  const double s = rho / c;
  const double e = std::exp(-s);
  double g = 0.0;   // (1 - e^{-s}) / s
  double dg = 0.0;  // d g / d s
  if (s < 0.1) {
    // g = sum_{n>=1} (-1)^(n-1) s^(n-1) / n!,  dg = sum_{n>=2} (-1)^(n-1) (n-1) s^(n-2) / n!
    double fact = 1.0, power = 1.0;
    for (int n = 1; n <= 12; ++n) {
      fact *= n;
      const double sign = (n % 2 == 1) ? 1.0 : -1.0;
      g += sign * power / fact;
      if (n >= 2) dg += sign * (n - 1) * (power / s) / fact;
      power *= s;
    }
    if (s == 0.0) dg = -0.5;
  } else {
    g = (1.0 - e) / s;
    dg = (s * e - (1.0 - e)) / (s * s);
  }
  const double scale = alpha / kTwoPi;
  return {scale * g / c, scale * dg / (c * c), alpha / (std::numbers::pi * c) * e};
}

}  // namespace

void RadialVortexParams::validate() const {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw std::invalid_argument("vortex.t0 must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("vortex.alpha must be finite");
}

double radial_vorticity(const RadialVortexParams& p, Vec2 x, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("radial_vorticity: negative time");
  const double tau = t + p.t0;
  const double r2 = x[0] * x[0] + x[1] * x[1];
  return p.alpha / (4.0 * std::numbers::pi * tau) * std::exp(-r2 / (4.0 * tau));
}

Vec2 oseen_velocity(const RadialVortexParams& p, Vec2 x, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("oseen_velocity: negative time");
  const auto r = radial_factors(p.alpha, 4.0 * (t + p.t0), x[0] * x[0] + x[1] * x[1]);
  return {-r.f * x[1], r.f * x[0]};
}

double VelocityGradient::frobenius() const {
  return std::sqrt(d1v1 * d1v1 + d2v1 * d2v1 + d1v2 * d1v2 + d2v2 * d2v2);
}

VelocityGradient oseen_gradient(const RadialVortexParams& p, Vec2 x, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("oseen_gradient: negative time");
  const auto r = radial_factors(p.alpha, 4.0 * (t + p.t0), x[0] * x[0] + x[1] * x[1]);
  const double f = r.f, df = r.df;
  VelocityGradient g;
  g.d1v1 = -2.0 * df * x[0] * x[1];
  g.d2v1 = -2.0 * df * x[1] * x[1] - f;
  g.d1v2 = 2.0 * df * x[0] * x[0] + f;
  g.d2v2 = 2.0 * df * x[0] * x[1];
  return g;
}

Vec2 radial_velocity_from_profile(const std::function<double(double)>& profile, Vec2 x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  if (r2 == 0.0) return {0.0, 0.0};
  const double r = std::sqrt(r2);
  double error = 0.0;
  const auto integrand = [&](double s) { return s * profile(s); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, r, 20, 1e-12, &error);
  if (!std::isfinite(integral) || !(error <= 1e-10 * std::max(1.0, std::abs(integral))))
    throw std::domain_error("radial_velocity_from_profile: profile is not integrable on [0, |x|]");
  const double f = integral / r2;
  return {-f * x[1], f * x[0]};
}

VelocityField biot_savart_spectral(const SpectralField& omega) {
  const auto& g = omega.grid();
  VelocityField u(g);
  const Complex I(0.0, 1.0);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.kd_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.kd_col(b);
      const double kk = k1 * k1 + k2 * k2;
      if (kk == 0.0 || g.is_nyquist(a, b)) continue;
      const Complex w = omega(a, b) / kk;
      u.u1(a, b) = I * k2 * w;
      u.u2(a, b) = -I * k1 * w;
    }
  }
  return u;
}

BackgroundSnapshot sample_background(const RadialVortexParams& p, const GridSpec& grid, double t, bool with_gradient) {
  if (!(t >= 0.0)) throw std::invalid_argument("sample_background: negative time");
  BackgroundSnapshot s;
  s.t = t;
  s.v1 = s.v2 = s.omega = PhysicalField(grid);
  if (with_gradient) s.d1v1 = s.d2v1 = s.d1v2 = s.d2v2 = PhysicalField(grid);

  // The factors depend on |x|^2 only: tabulate them on one quadrant.
  const int n = grid.n;
  const int q = n / 2 + 1;
  const double h = grid.spacing();
  const double c = 4.0 * (t + p.t0);
  std::vector<RadialFactors> table(static_cast<std::size_t>(q) * q);
  for (int a = 0; a < q; ++a)
    for (int b = a; b < q; ++b) {
      const double rho = (static_cast<double>(a) * a + static_cast<double>(b) * b) * h * h;
      table[static_cast<std::size_t>(a) * q + b] = table[static_cast<std::size_t>(b) * q + a] =
          radial_factors(p.alpha, c, rho);
    }
  for (int i = 0; i < n; ++i) {
    const int ai = i <= n / 2 ? i : n - i;
    const double x1 = grid.coord(i);
    for (int j = 0; j < n; ++j) {
      const int aj = j <= n / 2 ? j : n - j;
      const double x2 = grid.coord(j);
      const auto& r = table[static_cast<std::size_t>(ai) * q + aj];
      s.v1(i, j) = -r.f * x2;
      s.v2(i, j) = r.f * x1;
      s.omega(i, j) = r.w;
      if (with_gradient) {
        s.d1v1(i, j) = -2.0 * r.df * x1 * x2;
        s.d2v1(i, j) = -2.0 * r.df * x2 * x2 - r.f;
        s.d1v2(i, j) = 2.0 * r.df * x1 * x1 + r.f;
        s.d2v2(i, j) = 2.0 * r.df * x1 * x2;
      }
    }
  }
  return s;
}

PhysicalField sample_radial_vorticity(const RadialVortexParams& p, const GridSpec& grid, double t) {
  PhysicalField w(grid);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) w(i, j) = radial_vorticity(p, {grid.coord(i), grid.coord(j)}, t);
  return w;
}

ScaledNormReport vass_check(std::span<const BackgroundSnapshot> snapshots, double eta, int deriv) {
  const bool admissible = (deriv == 0 && eta > 2.0) || (deriv == 1 && std::isinf(eta));
  if (!admissible) throw std::invalid_argument("vass_check: inadmissible (deriv, eta) pair");
  if (snapshots.empty()) throw std::invalid_argument("vass_check: no snapshots");

  std::vector<const BackgroundSnapshot*> order;
  for (const auto& s : snapshots) {
    if (!(s.t > 0.0)) throw std::invalid_argument("vass_check: snapshot times must be positive");
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->t < b->t; });

  const double exponent = 0.5 + 0.5 * deriv - (std::isinf(eta) ? 0.0 : 1.0 / eta);
  ScaledNormReport report;
  for (const auto* s : order) {
    double norm = 0.0;
    if (deriv == 0) {
      norm = lp_norm(s->v1, s->v2, eta);
    } else {
      const auto a = s->d1v1.values(), b = s->d2v1.values(), c = s->d1v2.values(), d = s->d2v2.values();
      for (std::size_t i = 0; i < a.size(); ++i)
        norm = std::max(norm, std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i] + d[i] * d[i]));
    }
    report.times.push_back(s->t);
    report.scaled.push_back(std::pow(s->t, exponent) * norm);
  }
  report.sup = *std::max_element(report.scaled.begin(), report.scaled.end());
  report.growth = decade_growth(report.times, report.scaled);
  report.pass = report.growth <= kGrowthTolerance;
  return report;
}

InterpolationRatio interpolation_bound_check(const SpectralField& omega, double p, double q) {
  if (!(p >= 1.0 && p < 2.0 && q > 2.0)) throw std::invalid_argument("interpolation_bound_check: need 1 <= p < 2 < q <= inf");
  if (std::abs(omega(0, 0)) > 1e-10 * std::max(omega.max_abs(), 1e-300))
    throw std::invalid_argument("interpolation_bound_check: vorticity must have zero mean on the box");
  InterpolationRatio out;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  out.a = (0.5 - inv_q) / (1.0 / p - inv_q);
  const auto u = biot_savart_spectral(omega);
  const double vmax = lp_norm(to_physical(u.u1), to_physical(u.u2), kInfinity);
  const auto w = to_physical(omega);
  const double denom = std::pow(lp_norm(w, p), out.a) * std::pow(lp_norm(w, q), 1.0 - out.a);
  out.ratio = denom == 0.0 ? 0.0 : vmax / denom;
  return out;
}

}  // namespace nsdecay
