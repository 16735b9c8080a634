#include "nsdecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nsdecay/spectral.hpp"
#include "nsdecay/stats.hpp"

namespace nsdecay {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<const EnergyRow*> rows_in(const EnergySeries& series, std::pair<double, double> window) {
  const auto [lo, hi] = window;
  if (!(lo < hi)) throw std::invalid_argument("empty fit window");
  const double slack = 1e-9 * std::max(1.0, hi);
  std::vector<const EnergyRow*> out;
  for (const auto& r : series.rows)
    if (r.t >= lo - slack && r.t <= hi + slack) out.push_back(&r);
  return out;
}

}  // namespace

DecayFit fit_decay_rate(const EnergySeries& series, std::pair<double, double> window) {
  const auto rows = rows_in(series, window);
  if (rows.size() < 10) throw std::invalid_argument("fit_decay_rate: fewer than 10 samples in the window");
  std::vector<double> x, y;
  for (const auto* r : rows) {
    if (!(r->E > 0.0)) throw std::invalid_argument("fit_decay_rate: non-positive energy in the window");
    x.push_back(std::log1p(r->t));
    y.push_back(std::log(r->E));
  }
  const auto fit = fit_line(x, y);
  return {fit.slope, fit.slope_stderr, window, rows.size()};
}

double compensated_ratio(const EnergySeries& series, std::pair<double, double> window, double gamma) {
  const auto rows = rows_in(series, window);
  if (rows.empty()) throw std::invalid_argument("compensated_ratio: no samples in the window");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto* r : rows) {
    const double q = r->E * std::pow(1.0 + r->t, gamma);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (hi == 0.0) return 1.0;
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

SplitCheck fourier_split_check(const VelocityField& u, double t, double C0) {
  if (!(t >= 0.0)) throw std::invalid_argument("fourier_split_check: negative time");
  if (!(C0 > 0.0)) throw std::invalid_argument("fourier_split_check: C0 must be positive");
  const auto& g = u.grid();
  SplitCheck out;
  out.r2 = (1.0 + C0) / (t + 1.0);
  double low = 0.0, high = 0.0, diss = 0.0;
  for (int a = 0; a < g.n; ++a) {
    const double ka = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double kb = g.k_col(b);
      const double kk = ka * ka + kb * kb;
      const double e = g.column_weight(b) * (std::norm(u.u1(a, b)) + std::norm(u.u2(a, b)));
      (kk < out.r2 ? low : high) += e;
      diss += kk * e;
    }
  }
  const double area = g.length * g.length;
  out.E_low = area * low;
  out.E_high = area * high;
  out.lhs = out.r2 * out.E_high;
  out.rhs = area * diss;
  out.holds = out.lhs <= out.rhs + kSplitTolerance * std::max(out.lhs, out.rhs);
  return out;
}

std::size_t count_split_violations(const EnergySeries& series) {
  std::size_t bad = 0;
  for (const auto& r : series.rows) {
    const double lhs = r.r2 * r.E_high;
    if (!(lhs <= r.D + kSplitTolerance * std::max(lhs, r.D))) ++bad;
  }
  return bad;
}

AprioriReport apriori_bound_check(const EnergySeries& series, double t0) {
  if (!(t0 > 0.0)) throw std::invalid_argument("apriori_bound_check: t0 must be positive");
  if (series.rows.empty() || series.rows.front().t > t0 + 1e-12)
    throw std::invalid_argument("apriori_bound_check: series starts after t0");
  std::vector<double> t, q;
  for (const auto& r : series.rows)
    if (r.t >= t0 - 1e-12) {
      t.push_back(r.t);
      q.push_back(r.E / (1.0 + r.t));
    }
  AprioriReport out;
  if (t.empty()) throw std::invalid_argument("apriori_bound_check: no samples at or after t0");
  out.constant = *std::max_element(q.begin(), q.end());
  if (t.size() == 1) {
    out.first_decade_sup = out.last_decade_sup = out.constant;
    out.pass = std::isfinite(out.constant);
    return out;
  }
  const auto split = split_decades(t);
  out.first_decade_sup = *std::max_element(q.begin() + split.first_begin, q.begin() + split.first_end);
  out.last_decade_sup = *std::max_element(q.begin() + split.last_begin, q.begin() + split.last_end);
  out.pass = std::isfinite(out.constant) && out.last_decade_sup <= out.first_decade_sup * (1.0 + 1e-12);
  return out;
}

InequalityReport energy_inequality_check(const EnergySeries& series) {
  const auto& r = series.rows;
  const std::size_t n = r.size();
  if (n < 3) throw std::invalid_argument("energy_inequality_check: need at least 3 samples");

  // Third-derivative estimates for the truncation error of the centred quotient.
  std::vector<double> third(n, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double d = 0.25 * (r[i + 2].t - r[i - 2].t);
    third[i] = std::abs(r[i + 2].E - 2.0 * r[i + 1].E + 2.0 * r[i - 1].E - r[i - 2].E) / (2.0 * d * d * d);
  }
  if (n >= 5) {
    third[1] = third[2];
    third[n - 2] = third[n - 3];
  }

  InequalityReport out;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double span = r[i + 1].t - r[i - 1].t;
    const double dEdt = (r[i + 1].E - r[i - 1].E) / span;
    const double bound = -2.0 * r[i].D + 2.0 * std::abs(r[i].Tv);
    double e3 = third[i];
    if (i >= 2) e3 = std::max(e3, third[i - 1]);
    if (i + 2 < n) e3 = std::max(e3, third[i + 1]);
    const double h = 0.5 * span;
    const double scale = std::abs(dEdt) + 2.0 * r[i].D + 2.0 * std::abs(r[i].Tv);
    const double tol = 2.0 * h * h / 6.0 * e3 + 1e-8 * scale + 1e-300;
    ++out.checked;
    const double excess = (dEdt - bound) / tol;
    out.worst_excess = std::max(out.worst_excess, excess);
    if (excess > 1.0) {
      ++out.violations;
      out.violating_rows.push_back(i);
    }
  }
  return out;
}

StressSpectra stress_spectra(const VelocityField& u, const BackgroundSnapshot* background) {
  const auto& g = u.grid();
  const std::size_t np = g.physical_size(), ns = g.spectral_size();
  const auto u1 = to_physical(u.u1), u2 = to_physical(u.u2);
  const auto pu1 = u1.values(), pu2 = u2.values();

  AlignedVector<double> prod(np);
  auto transform = [&](auto&& f) {
    for (std::size_t p = 0; p < np; ++p) prod[p] = f(p);
    AlignedVector<Complex> hat(ns);
    forward_transform(g, prod, hat);
    return hat;
  };
  const auto a11 = transform([&](std::size_t p) { return pu1[p] * pu1[p]; });
  const auto a12 = transform([&](std::size_t p) { return pu1[p] * pu2[p]; });
  const auto a22 = transform([&](std::size_t p) { return pu2[p] * pu2[p]; });
  AlignedVector<Complex> b11(ns), b12(ns), b21(ns), b22(ns);
  if (background) {
    if (!(background->v1.grid() == g)) throw std::invalid_argument("stress_spectra: background grid mismatch");
    const auto v1 = background->v1.values(), v2 = background->v2.values();
    b11 = transform([&](std::size_t p) { return v1[p] * pu1[p]; });
    b12 = transform([&](std::size_t p) { return v1[p] * pu2[p]; });
    b21 = transform([&](std::size_t p) { return v2[p] * pu1[p]; });
    b22 = transform([&](std::size_t p) { return v2[p] * pu2[p]; });
  }

  StressSpectra out{SpectralField(g), std::vector<double>(ns, 0.0), std::vector<double>(ns, 0.0)};
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      const double kk = k1 * k1 + k2 * k2;
      if (kk == 0.0 || !g.retained(a, b)) continue;
      const std::size_t i = static_cast<std::size_t>(a) * g.half() + b;
      out.uu_norm[i] = std::sqrt(std::norm(a11[i]) + 2.0 * std::norm(a12[i]) + std::norm(a22[i]));
      out.vu_norm[i] = std::sqrt(std::norm(b11[i]) + std::norm(b12[i]) + std::norm(b21[i]) + std::norm(b22[i]));
      const Complex kTk = k1 * k1 * (a11[i] + 2.0 * b11[i]) + k1 * k2 * (2.0 * a12[i] + 2.0 * (b12[i] + b21[i])) +
                          k2 * k2 * (a22[i] + 2.0 * b22[i]);
      out.pressure(a, b) = -kTk / kk;
    }
  }
  return out;
}

PressureReport pressure_bound_check(const VelocityField& u, double t, const RadialVortexParams& vortex,
                                    bool with_background) {
  const auto& g = u.grid();
  BackgroundSnapshot bg;
  const bool active = with_background && vortex.alpha != 0.0;
  if (active) bg = sample_background(vortex, g, t, false);
  const auto s = stress_spectra(u, active ? &bg : nullptr);
  const auto p = s.pressure.coeffs();

  double scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) scale = std::max(scale, 2.0 * s.vu_norm[i] + s.uu_norm[i]);
  PressureReport out;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.half(); ++b) {
      if (!g.retained(a, b) || (a == 0 && b == 0)) continue;
      const std::size_t i = static_cast<std::size_t>(a) * g.half() + b;
      const double bound = 2.0 * s.vu_norm[i] + s.uu_norm[i];
      const double mag = std::abs(p[i]);
      ++out.modes;
      if (bound > 0.0) out.max_ratio = std::max(out.max_ratio, mag / bound);
      if (mag > bound + 1e-10 * scale) ++out.violations;
    }
  return out;
}

DuhamelRecorder::DuhamelRecorder(const SolverConfig& config, std::size_t max_modes) : cfg_(config) {
  cfg_.validate();
  if (max_modes == 0) throw std::invalid_argument("DuhamelRecorder: need at least one mode");
  const auto& g = cfg_.grid;
  std::vector<std::size_t> all;
  std::vector<double> kabs;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.half(); ++b) {
      if (b == 0 && g.mode_row(a) <= 0) continue;  // conjugate duplicates and the mean
      if (!g.retained(a, b)) continue;
      const double k = std::hypot(g.k_row(a), g.k_col(b));
      if (!(k < 1.0)) continue;
      all.push_back(static_cast<std::size_t>(a) * g.half() + b);
      kabs.push_back(k);
    }
  const std::size_t stride = std::max<std::size_t>(1, (all.size() + max_modes - 1) / max_modes);
  for (std::size_t i = 0; i < all.size(); i += stride) {
    index_.push_back(all[i]);
    kabs_.push_back(kabs[i]);
  }
}

void DuhamelRecorder::record(const SolverState& state) {
  const auto& g = cfg_.grid;
  if (!(state.u.grid() == g)) throw std::invalid_argument("DuhamelRecorder: grid mismatch");
  DuhamelSample s;
  s.t = state.t;
  s.amplitude.resize(index_.size());
  s.forcing.assign(index_.size(), 0.0);
  const auto c1 = state.u.u1.coeffs(), c2 = state.u.u2.coeffs();
  for (std::size_t m = 0; m < index_.size(); ++m)
    s.amplitude[m] = std::sqrt(std::norm(c1[index_[m]]) + std::norm(c2[index_[m]]));
  if (cfg_.mode != Mode::heat) {
    BackgroundSnapshot bg;
    if (cfg_.has_background()) bg = sample_background(cfg_.vortex, g, state.t, false);
    const auto st = stress_spectra(state.u, cfg_.has_background() ? &bg : nullptr);
    const auto p = st.pressure.coeffs();
    for (std::size_t m = 0; m < index_.size(); ++m) {
      const std::size_t i = index_[m];
      s.forcing[m] = kabs_[m] * (2.0 * st.vu_norm[i] + st.uu_norm[i] + std::abs(p[i]));
    }
  }
  samples_.push_back(std::move(s));
}

DuhamelReport duhamel_lowmode_check(const std::vector<DuhamelSample>& samples, const std::vector<double>& kabs) {
  if (samples.size() < 3) throw std::invalid_argument("duhamel_lowmode_check: insufficient snapshots");
  if (std::abs(samples.front().t) > 1e-12) throw std::invalid_argument("duhamel_lowmode_check: first snapshot must be at t = 0");
  for (std::size_t n = 1; n < samples.size(); ++n) {
    const double dt = samples[n].t - samples[n - 1].t;
    if (!(dt > 0.0) || dt > 1.0 / kMinDuhamelRate + 1e-12)
      throw std::invalid_argument("duhamel_lowmode_check: insufficient snapshots (< 16 per unit time)");
  }
  const std::size_t modes = kabs.size();
  for (const auto& s : samples)
    if (s.amplitude.size() != modes || s.forcing.size() != modes)
      throw std::invalid_argument("duhamel_lowmode_check: snapshot size mismatch");

  double scale = 0.0;
  for (const auto& s : samples)
    for (double a : s.amplitude) scale = std::max(scale, a);
  DuhamelReport out;
  out.min_margin = std::numeric_limits<double>::infinity();
  if (scale == 0.0) {
    out.min_margin = 0.0;
    return out;
  }
  for (std::size_t m = 0; m < modes; ++m) {
    const double k2 = kabs[m] * kabs[m];
    double ih = 0.0, i2h = 0.0;  // trapezoid rules with the sample spacing and twice it
    for (std::size_t n = 1; n < samples.size(); ++n) {
      const double dt = samples[n].t - samples[n - 1].t;
      const double e = std::exp(-k2 * dt);
      ih = e * ih + 0.5 * dt * (e * samples[n - 1].forcing[m] + samples[n].forcing[m]);
      if (n % 2 != 0) continue;
      const double dt2 = samples[n].t - samples[n - 2].t;
      const double e2 = std::exp(-k2 * dt2);
      i2h = e2 * i2h + 0.5 * dt2 * (e2 * samples[n - 2].forcing[m] + samples[n].forcing[m]);
      const double t = samples[n].t;
      const double rhs = std::exp(-k2 * t) * samples.front().amplitude[m] + ih;
      const double tol = std::abs(ih - i2h) + 1e-12 * scale;
      const double lhs = samples[n].amplitude[m];
      ++out.checked;
      out.min_margin = std::min(out.min_margin, (rhs - lhs + tol) / scale);
      if (rhs < lhs - tol) ++out.violations;
    }
  }
  if (out.checked == 0) out.min_margin = 0.0;
  out.pass = out.violations == 0;
  return out;
}

TrendReport gallay_wayne_check(const std::vector<Snapshot>& snapshots, double q) {
  if (!(q > 2.0)) throw std::invalid_argument("gallay_wayne_check: q must exceed 2");
  if (snapshots.empty()) throw std::invalid_argument("gallay_wayne_check: no snapshots");
  std::vector<const Snapshot*> order;
  for (const auto& s : snapshots) {
    if (!(s.t > 0.0)) throw std::invalid_argument("gallay_wayne_check: snapshot times must be positive");
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->t < b->t; });
  const double e = 0.5 - (std::isinf(q) ? 0.0 : 1.0 / q);
  TrendReport out;
  for (const auto* s : order) {
    out.times.push_back(s->t);
    out.values.push_back(std::pow(s->t, e) * lp_norm(to_physical(s->u.u1), to_physical(s->u.u2), q));
  }
  if (out.times.size() == 1) {
    out.first_average = out.last_average = out.values.front();
    out.pass = out.values.front() == 0.0;
    return out;
  }
  const auto split = split_decades(out.times);
  auto average = [&](std::size_t b, std::size_t e2) {
    return std::accumulate(out.values.begin() + b, out.values.begin() + e2, 0.0) / static_cast<double>(e2 - b);
  };
  out.first_average = average(split.first_begin, split.first_end);
  out.last_average = average(split.last_begin, split.last_end);
  out.pass = out.last_average < out.first_average || out.last_average == 0.0;
  return out;
}

bool DecayReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

std::string DecayReport::to_text() const {
  std::ostringstream os;
  os << "gamma_target=" << fmt17(gamma_target) << "\n"
     << "gamma_fitted=" << fmt17(gamma_fitted) << "\n"
     << "gamma_stderr=" << fmt17(gamma_stderr) << "\n"
     << "fit_t_min=" << fmt17(fit_window.first) << "\n"
     << "fit_t_max=" << fmt17(fit_window.second) << "\n"
     << "compensated_ratio=" << fmt17(compensated_ratio) << "\n"
     << "apriori_constant=" << fmt17(apriori_constant) << "\n"
     << "splitting_violations=" << splitting_violations << "\n"
     << "energy_violations=" << energy_violations << "\n"
     << "pressure_violations=" << pressure_violations << "\n"
     << "duhamel_violations=" << duhamel_violations << "\n"
     << "C0=" << fmt17(C0) << "\n"
     << "gw_first=" << fmt17(gw_first) << "\n"
     << "gw_last=" << fmt17(gw_last) << "\n";
  for (const auto& [k, v] : extras) os << k << "=" << v << "\n";
  for (const auto& [k, v] : verdicts) os << "check." << k << "=" << (v ? "pass" : "fail") << "\n";
  os << "verdict=" << (pass() ? "pass" : "fail") << "\n";
  return os.str();
}

std::string DecayReport::csv_header() {
  return "gamma_target,gamma_fitted,gamma_stderr,fit_t_min,fit_t_max,compensated_ratio,apriori_constant,"
         "splitting_violations,energy_violations,pressure_violations,duhamel_violations,C0,gw_first,gw_last,verdict";
}

std::string DecayReport::to_csv_row() const {
  std::ostringstream os;
  os << fmt17(gamma_target) << ',' << fmt17(gamma_fitted) << ',' << fmt17(gamma_stderr) << ','
     << fmt17(fit_window.first) << ',' << fmt17(fit_window.second) << ',' << fmt17(compensated_ratio) << ','
     << fmt17(apriori_constant) << ',' << splitting_violations << ',' << energy_violations << ','
     << pressure_violations << ',' << duhamel_violations << ',' << fmt17(C0) << ',' << fmt17(gw_first) << ','
     << fmt17(gw_last) << ',' << (pass() ? "pass" : "fail");
  return os.str();
}

}  // namespace nsdecay
