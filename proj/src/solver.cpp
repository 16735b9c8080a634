#include "nsdecay/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "nsdecay/error.hpp"
#include "nsdecay/spectral.hpp"

namespace nsdecay {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::perturbation: return "perturbation";
    case Mode::navier_stokes: return "navier_stokes";
    case Mode::heat: return "heat";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& s) {
  if (s == "perturbation") return Mode::perturbation;
  if (s == "navier_stokes") return Mode::navier_stokes;
  if (s == "heat") return Mode::heat;
  throw std::invalid_argument("unknown run mode '" + s + "'");
}

namespace {
long checked_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument(std::string(what) + " must be a positive integer multiple");
  return n;
}
}  // namespace

void SolverConfig::validate() const {
  grid.validate();
  vortex.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("time.dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("time.t_end must be positive");
  if (!(sample_interval >= dt)) throw std::invalid_argument("time.sample_interval must be >= time.dt");
  if (!(C0 > 0.0)) throw std::invalid_argument("analysis.C0 must be positive");
  (void)steps_per_sample();
  (void)sample_count();
}

long SolverConfig::steps_per_sample() const {
  return checked_ratio(sample_interval, dt, "time.sample_interval / time.dt");
}

long SolverConfig::sample_count() const {
  return checked_ratio(t_end, sample_interval, "time.t_end / time.sample_interval");
}

struct PerturbationSolver::Impl {
  SolverConfig cfg;
  GridSpec g;
  std::size_t np = 0;  // physical size
  std::size_t ns = 0;  // spectral size

  AlignedVector<double> e_half, e_full;  // integrating factors per mode

  AlignedVector<double> pu[2], pw;  // u and curl u on the grid
  AlignedVector<double> adv[2];
  AlignedVector<Complex> spec_tmp;
  AlignedVector<Complex> adv_hat[2];

  VelocityField k1, k2, k3, k4, tmp;

  std::deque<BackgroundSnapshot> cache;

  explicit Impl(const SolverConfig& c) : cfg(c), g(c.grid) {
    cfg.validate();
    np = g.physical_size();
    ns = g.spectral_size();
    e_half.resize(ns);
    e_full.resize(ns);
    for (int a = 0; a < g.n; ++a) {
      const double ka = g.k_row(a);
      for (int b = 0; b < g.half(); ++b) {
        const double kb = g.k_col(b);
        const double kk = ka * ka + kb * kb;
        const std::size_t idx = static_cast<std::size_t>(a) * g.half() + b;
        e_half[idx] = std::exp(-kk * 0.5 * cfg.dt);
        e_full[idx] = std::exp(-kk * cfg.dt);
      }
    }
    for (int i = 0; i < 2; ++i) {
      pu[i].resize(np);
      adv[i].resize(np);
      adv_hat[i].resize(ns);
    }
    pw.resize(np);
    spec_tmp.resize(ns);
    k1 = k2 = k3 = k4 = tmp = VelocityField(g);
  }

  const BackgroundSnapshot& background(double t) {
    for (const auto& s : cache)
      if (s.t == t) return s;
    if (cache.size() >= 3) cache.pop_front();
    cache.push_back(sample_background(cfg.vortex, g, t, false));
    return cache.back();
  }

  // Fills pu and pw from spectral u.
  void to_grid(const VelocityField& u) {
    const auto c1 = u.u1.coeffs(), c2 = u.u2.coeffs();
    inverse_transform(g, c1, pu[0]);
    inverse_transform(g, c2, pu[1]);
    const Complex I(0.0, 1.0);
    for (int a = 0; a < g.n; ++a) {
      const double ka = g.kd_row(a);
      for (int b = 0; b < g.half(); ++b) {
        const std::size_t idx = static_cast<std::size_t>(a) * g.half() + b;
        spec_tmp[idx] = I * (ka * c2[idx] - g.kd_col(b) * c1[idx]);
      }
    }
    inverse_transform(g, spec_tmp, pw);
  }

  // Rotational form: with w = curl u and W = curl v,
  //   u.grad u + u.grad v + v.grad u = (w + W) u_perp + w v_perp + grad(|u|^2/2 + u.v),
  // x_perp = (-x2, x1). The gradient is removed by the projection.
  void nonlinear_into(const VelocityField& u, double t, VelocityField& out) {
    if (cfg.mode == Mode::heat) {
      std::fill(out.u1.coeffs().begin(), out.u1.coeffs().end(), Complex{});
      std::fill(out.u2.coeffs().begin(), out.u2.coeffs().end(), Complex{});
      return;
    }
    to_grid(u);
    const double* u1 = pu[0].data();
    const double* u2 = pu[1].data();
    const double* w = pw.data();
    double* a1 = adv[0].data();
    double* a2 = adv[1].data();
    if (cfg.has_background()) {
      const auto& bg = background(t);
      const double* v1 = bg.v1.values().data();
      const double* v2 = bg.v2.values().data();
      const double* W = bg.omega.values().data();
      for (std::size_t p = 0; p < np; ++p) {
        const double ww = w[p] + W[p];
        a1[p] = -ww * u2[p] - w[p] * v2[p];
        a2[p] = ww * u1[p] + w[p] * v1[p];
      }
    } else {
      for (std::size_t p = 0; p < np; ++p) {
        a1[p] = -w[p] * u2[p];
        a2[p] = w[p] * u1[p];
      }
    }
    forward_transform(g, adv[0], adv_hat[0]);
    forward_transform(g, adv[1], adv_hat[1]);

    auto o1 = out.u1.coeffs();
    auto o2 = out.u2.coeffs();
    for (int a = 0; a < g.n; ++a) {
      const double pa = g.k_row(a);
      for (int b = 0; b < g.half(); ++b) {
        const std::size_t idx = static_cast<std::size_t>(a) * g.half() + b;
        const double pb = g.k_col(b);
        const double kk = pa * pa + pb * pb;
        if (!g.retained(a, b) || kk == 0.0 || g.is_nyquist(a, b)) {
          o1[idx] = o2[idx] = 0.0;
          continue;
        }
        const Complex n1 = -adv_hat[0][idx];
        const Complex n2 = -adv_hat[1][idx];
        const Complex proj = (pa * n1 + pb * n2) / kk;
        o1[idx] = n1 - pa * proj;
        o2[idx] = n2 - pb * proj;
      }
    }
  }
};

PerturbationSolver::PerturbationSolver(const SolverConfig& config) : impl_(std::make_unique<Impl>(config)) {}
PerturbationSolver::~PerturbationSolver() = default;
PerturbationSolver::PerturbationSolver(PerturbationSolver&&) noexcept = default;
PerturbationSolver& PerturbationSolver::operator=(PerturbationSolver&&) noexcept = default;

const SolverConfig& PerturbationSolver::config() const { return impl_->cfg; }

const BackgroundSnapshot& PerturbationSolver::background(double t) { return impl_->background(t); }

VelocityField PerturbationSolver::nonlinear(const VelocityField& u, double t) {
  if (!(u.grid() == impl_->g)) throw std::invalid_argument("nonlinear: grid mismatch");
  VelocityField out(impl_->g);
  impl_->nonlinear_into(u, t, out);
  return out;
}

VelocityField PerturbationSolver::rhs(const VelocityField& u, double t) {
  VelocityField out = nonlinear(u, t);
  out.u1 += laplacian(u.u1);
  out.u2 += laplacian(u.u2);
  return out;
}

SolverState PerturbationSolver::initial_state(const VelocityField& u0) const {
  if (!(u0.grid() == impl_->g)) throw std::invalid_argument("initial data grid does not match the solver grid");
  SolverState s;
  s.u = leray_project(dealias(u0.u1), dealias(u0.u2));
  s.t = 0.0;
  s.dt = impl_->cfg.dt;
  s.mode = impl_->cfg.mode;
  s.vortex = impl_->cfg.vortex;
  s.step = 0;
  return s;
}

void PerturbationSolver::advance(SolverState& state) {
  auto& m = *impl_;
  const double dt = m.cfg.dt;
  // Stage times derive from the step counter so the background cache hits
  // exactly at step boundaries.
  const double t = state.t;
  const double t_half = (static_cast<double>(state.step) + 0.5) * dt;
  const double t_next = static_cast<double>(state.step + 1) * dt;
  auto& u = state.u;
  const std::size_t ns = m.ns;

  if (m.cfg.mode == Mode::heat) {
    auto c1 = u.u1.coeffs(), c2 = u.u2.coeffs();
    for (std::size_t i = 0; i < ns; ++i) {
      c1[i] *= m.e_full[i];
      c2[i] *= m.e_full[i];
    }
  } else {
    SpectralField VelocityField::*comps[2] = {&VelocityField::u1, &VelocityField::u2};
    m.nonlinear_into(u, t, m.k1);
    for (auto c : comps) {
      auto x = (u.*c).coeffs(), k = (m.k1.*c).coeffs(), y = (m.tmp.*c).coeffs();
      for (std::size_t i = 0; i < ns; ++i) y[i] = m.e_half[i] * (x[i] + 0.5 * dt * k[i]);
    }
    m.nonlinear_into(m.tmp, t_half, m.k2);
    for (auto c : comps) {
      auto x = (u.*c).coeffs(), k = (m.k2.*c).coeffs(), y = (m.tmp.*c).coeffs();
      for (std::size_t i = 0; i < ns; ++i) y[i] = m.e_half[i] * x[i] + 0.5 * dt * k[i];
    }
    m.nonlinear_into(m.tmp, t_half, m.k3);
    for (auto c : comps) {
      auto x = (u.*c).coeffs(), k = (m.k3.*c).coeffs(), y = (m.tmp.*c).coeffs();
      for (std::size_t i = 0; i < ns; ++i) y[i] = m.e_full[i] * x[i] + dt * m.e_half[i] * k[i];
    }
    m.nonlinear_into(m.tmp, t_next, m.k4);
    for (auto c : comps) {
      auto x = (u.*c).coeffs();
      auto a = (m.k1.*c).coeffs(), b = (m.k2.*c).coeffs(), d = (m.k3.*c).coeffs(), e = (m.k4.*c).coeffs();
      for (std::size_t i = 0; i < ns; ++i)
        x[i] = m.e_full[i] * x[i] +
               dt / 6.0 * (m.e_full[i] * a[i] + 2.0 * m.e_half[i] * (b[i] + d[i]) + e[i]);
    }
  }
  state.step += 1;
  state.t = t_next;

  const double e = mean_square(u.u1) + mean_square(u.u2);
  if (!std::isfinite(e))
    throw NumericalAbort("non-finite energy at t = " + std::to_string(state.t), -1);
}

SolverState PerturbationSolver::step(const SolverState& state) {
  SolverState next = state;
  advance(next);
  return next;
}

EnergyRow PerturbationSolver::diagnostics(const SolverState& state) {
  auto& m = *impl_;
  const auto& g = m.g;
  const auto& u = state.u;
  EnergyRow row;
  row.t = state.t;
  row.r2 = (1.0 + m.cfg.C0) / (state.t + 1.0);
  const double area = g.length * g.length;
  double low = 0.0, high = 0.0, diss = 0.0;
  for (int a = 0; a < g.n; ++a) {
    const double ka = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double kb = g.k_col(b);
      const double kk = ka * ka + kb * kb;
      const double e = g.column_weight(b) * (std::norm(u.u1(a, b)) + std::norm(u.u2(a, b)));
      if (kk < row.r2) low += e;
      else high += e;
      diss += kk * e;
    }
  }
  row.E_low = area * low;
  row.E_high = area * high;
  row.E = row.E_low + row.E_high;
  row.D = area * diss;
  if (m.cfg.has_background()) {
    // Energy drawn from the background by the discrete nonlinearity; the
    // self-advection and W u_perp parts cancel pointwise.
    const auto& bg = m.background(state.t);
    m.to_grid(u);
    const auto v1 = bg.v1.values(), v2 = bg.v2.values();
    double tv = 0.0, vmax = 0.0;
    for (std::size_t p = 0; p < m.np; ++p) {
      tv += m.pw[p] * (v1[p] * m.pu[1][p] - v2[p] * m.pu[0][p]);
      vmax = std::max(vmax, std::hypot(v1[p], v2[p]));
    }
    row.Tv = tv * g.cell_area();
    row.v_inf = vmax;
  }
  return row;
}

double advection_transfer(const VelocityField& a, const VelocityField& b, const VelocityField& c) {
  const auto& g = a.grid();
  if (!(b.grid() == g) || !(c.grid() == g)) throw std::invalid_argument("advection_transfer: grid mismatch");
  const auto a1 = to_physical(a.u1), a2 = to_physical(a.u2);
  const auto c1 = to_physical(c.u1), c2 = to_physical(c.u2);
  const auto [b11, b12] = gradient(b.u1);
  const auto [b21, b22] = gradient(b.u2);
  const auto g11 = to_physical(b11), g12 = to_physical(b12), g21 = to_physical(b21), g22 = to_physical(b22);
  double sum = 0.0;
  for (std::size_t p = 0; p < g.physical_size(); ++p) {
    const double x1 = a1.values()[p], x2 = a2.values()[p];
    sum += c1.values()[p] * (x1 * g11.values()[p] + x2 * g12.values()[p]) +
           c2.values()[p] * (x1 * g21.values()[p] + x2 * g22.values()[p]);
  }
  return sum * g.cell_area();
}

double PerturbationSolver::max_speed(const SolverState& state) {
  auto& m = *impl_;
  inverse_transform(m.g, state.u.u1.coeffs(), m.pu[0]);
  inverse_transform(m.g, state.u.u2.coeffs(), m.pu[1]);
  double umax = 0.0;
  for (std::size_t p = 0; p < m.np; ++p) umax = std::max(umax, std::hypot(m.pu[0][p], m.pu[1][p]));
  double vmax = 0.0;
  if (m.cfg.has_background()) {
    const auto& bg = m.background(state.t);
    for (std::size_t p = 0; p < m.np; ++p) vmax = std::max(vmax, std::hypot(bg.v1.values()[p], bg.v2.values()[p]));
  }
  return umax + vmax;
}

double PerturbationSolver::stability_bound(const SolverState& state) {
  const double speed = max_speed(state);
  const double h = impl_->g.spacing();
  return 0.5 * (speed > 0.0 ? std::min(h / speed, 1.0) : 1.0);
}

EnergySeries simulate(const VelocityField& u0, const SolverConfig& config, const SimulationHooks& hooks) {
  PerturbationSolver solver(config);
  const auto& cfg = solver.config();
  SolverState state = solver.initial_state(u0);
  EnergySeries series;
  const long per_sample = cfg.steps_per_sample();
  const long samples = cfg.sample_count();
  series.rows.reserve(static_cast<std::size_t>(samples) + 1);

  auto record = [&]() {
    const long row_index = static_cast<long>(series.rows.size());
    const double bound = solver.stability_bound(state);
    if (cfg.dt > bound)
      throw NumericalAbort("time step " + std::to_string(cfg.dt) + " exceeds the stability bound " +
                               std::to_string(bound) + " at t = " + std::to_string(state.t),
                           row_index - 1);
    const EnergyRow row = solver.diagnostics(state);
    if (!std::isfinite(row.E) || !std::isfinite(row.D))
      throw NumericalAbort("non-finite diagnostics at t = " + std::to_string(state.t), row_index - 1);
    series.rows.push_back(row);
    if (hooks.on_sample) hooks.on_sample(state, row);
  };

  if (hooks.on_step) hooks.on_step(state);
  record();
  for (long s = 0; s < samples; ++s) {
    for (long k = 0; k < per_sample; ++k) {
      try {
        solver.advance(state);
      } catch (const NumericalAbort& e) {
        throw NumericalAbort(e.what(), static_cast<long>(series.rows.size()) - 1);
      }
      if (hooks.on_step) hooks.on_step(state);
    }
    record();
  }
  return series;
}

}  // namespace nsdecay
