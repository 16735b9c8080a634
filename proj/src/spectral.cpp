#include "nsdecay/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nsdecay {

namespace {

// FFTW_ESTIMATE keeps the chosen algorithm independent of timing noise, so
// repeated runs are bit-identical.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int n) {
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  GridSpec g;
  g.n = n;
  AlignedVector<double> real(g.physical_size());
  AlignedVector<Complex> spec(g.spectral_size());
  auto p = std::make_unique<PlanPair>();
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  p->forward = fftw_plan_dft_r2c_2d(n, n, real.data(), c, FFTW_ESTIMATE);
  p->inverse = fftw_plan_dft_c2r_2d(n, n, c, real.data(), FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  if (!p->forward || !p->inverse) throw std::runtime_error("FFTW planning failed");
  return *cache.emplace(n, std::move(p)).first->second;
}

AlignedVector<Complex>& scratch(std::size_t size) {
  thread_local AlignedVector<Complex> buf;
  if (buf.size() < size) buf.resize(size);
  return buf;
}

}  // namespace

void inverse_transform(const GridSpec& grid, std::span<const Complex> in, std::span<double> out) {
  if (in.size() != grid.spectral_size() || out.size() != grid.physical_size())
    throw std::invalid_argument("inverse_transform: size mismatch");
  const auto& plans = plans_for(grid.n);
  auto& tmp = scratch(in.size());
  std::copy(in.begin(), in.end(), tmp.begin());
  fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
}

void forward_transform(const GridSpec& grid, std::span<const double> in, std::span<Complex> out) {
  if (in.size() != grid.physical_size() || out.size() != grid.spectral_size())
    throw std::invalid_argument("forward_transform: size mismatch");
  const auto& plans = plans_for(grid.n);
  // r2c out-of-place preserves its input.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(grid.physical_size());
  for (auto& c : out) c *= scale;
}

PhysicalField to_physical(const SpectralField& f) {
  PhysicalField out(f.grid());
  inverse_transform(f.grid(), f.coeffs(), out.values());
  return out;
}

SpectralField from_physical(const PhysicalField& samples) {
  SpectralField out(samples.grid());
  forward_transform(samples.grid(), samples.values(), out.coeffs());
  return out;
}

SpectralField from_physical(const PhysicalField& samples, const GridSpec& grid) {
  if (!(samples.grid() == grid) || samples.values().size() != grid.physical_size())
    throw std::invalid_argument("from_physical: sample grid does not match");
  return from_physical(samples);
}

std::pair<SpectralField, SpectralField> gradient(const SpectralField& f) {
  const auto& g = f.grid();
  SpectralField d1(g), d2(g);
  const Complex I(0.0, 1.0);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.kd_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const Complex c = f(a, b);
      d1(a, b) = I * k1 * c;
      d2(a, b) = I * g.kd_col(b) * c;
    }
  }
  return {std::move(d1), std::move(d2)};
}

SpectralField laplacian(const SpectralField& f) {
  const auto& g = f.grid();
  SpectralField out(g);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      out(a, b) = -(k1 * k1 + k2 * k2) * f(a, b);
    }
  }
  return out;
}

SpectralField curl2d(const VelocityField& v) {
  const auto& g = v.grid();
  SpectralField w(g);
  const Complex I(0.0, 1.0);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.kd_row(a);
    for (int b = 0; b < g.half(); ++b) {
      w(a, b) = I * (k1 * v.u2(a, b) - g.kd_col(b) * v.u1(a, b));
    }
  }
  return w;
}

SpectralField divergence(const VelocityField& v) {
  const auto& g = v.grid();
  SpectralField d(g);
  const Complex I(0.0, 1.0);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.kd_row(a);
    for (int b = 0; b < g.half(); ++b) {
      d(a, b) = I * (k1 * v.u1(a, b) + g.kd_col(b) * v.u2(a, b));
    }
  }
  return d;
}

VelocityField leray_project(const SpectralField& f1, const SpectralField& f2) {
  if (!(f1.grid() == f2.grid())) throw std::invalid_argument("leray_project: grids differ");
  const auto& g = f1.grid();
  VelocityField out(g);
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      const double kk = k1 * k1 + k2 * k2;
      if (kk == 0.0 || g.is_nyquist(a, b)) continue;
      const Complex proj = (k1 * f1(a, b) + k2 * f2(a, b)) / kk;
      out.u1(a, b) = f1(a, b) - k1 * proj;
      out.u2(a, b) = f2(a, b) - k2 * proj;
    }
  }
  return out;
}

VelocityField leray_project(const VelocityField& v) { return leray_project(v.u1, v.u2); }

void dealias_in_place(SpectralField& f) {
  const auto& g = f.grid();
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.half(); ++b)
      if (!g.retained(a, b)) f(a, b) = 0.0;
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

double mean_square(const SpectralField& f) {
  const auto& g = f.grid();
  double s = 0.0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.half(); ++b) s += g.column_weight(b) * std::norm(f(a, b));
  return s;
}

double inner(const SpectralField& x, const SpectralField& y) {
  const auto& g = x.grid();
  double s = 0.0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.half(); ++b)
      s += g.column_weight(b) * std::real(x(a, b) * std::conj(y(a, b)));
  return s;
}

double energy(const VelocityField& v) {
  const double area = v.grid().length * v.grid().length;
  return area * (mean_square(v.u1) + mean_square(v.u2));
}

double dissipation(const VelocityField& v) {
  const auto& g = v.grid();
  double s = 0.0;
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      s += g.column_weight(b) * (k1 * k1 + k2 * k2) * (std::norm(v.u1(a, b)) + std::norm(v.u2(a, b)));
    }
  }
  return g.length * g.length * s;
}

double max_divergence(const VelocityField& v) {
  const auto& g = v.grid();
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < g.n; ++a) {
    const double k1 = g.k_row(a);
    for (int b = 0; b < g.half(); ++b) {
      const double k2 = g.k_col(b);
      worst = std::max(worst, std::abs(k1 * v.u1(a, b) + k2 * v.u2(a, b)));
      scale = std::max(scale, std::hypot(k1, k2) * std::hypot(std::abs(v.u1(a, b)), std::abs(v.u2(a, b))));
    }
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

double hermitian_defect(const SpectralField& f) {
  const auto& g = f.grid();
  double worst = 0.0;
  for (int b : {0, g.n / 2}) {
    for (int a = 0; a < g.n; ++a) {
      const int mirror = (g.n - a) % g.n;
      worst = std::max(worst, std::abs(f(a, b) - std::conj(f(mirror, b))));
    }
  }
  return worst;
}

double lp_norm(const PhysicalField& f, double p) {
  const auto vals = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : vals) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double x : vals) s += std::pow(std::abs(x), p);
  return std::pow(s * f.grid().cell_area(), 1.0 / p);
}

double lp_norm(const PhysicalField& a, const PhysicalField& b, double p) {
  const auto va = a.values();
  const auto vb = b.values();
  if (va.size() != vb.size()) throw std::invalid_argument("lp_norm: component sizes differ");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::hypot(va[i], vb[i]));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) s += std::pow(std::hypot(va[i], vb[i]), p);
  return std::pow(s * a.grid().cell_area(), 1.0 / p);
}

}  // namespace nsdecay
