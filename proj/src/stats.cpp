#include "nsdecay/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsdecay {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("fit_line: length mismatch");
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.slope_stderr = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

DecadeSplit split_decades(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("split_decades: empty time list");
  const double t0 = times.front();
  const double t1 = times.back();
  if (!(t0 > 0.0)) throw std::invalid_argument("split_decades: times must be positive");
  double first_limit = 10.0 * t0;
  double last_limit = t1 / 10.0;
  if (t1 < 10.0 * t0) {
    first_limit = last_limit = std::sqrt(t0 * t1);
  }
  DecadeSplit s;
  s.first_begin = 0;
  s.first_end = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), first_limit) - times.begin());
  s.last_begin = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), last_limit) - times.begin());
  s.last_end = times.size();
  if (s.first_end == 0) s.first_end = 1;
  if (s.last_begin >= s.last_end) s.last_begin = s.last_end - 1;
  return s;
}

double decade_growth(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("decade_growth: length mismatch");
  const auto s = split_decades(times);
  const double first = *std::max_element(values.begin() + s.first_begin, values.begin() + s.first_end);
  const double last = *std::max_element(values.begin() + s.last_begin, values.begin() + s.last_end);
  if (first == 0.0) return last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return last / first - 1.0;
}

}  // namespace nsdecay
