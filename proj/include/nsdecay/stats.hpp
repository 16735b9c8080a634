#pragma once

#include <cstddef>
#include <span>

namespace nsdecay {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double max_abs_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Index ranges [begin, end) of the first and last decade of an ascending
/// positive time list. When the list spans less than a decade the split is
/// at the geometric midpoint instead.
struct DecadeSplit {
  std::size_t first_begin = 0, first_end = 0;
  std::size_t last_begin = 0, last_end = 0;
};
DecadeSplit split_decades(std::span<const double> times);

/// max(q over last decade) / max(q over first decade) - 1.
double decade_growth(std::span<const double> times, std::span<const double> values);

}  // namespace nsdecay
