#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsdecay {

/// Periodic square box [-L/2, L/2)^2 sampled by n x n points.
///
/// Physical samples are stored in FFT ("wrapped") order: index i maps to
/// x = i*h for i < n/2 and x = (i - n)*h otherwise, so the origin is sample 0
/// and spectral coefficients are the coefficients of exp(i k.x) directly.
struct GridSpec {
  int n = 256;
  double length = 256.0;
  double dealias_fraction = 2.0 / 3.0;

  void validate() const {
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("grid.n must be a power of two >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
      throw std::invalid_argument("grid.length must be positive");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
      throw std::invalid_argument("dealias_fraction must lie in (0, 1]");
  }

  [[nodiscard]] double spacing() const { return length / n; }
  [[nodiscard]] double cell_area() const { return spacing() * spacing(); }
  [[nodiscard]] double dk() const { return 2.0 * std::numbers::pi / length; }

  /// Number of stored spectral columns (real-to-complex half plane).
  [[nodiscard]] int half() const { return n / 2 + 1; }
  [[nodiscard]] std::size_t physical_size() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  [[nodiscard]] std::size_t spectral_size() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(half());
  }

  /// Signed integer wavenumber of row index a (Nyquist row maps to -n/2).
  [[nodiscard]] int mode_row(int a) const { return a < n / 2 ? a : a - n; }
  /// Column index b is the non-negative wavenumber itself (b == n/2 is Nyquist).
  [[nodiscard]] int mode_col(int b) const { return b; }

  [[nodiscard]] double k_row(int a) const { return dk() * mode_row(a); }
  [[nodiscard]] double k_col(int b) const { return dk() * mode_col(b); }

  /// Wavenumber used by odd (first-derivative) operators: Nyquist is zeroed so
  /// that the result stays Hermitian.
  [[nodiscard]] double kd_row(int a) const { return a == n / 2 ? 0.0 : k_row(a); }
  [[nodiscard]] double kd_col(int b) const { return b == n / 2 ? 0.0 : k_col(b); }

  [[nodiscard]] bool is_nyquist(int a, int b) const { return a == n / 2 || b == n / 2; }

  /// Physical coordinate of sample index i (either axis).
  [[nodiscard]] double coord(int i) const { return (i < n / 2 ? i : i - n) * spacing(); }

  /// Multiplicity of a stored column in the full spectrum.
  [[nodiscard]] double column_weight(int b) const { return (b == 0 || b == n / 2) ? 1.0 : 2.0; }

  [[nodiscard]] double dealias_cutoff() const { return dealias_fraction * (n / 2); }
  [[nodiscard]] bool retained(int a, int b) const {
    const double cut = dealias_cutoff();
    return std::abs(mode_row(a)) <= cut && std::abs(mode_col(b)) <= cut;
  }

  /// Time before which algebraic whole-plane decay is observable on this box.
  [[nodiscard]] double validity_time() const {
    const double s = length / (2.0 * std::numbers::pi);
    return 0.25 * s * s;
  }

  bool operator==(const GridSpec&) const = default;
};

}  // namespace nsdecay
