#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

#include "nsdecay/grid.hpp"

namespace nsdecay {

using Complex = std::complex<double>;

/// 64-byte aligned storage so every buffer satisfies FFTW's SIMD alignment.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    std::size_t bytes = count * sizeof(T);
    bytes = (bytes + alignment - 1) / alignment * alignment;
    void* p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Real samples on the grid in wrapped order, value(i, j) = f(coord(i), coord(j)).
class PhysicalField {
 public:
  PhysicalField() = default;
  explicit PhysicalField(const GridSpec& grid) : grid_(grid), values_(grid.physical_size(), 0.0) {}

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }

  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * grid_.n + static_cast<std::size_t>(j);
  }

 private:
  GridSpec grid_;
  AlignedVector<double> values_;
};

/// Fourier coefficients of a real field on the half plane m2 >= 0.
///
/// Normalization: coeff(0) is the box mean, so f(x) = sum_k coeff(k) exp(i k.x).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] std::span<Complex> coeffs() { return coeffs_; }
  [[nodiscard]] std::span<const Complex> coeffs() const { return coeffs_; }

  Complex& operator()(int a, int b) { return coeffs_[index(a, b)]; }
  const Complex& operator()(int a, int b) const { return coeffs_[index(a, b)]; }

  [[nodiscard]] std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * grid_.half() + static_cast<std::size_t>(b);
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  /// Largest coefficient magnitude.
  [[nodiscard]] double max_abs() const;

 private:
  GridSpec grid_;
  AlignedVector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Velocity as two spectral components on a shared grid.
///
/// Divergence-freeness and a zero mean mode are the intended invariants; they
/// are established by leray_project and checked by max_divergence, not by the
/// constructor, so analysis code can also wrap raw sampled data.
struct VelocityField {
  SpectralField u1;
  SpectralField u2;

  VelocityField() = default;
  explicit VelocityField(const GridSpec& grid) : u1(grid), u2(grid) {}
  VelocityField(SpectralField a, SpectralField b);

  [[nodiscard]] const GridSpec& grid() const { return u1.grid(); }

  VelocityField& operator+=(const VelocityField& o) {
    u1 += o.u1;
    u2 += o.u2;
    return *this;
  }
  VelocityField& operator*=(double s) {
    u1 *= s;
    u2 *= s;
    return *this;
  }
};

}  // namespace nsdecay
