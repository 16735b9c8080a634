#pragma once

#include <limits>
#include <span>
#include <utility>

#include "nsdecay/field.hpp"

namespace nsdecay {

// ---- transforms -----------------------------------------------------------

PhysicalField to_physical(const SpectralField& f);
SpectralField from_physical(const PhysicalField& samples);
/// Overload that checks the samples against an expected grid.
SpectralField from_physical(const PhysicalField& samples, const GridSpec& grid);

/// In-place style kernels for hot loops. `out` must hold grid.physical_size()
/// values (inverse) or grid.spectral_size() coefficients (forward). Both
/// spans must be 64-byte aligned (AlignedVector storage).
void inverse_transform(const GridSpec& grid, std::span<const Complex> in, std::span<double> out);
void forward_transform(const GridSpec& grid, std::span<const double> in, std::span<Complex> out);

// ---- operators ------------------------------------------------------------

std::pair<SpectralField, SpectralField> gradient(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);
/// Scalar curl d1 u2 - d2 u1.
SpectralField curl2d(const VelocityField& v);
SpectralField divergence(const VelocityField& v);
/// (I - k k^T / |k|^2) applied mode by mode. The mean mode and the Nyquist
/// modes (whose wavevector sign is ambiguous, so no projector keeps them
/// real) are zeroed.
VelocityField leray_project(const SpectralField& f1, const SpectralField& f2);
VelocityField leray_project(const VelocityField& v);
/// Zeroes modes with max(|m1|, |m2|) above dealias_fraction * n/2.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

// ---- diagnostics ----------------------------------------------------------

/// Full-spectrum sum of |f(k)|^2, equal to the box average of f^2.
double mean_square(const SpectralField& f);
/// Full-spectrum real inner product sum Re(a(k) conj(b(k))).
double inner(const SpectralField& a, const SpectralField& b);
/// Integral over the box of |u|^2.
double energy(const VelocityField& v);
/// Integral over the box of |grad u|^2.
double dissipation(const VelocityField& v);
/// max_k |k1 u1 + k2 u2| relative to max |k||u| (0 for a zero field).
double max_divergence(const VelocityField& v);
/// Largest violation of coeff(-k) = conj(coeff(k)) on the self-conjugate columns.
double hermitian_defect(const SpectralField& f);

/// Box L^p norm by grid quadrature; p = infinity gives the grid maximum.
double lp_norm(const PhysicalField& f, double p);
/// L^p norm of the pointwise Euclidean magnitude of a vector field.
double lp_norm(const PhysicalField& a, const PhysicalField& b, double p);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace nsdecay
