#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rotconv/field.hpp"

namespace rotconv {

/// Forward transform with coeff(0) equal to the domain average.
/// Throws std::invalid_argument on non-finite input.
SpectralField forward_transform(const PhysicalField& f);

/// Inverse transform of a conjugate-symmetric spectrum. Throws
/// std::invalid_argument when the symmetry defect exceeds 1e-12 relative.
PhysicalField inverse_transform(const SpectralField& F);

/// Inverse transform without the symmetry check; returns the real part.
PhysicalField inverse_transform_unchecked(const SpectralField& F);

/// Inverts two real-field spectra with one complex transform (F + iG).
std::pair<PhysicalField, PhysicalField> inverse_transform_pair(const SpectralField& F,
                                                               const SpectralField& G);

/// One-dimensional transforms of z-profiles of length n, same normalization.
std::vector<Complex> forward_transform_1d(std::span<const double> profile);
std::vector<double> inverse_transform_1d(std::span<const Complex> coeffs);

}  // namespace rotconv
