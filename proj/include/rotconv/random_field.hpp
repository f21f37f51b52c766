#pragma once

#include <cstdint>

#include "rotconv/field.hpp"

namespace rotconv {

/// Seeded real field with coefficients on kmin <= |k| <= kmax (Euclidean),
/// k1 = k2 = 0 excluded. Real and imaginary parts are uniform in [-1, 1].
/// The draw order runs over the cube [-kmax, kmax]^3, so the same seed gives
/// the same trigonometric polynomial on every grid with n/2 > kmax.
SpectralField random_band_limited(const Grid& grid, int kmin, int kmax, std::uint64_t seed);

}  // namespace rotconv
