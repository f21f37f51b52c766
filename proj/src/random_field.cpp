#include "rotconv/random_field.hpp"

#include <random>
#include <stdexcept>

namespace rotconv {

namespace {

// Strictly positive half of the lattice: k and -k are never both in it.
bool positive_half(const Wavevector& k) {
  if (k.k1 != 0) return k.k1 > 0;
  if (k.k2 != 0) return k.k2 > 0;
  return k.k3 > 0;
}

}  // namespace

SpectralField random_band_limited(const Grid& grid, int kmin, int kmax, std::uint64_t seed) {
  if (kmin < 0 || kmax < kmin || kmax < 1) {
    throw std::invalid_argument("random_band_limited: need 0 <= kmin <= kmax, kmax >= 1");
  }
  const int nmin = std::min({grid.nx(), grid.ny(), grid.nz()});
  if (2 * kmax >= nmin) {
    throw std::invalid_argument("random_band_limited: band reaches the Nyquist wavenumber");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  SpectralField F(grid);
  const int r2min = kmin * kmin, r2max = kmax * kmax;
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      for (int k3 = -kmax; k3 <= kmax; ++k3) {
        const Wavevector k{k1, k2, k3};
        if (!positive_half(k) || k.horizontal_mean()) continue;
        const int r2 = k1 * k1 + k2 * k2 + k3 * k3;
        if (r2 < r2min || r2 > r2max) continue;
        const double re = unif(rng);
        const double im = unif(rng);
        F.set_coeff(k, Complex(re, im));
        F.set_coeff({-k1, -k2, -k3}, Complex(re, -im));
      }
    }
  }
  return F;
}

}  // namespace rotconv
