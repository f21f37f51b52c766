#pragma once

#include <functional>
#include <vector>

#include "rotconv/field.hpp"

namespace rotconv {

/// Per-mode Fourier multiplier sigma(k) tabulated on a grid. Construction
/// verifies sigma(-k) = conj(sigma(k)) on the grid lattice, which is what
/// keeps real fields real. On Nyquist planes the mirror of k is k itself,
/// so sigma must be real there.
class Symbol {
 public:
  using Function = std::function<Complex(const Wavevector&)>;

  Symbol(const Grid& grid, const Function& sigma);

  const Grid& grid() const { return grid_; }
  const Complex& operator[](std::size_t idx) const { return values_[idx]; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// coeff_out(k) = sigma(k) coeff_in(k).
SpectralField apply_symbol(const SpectralField& F, const Symbol& sigma);
SpectralField apply_symbol(const SpectralField& F, const Symbol::Function& sigma);

namespace symbols {

/// Partial derivatives i k_j.
Symbol d_dx(const Grid& grid);
Symbol d_dy(const Grid& grid);
Symbol d_dz(const Grid& grid);
/// Horizontal Laplacian, -(k1^2 + k2^2).
Symbol laplacian_h(const Grid& grid);
/// A^s with A = -Delta_h on the zero-horizontal-mean space: (k1^2+k2^2)^s,
/// zero on the k1 = k2 = 0 sector. s = 0 is the identity.
Symbol a_power(const Grid& grid, double s);
/// (I - d_zz)^s, i.e. (1 + k3^2)^s.
Symbol helmholtz_z_power(const Grid& grid, double s);

}  // namespace symbols

/// 2/3-rule projection: zero every mode with 3|k_j| > n_j on some axis.
SpectralField dealias(const SpectralField& F);
void dealias_in_place(SpectralField& F);
/// Galerkin truncation to |k_j| <= m on every axis.
void truncate_in_place(SpectralField& F, int m);
/// Zero the k1 = k2 = 0 sector.
SpectralField project_zero_horizontal_mean(const SpectralField& F);
void project_zero_horizontal_mean_in_place(SpectralField& F);

/// Integer mode cap kept by the 2/3 rule on an axis of n points.
inline int dealias_cutoff(int n) { return n / 3; }

}  // namespace rotconv
