#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "rotconv/grid.hpp"

namespace rotconv {

using Complex = std::complex<double>;

/// Real scalar samples at the collocation points of a grid.
class PhysicalField {
 public:
  explicit PhysicalField(Grid grid);
  PhysicalField(Grid grid, std::vector<double> values);

  /// Samples f(x, y, z) at every collocation point.
  template <class F>
  static PhysicalField sample(const Grid& grid, F&& f) {
    PhysicalField out(grid);
    grid.for_each([&](std::size_t idx, int i, int j, int l) {
      out.values_[idx] = f(grid.x(i), grid.y(j), grid.z(l));
    });
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double& operator[](std::size_t idx) { return values_[idx]; }
  double at(int i, int j, int l) const { return values_[grid_.index(i, j, l)]; }

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Fourier coefficients of a real field: f(x) = sum_k coeff(k) e^{i k.x},
/// so that coeff(0) is the domain average.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  const Complex& operator[](std::size_t idx) const { return coeffs_[idx]; }
  Complex& operator[](std::size_t idx) { return coeffs_[idx]; }

  Complex coeff(const Wavevector& k) const { return coeffs_[grid_.index_of(k)]; }
  void set_coeff(const Wavevector& k, Complex value) { coeffs_[grid_.index_of(k)] = value; }

  /// Largest coefficient magnitude.
  double max_abs() const;
  /// max |coeff(k) - conj(coeff(-k))|.
  double symmetry_defect() const;
  /// max |coeff(0, 0, k3)|.
  double horizontal_mean_defect() const;
  bool has_zero_horizontal_mean(double rel_tol = 1e-12) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Throws std::invalid_argument unless the grids agree.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace rotconv
