#include "rotconv/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotconv {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

PhysicalField::PhysicalField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

PhysicalField::PhysicalField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("PhysicalField: value count does not match grid");
  }
}

bool PhysicalField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SpectralField::SpectralField(Grid grid) : grid_(grid), coeffs_(grid.size(), Complex{}) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("SpectralField: coefficient count does not match grid");
  }
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::symmetry_defect() const {
  double defect = 0.0;
  const int nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz();
  grid_.for_each([&](std::size_t idx, int i, int j, int l) {
    const std::size_t m =
        grid_.index(Grid::mirror(i, nx), Grid::mirror(j, ny), Grid::mirror(l, nz));
    defect = std::max(defect, std::abs(coeffs_[idx] - std::conj(coeffs_[m])));
  });
  return defect;
}

double SpectralField::horizontal_mean_defect() const {
  double defect = 0.0;
  for (int l = 0; l < grid_.nz(); ++l) {
    defect = std::max(defect, std::abs(coeffs_[grid_.index(0, 0, l)]));
  }
  return defect;
}

bool SpectralField::has_zero_horizontal_mean(double rel_tol) const {
  return horizontal_mean_defect() <= rel_tol * max_abs();
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

}  // namespace rotconv
