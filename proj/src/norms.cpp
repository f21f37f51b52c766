#include "rotconv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rotconv/operators.hpp"
#include "rotconv/transform.hpp"

namespace rotconv {

namespace {

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
}

template <class Magnitude>
double lp_norm_impl(const Grid& grid, double p, Magnitude&& mag) {
  check_p(p);
  const std::size_t n = grid.size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, mag(i));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = mag(i);
      sum += a * a;
    }
    return std::sqrt(sum * grid.cell_volume());
  }
  if (p == 3.0 || p == 6.0) {
    const bool six = p == 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = mag(i);
      const double a3 = a * a * a;
      sum += six ? a3 * a3 : a3;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) sum += std::pow(mag(i), p);
  }
  return std::pow(sum * grid.cell_volume(), 1.0 / p);
}

}  // namespace

double lp_norm(const PhysicalField& f, double p) {
  return lp_norm_impl(f.grid(), p, [&f](std::size_t i) { return std::abs(f[i]); });
}

double lp_norm(std::span<const PhysicalField* const> components, double p) {
  if (components.empty()) throw std::invalid_argument("lp_norm: no components");
  const Grid& grid = components.front()->grid();
  for (const auto* c : components) require_same_grid(grid, c->grid(), "lp_norm");
  return lp_norm_impl(grid, p, [&components](std::size_t i) {
    double s = 0.0;
    for (const auto* c : components) s += (*c)[i] * (*c)[i];
    return std::sqrt(s);
  });
}

double aniso_norm(const SpectralField& F, double a, double b, double p) {
  check_p(p);
  if (b != 0.0 && !F.has_zero_horizontal_mean()) {
    throw std::invalid_argument("aniso_norm: A^b needs a field with zero horizontal mean");
  }
  const Grid& g = F.grid();
  SpectralField G = F;
  if (b != 0.0) G = apply_symbol(G, symbols::a_power(g, b));
  if (a != 0.0) G = apply_symbol(G, symbols::helmholtz_z_power(g, a));
  return lp_norm(inverse_transform(G), p);
}

double spectral_l2_norm(const SpectralField& F) {
  double sum = 0.0;
  for (const auto& c : F.coeffs()) sum += std::norm(c);
  return std::sqrt(kDomainVolume * sum);
}

}  // namespace rotconv
