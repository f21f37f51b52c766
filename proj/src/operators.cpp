#include "rotconv/operators.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace rotconv {

Symbol::Symbol(const Grid& grid, const Function& sigma) : grid_(grid), values_(grid.size()) {
  grid_.for_each([&](std::size_t idx, int i, int j, int l) {
    values_[idx] = sigma(grid_.wavevector(i, j, l));
  });
  const int nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz();
  grid_.for_each([&](std::size_t idx, int i, int j, int l) {
    const Complex s = values_[idx];
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      throw std::invalid_argument("Symbol: non-finite value");
    }
    const Complex m =
        values_[grid_.index(Grid::mirror(i, nx), Grid::mirror(j, ny), Grid::mirror(l, nz))];
    if (std::abs(m - std::conj(s)) > 1e-12 * std::max(1.0, std::abs(s))) {
      throw std::invalid_argument("Symbol: sigma(-k) != conj(sigma(k)); output would not be real");
    }
  });
}

SpectralField apply_symbol(const SpectralField& F, const Symbol& sigma) {
  require_same_grid(F.grid(), sigma.grid(), "apply_symbol");
  SpectralField out(F.grid());
  for (std::size_t i = 0; i < F.grid().size(); ++i) out[i] = sigma[i] * F[i];
  return out;
}

SpectralField apply_symbol(const SpectralField& F, const Symbol::Function& sigma) {
  return apply_symbol(F, Symbol(F.grid(), sigma));
}

namespace symbols {

namespace {

// Differentiation symbols vanish on Nyquist modes.
Symbol derivative_symbol(const Grid& grid, const std::function<Complex(const Wavevector&)>& f) {
  return Symbol(grid, [&grid, &f](const Wavevector& k) -> Complex {
    if (k.k1 == grid.nx() / 2 || k.k2 == grid.ny() / 2 || k.k3 == grid.nz() / 2) return 0.0;
    return f(k);
  });
}

}  // namespace

Symbol d_dx(const Grid& grid) {
  return derivative_symbol(grid, [](const Wavevector& k) { return Complex(0.0, k.k1); });
}

Symbol d_dy(const Grid& grid) {
  return derivative_symbol(grid, [](const Wavevector& k) { return Complex(0.0, k.k2); });
}

Symbol d_dz(const Grid& grid) {
  return derivative_symbol(grid, [](const Wavevector& k) { return Complex(0.0, k.k3); });
}

Symbol laplacian_h(const Grid& grid) {
  return derivative_symbol(
      grid, [](const Wavevector& k) { return Complex(-static_cast<double>(k.horizontal_sq())); });
}

Symbol a_power(const Grid& grid, double s) {
  if (s == 0.0) return Symbol(grid, [](const Wavevector&) { return Complex(1.0); });
  return derivative_symbol(grid, [s](const Wavevector& k) -> Complex {
    if (k.horizontal_mean()) return 0.0;
    return std::pow(static_cast<double>(k.horizontal_sq()), s);
  });
}

Symbol helmholtz_z_power(const Grid& grid, double s) {
  if (s == 0.0) return Symbol(grid, [](const Wavevector&) { return Complex(1.0); });
  return derivative_symbol(grid, [s](const Wavevector& k) -> Complex {
    return std::pow(1.0 + static_cast<double>(k.k3) * k.k3, s);
  });
}

}  // namespace symbols

void dealias_in_place(SpectralField& F) {
  const Grid& g = F.grid();
  const int cx = dealias_cutoff(g.nx()), cy = dealias_cutoff(g.ny()), cz = dealias_cutoff(g.nz());
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = g.wavevector(i, j, l);
    if (std::abs(k.k1) > cx || std::abs(k.k2) > cy || std::abs(k.k3) > cz) F[idx] = 0.0;
  });
}

SpectralField dealias(const SpectralField& F) {
  SpectralField out = F;
  dealias_in_place(out);
  return out;
}

void truncate_in_place(SpectralField& F, int m) {
  if (m < 0) throw std::invalid_argument("truncate: mode cap must be nonnegative");
  const Grid& g = F.grid();
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = g.wavevector(i, j, l);
    if (std::abs(k.k1) > m || std::abs(k.k2) > m || std::abs(k.k3) > m) F[idx] = 0.0;
  });
}

void project_zero_horizontal_mean_in_place(SpectralField& F) {
  const Grid& g = F.grid();
  for (int l = 0; l < g.nz(); ++l) F[g.index(0, 0, l)] = 0.0;
}

SpectralField project_zero_horizontal_mean(const SpectralField& F) {
  SpectralField out = F;
  project_zero_horizontal_mean_in_place(out);
  return out;
}

}  // namespace rotconv
