#include "rotconv/grid.hpp"

#include <stdexcept>
#include <string>

namespace rotconv {

namespace {

void check_axis(int n, const char* axis) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument(std::string("grid: ") + axis +
                                " must be an even integer >= 4, got " + std::to_string(n));
  }
}

bool on_axis(int k, int n) { return k > -n / 2 && k <= n / 2; }

}  // namespace

Grid::Grid(int nx, int ny, int nz) : nx_(nx), ny_(ny), nz_(nz) {
  check_axis(nx, "nx");
  check_axis(ny, "ny");
  check_axis(nz, "nz");
}

bool Grid::contains(const Wavevector& k) const {
  return on_axis(k.k1, nx_) && on_axis(k.k2, ny_) && on_axis(k.k3, nz_);
}

std::size_t Grid::index_of(const Wavevector& k) const {
  if (!contains(k)) {
    throw std::out_of_range("grid: wavevector (" + std::to_string(k.k1) + "," +
                            std::to_string(k.k2) + "," + std::to_string(k.k3) +
                            ") is not on the lattice");
  }
  return index(lattice_index(k.k1, nx_), lattice_index(k.k2, ny_), lattice_index(k.k3, nz_));
}

}  // namespace rotconv
