#pragma once

#include <cstddef>
#include <numbers>

namespace rotconv {

/// Integer wavevector (k1, k2, k3) on the lattice of the 2pi-periodic box.
struct Wavevector {
  int k1 = 0;
  int k2 = 0;
  int k3 = 0;

  int horizontal_sq() const { return k1 * k1 + k2 * k2; }
  bool horizontal_mean() const { return k1 == 0 && k2 == 0; }
  friend bool operator==(const Wavevector&, const Wavevector&) = default;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// |Omega| = (2 pi)^3
inline constexpr double kDomainVolume = kTwoPi * kTwoPi * kTwoPi;
/// Area of a horizontal slice, 4 pi^2.
inline constexpr double kSliceArea = kTwoPi * kTwoPi;

/// Uniform collocation grid on [0, 2pi]^3. Storage is row-major over
/// (x, y, z) with z fastest; the same layout is used for spectral
/// coefficients, with lattice index i holding wavenumber i (i <= n/2) or
/// i - n (i > n/2).
class Grid {
 public:
  Grid(int nx, int ny, int nz);
  explicit Grid(int n) : Grid(n, n, n) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  std::size_t size() const {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) *
           static_cast<std::size_t>(nz_);
  }

  std::size_t index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(nz_) +
           static_cast<std::size_t>(l);
  }

  static int wavenumber(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }
  static int lattice_index(int k, int n) { return k >= 0 ? k : k + n; }
  static int mirror(int idx, int n) { return idx == 0 ? 0 : n - idx; }

  Wavevector wavevector(int i, int j, int l) const {
    return {wavenumber(i, nx_), wavenumber(j, ny_), wavenumber(l, nz_)};
  }

  /// Storage index of the wavevector k; k must lie on the grid lattice.
  std::size_t index_of(const Wavevector& k) const;
  bool contains(const Wavevector& k) const;

  /// True when any component sits on the Nyquist wavenumber n/2.
  bool is_nyquist(int i, int j, int l) const {
    return i == nx_ / 2 || j == ny_ / 2 || l == nz_ / 2;
  }

  double dx() const { return kTwoPi / nx_; }
  double dy() const { return kTwoPi / ny_; }
  double dz() const { return kTwoPi / nz_; }
  double cell_volume() const { return dx() * dy() * dz(); }

  double x(int i) const { return dx() * i; }
  double y(int j) const { return dy() * j; }
  double z(int l) const { return dz() * l; }

  /// Calls f(storage_index, i, j, l) for every point/mode in storage order.
  template <class F>
  void for_each(F&& f) const {
    std::size_t idx = 0;
    for (int i = 0; i < nx_; ++i) {
      for (int j = 0; j < ny_; ++j) {
        for (int l = 0; l < nz_; ++l, ++idx) {
          f(idx, i, j, l);
        }
      }
    }
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int nx_;
  int ny_;
  int nz_;
};

}  // namespace rotconv
