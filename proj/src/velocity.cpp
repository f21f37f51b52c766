#include "rotconv/velocity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotconv {

VelocityMultipliers::VelocityMultipliers(const Grid& grid)
    : grid_(grid), mu_(grid.size(), 0.0), mv_(grid.size(), 0.0), mw_(grid.size(), 0.0) {
  grid_.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = grid_.wavevector(i, j, l);
    if (k.horizontal_mean() || grid_.is_nyquist(i, j, l)) return;
    const double kh2 = k.horizontal_sq();
    const double k3 = k.k3;
    const double D = k3 * k3 + kh2 * kh2 * kh2;
    mu_[idx] = -(k.k2 * k3) / D;
    mv_[idx] = (k.k1 * k3) / D;
    mw_[idx] = kh2 * kh2 / D;
  });
}

VelocityDiagnostics solve_velocity(const SpectralField& theta) {
  return solve_velocity(theta, VelocityMultipliers(theta.grid()));
}

VelocityDiagnostics solve_velocity(const SpectralField& theta, const VelocityMultipliers& m) {
  const Grid& g = theta.grid();
  require_same_grid(g, m.grid(), "solve_velocity");
  if (!theta.has_zero_horizontal_mean()) {
    throw std::invalid_argument("solve_velocity: theta must have zero horizontal mean");
  }
  VelocityDiagnostics d{SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g),
                        SpectralField(g)};
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = g.wavevector(i, j, l);
    if (k.horizontal_mean()) return;
    const Complex t = theta[idx];
    d.u[idx] = m.mu(idx) * t;
    d.v[idx] = m.mv(idx) * t;
    d.w[idx] = m.mw(idx) * t;
    const double kh2 = k.horizontal_sq();
    d.omega[idx] = Complex(0.0, k.k3) * d.w[idx] / kh2;
    d.psi[idx] = -d.omega[idx] / kh2;
  });
  return d;
}

DiagnosticResiduals residual_check(const SpectralField& theta, const VelocityDiagnostics& d) {
  const Grid& g = theta.grid();
  require_same_grid(g, d.w.grid(), "residual_check");
  double s1 = 0.0, s2 = 0.0, st = 0.0;
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = g.wavevector(i, j, l);
    st += std::norm(theta[idx]);
    if (k.horizontal_mean() || g.is_nyquist(i, j, l)) return;
    const Complex ik3(0.0, k.k3);
    const double kh2 = k.horizontal_sq();
    s1 += std::norm(ik3 * d.psi[idx] - theta[idx] + kh2 * d.w[idx]);
    s2 += std::norm(-ik3 * d.w[idx] + kh2 * d.omega[idx]);
  });
  const double denom = std::max(std::sqrt(st), std::numeric_limits<double>::min());
  return {std::sqrt(s1) / denom, std::sqrt(s2) / denom};
}

double spectral_divergence(const VelocityDiagnostics& d) {
  const Grid& g = d.u.grid();
  double s = 0.0;
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = g.wavevector(i, j, l);
    s += std::norm(Complex(0.0, k.k1) * d.u[idx] + Complex(0.0, k.k2) * d.v[idx]);
  });
  return std::sqrt(kDomainVolume * s);
}

}  // namespace rotconv
