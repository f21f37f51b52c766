#include "rotconv/mean_state.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "rotconv/transform.hpp"

namespace rotconv {

std::vector<double> heat_flux(const PhysicalField& theta, const PhysicalField& w) {
  require_same_grid(theta.grid(), w.grid(), "heat_flux");
  const Grid& g = theta.grid();
  const int nz = g.nz();
  std::vector<double> flux(nz, 0.0);
  const std::size_t slice = static_cast<std::size_t>(g.nx()) * g.ny();
  for (std::size_t col = 0; col < slice; ++col) {
    const std::size_t base = col * nz;
    for (int l = 0; l < nz; ++l) flux[l] += theta[base + l] * w[base + l];
  }
  for (auto& f : flux) f /= static_cast<double>(slice);
  return flux;
}

std::vector<double> mean_gradient(std::span<const double> flux) {
  if (flux.empty()) throw std::invalid_argument("mean_gradient: empty profile");
  double mean = 0.0;
  for (double f : flux) mean += f;
  mean /= static_cast<double>(flux.size());
  std::vector<double> out(flux.begin(), flux.end());
  for (auto& f : out) f -= mean;
  return out;
}

std::vector<double> reconstruct_mean(std::span<const double> dtheta_dz) {
  const std::size_t n = dtheta_dz.size();
  if (n < 2) throw std::invalid_argument("reconstruct_mean: need at least two levels");
  double integral = 0.0;
  for (double v : dtheta_dz) integral += v;
  integral *= kTwoPi / static_cast<double>(n);
  if (!(std::abs(integral) <= 1e-10)) {
    throw std::invalid_argument("reconstruct_mean: gradient profile does not integrate to zero");
  }
  auto c = forward_transform_1d(dtheta_dz);
  c[0] = 0.0;
  const int half = static_cast<int>(n / 2);
  for (std::size_t l = 1; l < n; ++l) {
    const int k = Grid::wavenumber(static_cast<int>(l), static_cast<int>(n));
    if (n % 2 == 0 && k == half) {
      c[l] = 0.0;
      continue;
    }
    c[l] /= Complex(0.0, k);
  }
  return inverse_transform_1d(c);
}

MeanProfile mean_profile(const PhysicalField& theta, const PhysicalField& w) {
  MeanProfile p;
  const Grid& g = theta.grid();
  p.z.resize(g.nz());
  for (int l = 0; l < g.nz(); ++l) p.z[l] = g.z(l);
  p.flux = heat_flux(theta, w);
  p.dtheta_dz = mean_gradient(p.flux);
  p.theta_bar = reconstruct_mean(p.dtheta_dz);
  return p;
}

void write_profile_csv(std::ostream& out, const MeanProfile& profile) {
  out << "z,flux,dtheta_dz,theta_bar\n" << std::setprecision(17);
  for (std::size_t l = 0; l < profile.z.size(); ++l) {
    out << profile.z[l] << ',' << profile.flux[l] << ',' << profile.dtheta_dz[l] << ','
        << profile.theta_bar[l] << '\n';
  }
}

double vertical_dissipation(std::span<const double> dtheta_dz) {
  if (dtheta_dz.empty()) return 0.0;
  double s = 0.0;
  for (double v : dtheta_dz) s += v * v;
  return kSliceArea * s * kTwoPi / static_cast<double>(dtheta_dz.size());
}

}  // namespace rotconv
