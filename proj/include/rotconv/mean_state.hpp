#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "rotconv/field.hpp"

namespace rotconv {

/// Horizontal-mean temperature state on the nz collocation levels.
struct MeanProfile {
  std::vector<double> z;
  std::vector<double> flux;       ///< horizontal mean of theta' w
  std::vector<double> dtheta_dz;  ///< flux minus its vertical average
  std::vector<double> theta_bar;  ///< zero-mean antiderivative of dtheta_dz
};

/// Horizontal average of theta * w on each z level.
std::vector<double> heat_flux(const PhysicalField& theta, const PhysicalField& w);

/// flux - (1/2pi) int flux dz.
std::vector<double> mean_gradient(std::span<const double> flux);

/// Spectral antiderivative with zero mean. The Nyquist coefficient is dropped.
/// Throws std::invalid_argument if |int dtheta_dz dz| > 1e-10.
std::vector<double> reconstruct_mean(std::span<const double> dtheta_dz);

MeanProfile mean_profile(const PhysicalField& theta, const PhysicalField& w);

/// Columns z, flux, dtheta_dz, theta_bar.
void write_profile_csv(std::ostream& out, const MeanProfile& profile);

/// 4 pi^2 int dtheta_dz^2 dz, the vertical dissipation in the L^2 budget.
double vertical_dissipation(std::span<const double> dtheta_dz);

}  // namespace rotconv
