#pragma once

#include <vector>

#include "rotconv/field.hpp"

namespace rotconv {

/// Velocity, stream function and vertical vorticity slaved to theta'.
struct VelocityDiagnostics {
  SpectralField u;
  SpectralField v;
  SpectralField w;
  SpectralField psi;
  SpectralField omega;
};

/// Real per-mode factors of the diagnostic solve, tabulated once per grid:
/// u = mu theta, v = mv theta, w = mw theta. With D = k3^2 + |k_h|^6,
///   mu = -k2 k3 / D,  mv = k1 k3 / D,  mw = |k_h|^4 / D,
/// and all three vanish on the k1 = k2 = 0 sector and on Nyquist modes.
class VelocityMultipliers {
 public:
  explicit VelocityMultipliers(const Grid& grid);

  const Grid& grid() const { return grid_; }
  double mu(std::size_t idx) const { return mu_[idx]; }
  double mv(std::size_t idx) const { return mv_[idx]; }
  double mw(std::size_t idx) const { return mw_[idx]; }

 private:
  Grid grid_;
  std::vector<double> mu_, mv_, mw_;
};

/// Throws std::invalid_argument if theta has a horizontal-mean component.
VelocityDiagnostics solve_velocity(const SpectralField& theta);
VelocityDiagnostics solve_velocity(const SpectralField& theta, const VelocityMultipliers& m);

struct DiagnosticResiduals {
  double r1 = 0.0;  ///< ||psi_z - theta - Delta_h w|| / ||theta||
  double r2 = 0.0;  ///< ||-w_z - Delta_h omega|| / ||theta||
};

/// Relative spectral L^2 residuals of the two diagnostic equations over the
/// modes the solve acts on (k_h != 0, no Nyquist component).
DiagnosticResiduals residual_check(const SpectralField& theta, const VelocityDiagnostics& d);

/// ||du/dx + dv/dy||_2 computed from the coefficients.
double spectral_divergence(const VelocityDiagnostics& d);

}  // namespace rotconv
