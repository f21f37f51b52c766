#pragma once

#include <limits>

#include "rotconv/field.hpp"

namespace rotconv {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (int |f|^p)^{1/p} over [0,2pi]^3 by the uniform collocation rule;
/// p = kInfinity returns the grid max of |f|, a lower bound on the true sup.
/// Throws std::invalid_argument for p < 1.
double lp_norm(const PhysicalField& f, double p);

/// L^p norm of the pointwise Euclidean magnitude of a vector field.
double lp_norm(std::span<const PhysicalField* const> components, double p);

/// ||(I - d_zz)^a A^b F||_p. b != 0 requires zero horizontal mean.
double aniso_norm(const SpectralField& F, double a, double b, double p);

/// L^2 norm from coefficients (Parseval): sqrt(8 pi^3 sum |coeff|^2).
double spectral_l2_norm(const SpectralField& F);

}  // namespace rotconv
