#pragma once

#include <iosfwd>
#include <vector>

#include "rotconv/field.hpp"
#include "rotconv/velocity.hpp"

namespace rotconv {

/// Left-hand side over right-hand side of the embedding estimates that feed
/// the Gronwall envelopes, evaluated on one field.
struct EmbeddingRatios {
  double w_slice_l3 = 0.0;  ///< sup_z ||w(z)||_L3(xy) / ||theta||_2
  double w_slice_l6 = 0.0;  ///< sup_z ||w(z)||_L6(xy) / ||theta||_3
  double uv_l6 = 0.0;       ///< ||(u,v)||_6 / ||theta||_6
  double w_l6 = 0.0;        ///< ||w||_6 / ||theta||_6
  double dx_uv_inf = 0.0;   ///< ||d_x (u,v)||_inf / ||theta||_6
  double dx_w_inf = 0.0;    ///< (||d_x w||_inf + ||w||_inf) / ||theta||_6
};

struct EnvelopeValues {
  double l3 = 0.0;
  double l6 = 0.0;
  double grad_l3 = 0.0;
};

struct InvariantReport {
  double t = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l6 = 0.0;
  double grad_l3 = 0.0;       ///< || |grad_h theta| ||_3
  double dual = 0.0;          ///< ||A^{-1/2} theta||_2
  double mean_grad_l2 = 0.0;  ///< (int dtheta_bar/dz ^2 dz)^{1/2}
  double diss_h = 0.0;        ///< eps^2 ||grad_h theta||_2^2
  double diss_z = 0.0;        ///< 4 pi^2 int dtheta_bar/dz ^2 dz
  double budget_residual = 0.0;
  EmbeddingRatios ratios;
  EnvelopeValues envelope;
  bool env3_pass = true;
  bool env6_pass = true;
  bool envg3_pass = true;
};

/// Throws std::invalid_argument for a zero field or a horizontal-mean component.
EmbeddingRatios embedding_ratios(const SpectralField& theta);

/// sqrt(8 pi^3 sum_{k_h != 0} |theta(k)|^2 / |k_h|^2).
/// Throws std::invalid_argument on a nonzero horizontal mean.
double dual_norm(const SpectralField& theta);

/// Evaluates a report for one state, reusing tabulated multipliers. Envelope
/// fields and budget_residual are left for the series post-processing; the
/// ratios of a zero field are reported as 0.
class ReportBuilder {
 public:
  explicit ReportBuilder(const Grid& grid);
  InvariantReport operator()(const SpectralField& theta, double t, double epsilon) const;
  EmbeddingRatios ratios(const SpectralField& theta) const;

 private:
  Grid grid_;
  VelocityMultipliers mult_;
};

InvariantReport compute_report(const SpectralField& theta, double t, double epsilon);

/// Envelope constants measured on the first sample.
struct EnvelopeCalibration {
  double l2_0 = 0.0, l3_0 = 0.0, l6_0 = 0.0, grad_l3_0 = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double slack = 10.0;
};

EnvelopeCalibration calibrate_envelopes(const InvariantReport& initial, double slack);
EnvelopeValues envelope_values(const EnvelopeCalibration& cal, double t);

/// Fills envelope values and pass flags of every sample, calibrated on the
/// first one. slack = 0 freezes every envelope at its initial norm.
/// Throws std::invalid_argument on an empty series.
void gronwall_envelopes(std::vector<InvariantReport>& series, double slack);

/// |d/dt (l2^2/2) + diss_h + diss_z| per sample, the derivative taken from a
/// five-point Lagrange stencil on the recorded l2^2 series.
void fill_budget_residuals(std::vector<InvariantReport>& series);

/// Fixed-column CSV, doubles printed with 17 significant digits.
void write_series_csv(std::ostream& out, const std::vector<InvariantReport>& series);

}  // namespace rotconv
