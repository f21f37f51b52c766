#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotconv/config.hpp"

namespace rotconv {

inline constexpr const char* kToolVersion = "rotconv 1.0.0";

enum class InitialPerturbation { Matched, EpsScaled };

struct SweepPoint {
  double parameter = 0.0;       ///< epsilon or mode cap
  int effective_cap = 0;        ///< resolution sweep: min(m, 2/3-rule cap)
  double theta_error = 0.0;     ///< sup_t ||theta_a - theta_b||_2
  double mean_error = 0.0;      ///< sup_t ||dtheta_bar_a/dz - dtheta_bar_b/dz||_L2(0,2pi)
  double velocity_error = 0.0;  ///< sup_t ||Delta_h (U_a - U_b)||_2 + ||Delta_h (W_a - W_b)||_2
  bool velocity_bound_ok = true;
  bool mean_bound_ok = true;
};

struct SlopeFit {
  std::optional<double> slope;
  std::optional<double> ci_low;  ///< 95% Student-t interval, needs three or more points
  std::optional<double> ci_high;
};

/// error(t)^2 <= slack (C2/C1)(exp(C1 t) - 1) eps^2 with C1 by grid search and
/// C2 by least squares over every sample of every member.
struct GronwallFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double slack = 10.0;
  bool pass = true;
  double worst_ratio = 0.0;  ///< max of error^2 / (slack * model)
};

struct SweepResult {
  std::string kind;  ///< "epsilon" or "resolution"
  std::string mode;  ///< "matched" / "scaled" for the epsilon sweep
  std::vector<SweepPoint> points;
  SlopeFit fit;  ///< log theta_error against log parameter
  std::optional<GronwallFit> gronwall;
  bool monotone = true;  ///< resolution sweep: errors nonincreasing in m
  double dt = 0.0;
  double velocity_constant = 0.0;  ///< sup LapU + sup LapW
  double mean_constant = 0.0;      ///< (1/4pi^2) C_emb sup E5
  std::string config_json;
};

/// Least-squares slope of log y against log x with a 95% confidence interval.
/// Nonpositive entries are skipped; fewer than two points leave the fit empty.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Runs the eps = 0 reference, then every eps (strictly decreasing, in (0, 1]).
/// Members run on up to `threads` workers (0: hardware concurrency); output is
/// independent of the worker count.
SweepResult sweep_epsilon(const SimConfig& base, const std::vector<double>& eps_list,
                          InitialPerturbation mode, unsigned threads = 0);

/// Runs the base configuration with Galerkin caps |k_i| <= m (strictly increasing);
/// the largest m is the reference.
SweepResult sweep_resolution(const SimConfig& base, const std::vector<int>& mode_counts,
                             unsigned threads = 0);

struct TwinSample {
  double t = 0.0;
  double delta_l2 = 0.0;    ///< ||theta(base + delta0) - theta(base)||_2
  double delta_dual = 0.0;  ///< dual norm of the same difference
  double half_l2 = 0.0;     ///< difference for the delta0/2 run
  double envelope = 0.0;    ///< slack exp(C_fit t) ||delta0||_2^2
};

struct TwinResult {
  double amplitude = 0.0;
  std::array<int, 3> mode{1, 1, 1};
  std::vector<TwinSample> samples;
  double sup_full = 0.0;
  double sup_half = 0.0;
  std::optional<double> response_ratio;  ///< sup_half / sup_full
  bool in_regime = false;                ///< ratio within [0.3, 0.7]
  bool linear = false;                   ///< ratio within 0.5 +- 0.05
  double c_fit = 0.0;  ///< slope through the origin of log(|delta|^2/|delta0|^2) against t
  double slack = 10.0;
  bool envelope_pass = true;
  double dt = 0.0;
  std::string config_json;
};

/// delta0 = amplitude * cos(k.x) / ||cos(k.x)||_2; k needs k1 or k2 nonzero.
TwinResult twin_run(const SimConfig& base, double amplitude, std::array<int, 3> mode);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
std::string sweep_json(const SweepResult& result);
void write_twin_csv(std::ostream& out, const TwinResult& result);
std::string twin_json(const TwinResult& result);

}  // namespace rotconv
