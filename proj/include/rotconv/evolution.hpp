#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rotconv/config.hpp"
#include "rotconv/field.hpp"
#include "rotconv/invariants.hpp"
#include "rotconv/velocity.hpp"

namespace rotconv {

struct SimState {
  double t = 0.0;
  SpectralField theta{Grid(4)};  // placeholder until assigned
};

/// Thrown when a step produces a non-finite coefficient. Carries the last
/// finite state and the diagnostics gathered up to it.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, SimState last_valid, std::vector<InvariantReport> reports)
      : std::runtime_error(what), last_valid_(std::move(last_valid)), reports_(std::move(reports)) {}
  const SimState& last_valid() const { return last_valid_; }
  const std::vector<InvariantReport>& reports() const { return reports_; }

 private:
  SimState last_valid_;
  std::vector<InvariantReport> reports_;
};

/// Modes kept by the evolution: 2/3 rule when enabled, optional Galerkin cap,
/// and never the horizontal-mean sector.
std::vector<char> evolution_mask(const Grid& grid, bool dealias, std::optional<int> mode_cap);

/// Right-hand side -u.grad_h theta - w dtheta_bar/dz (+ eps^2 Delta_h theta)
/// with products formed on the collocation grid and the result projected
/// onto the evolution mask.
class TendencyEvaluator {
 public:
  TendencyEvaluator(const Grid& grid, double epsilon, bool dealias = true,
                    std::optional<int> mode_cap = std::nullopt);

  const Grid& grid() const { return grid_; }
  double epsilon() const { return epsilon_; }
  const std::vector<char>& mask() const { return mask_; }
  const VelocityMultipliers& multipliers() const { return mult_; }

  /// Full tendency including horizontal diffusion.
  SpectralField operator()(const SpectralField& theta) const { return evaluate(theta, true); }
  SpectralField evaluate(const SpectralField& theta, bool with_diffusion) const;
  /// dtheta_bar/dz of the state on the collocation levels.
  std::vector<double> mean_gradient_of(const SpectralField& theta) const;

 private:
  Grid grid_;
  double epsilon_;
  VelocityMultipliers mult_;
  std::vector<char> mask_;
  std::vector<double> kh2_;
  std::vector<double> k1_, k2_;  ///< zero on Nyquist planes
};

SpectralField tendency(const SpectralField& theta, double epsilon);

/// Advances theta by dt with the configured integrator. Throws BlowUpError
/// (with the input state) if the result is not finite.
class Stepper {
 public:
  explicit Stepper(const SimConfig& config);
  SimState step(const SimState& state, double dt);
  const TendencyEvaluator& tendency() const { return eval_; }

 private:
  void prepare_factors(double dt);

  Integrator integrator_;
  TendencyEvaluator eval_;
  double factor_dt_ = -1.0;
  std::vector<double> e_full_, e_half_;
};

SimState step(const SimState& state, double dt, const SimConfig& config);

/// safety * min(dx/|u|_inf, dy/|v|_inf, rk4 diffusive limit), capped by
/// config.max_dt; the advective and diffusive limits drop out when zero.
double cfl_dt(const SimState& state, const SimConfig& config);
double cfl_dt(const SimState& state, const SimConfig& config, const TendencyEvaluator& eval);

/// Initial state from the config's InitialSpec, projected onto the evolution mask.
SimState initial_state(const SimConfig& config);

struct RunOptions {
  /// Called at every diagnostic sample (including t = 0 and the final time).
  /// The report pointer is null when compute_reports is false.
  std::function<void(const SimState&, const InvariantReport*)> on_sample;
  bool compute_reports = true;
  bool keep_states = false;
  /// Replaces the config's initial data.
  std::optional<SpectralField> initial;
  /// When set, checkpoint_NNNNNN.rcs and profile_NNNNNN.csv are written at
  /// step 0, every checkpoint_every steps and at the end.
  std::optional<std::filesystem::path> output_dir;
};

struct Trajectory {
  std::vector<InvariantReport> reports;  ///< with envelopes and budget residuals filled
  std::vector<SimState> states;          ///< samples, when keep_states
  std::vector<double> step_times;        ///< t after every step, starting with t = 0
  std::vector<double> step_l2;           ///< ||theta||_2 at step_times
  SimState final_state;
  std::size_t steps = 0;
};

Trajectory run(const SimConfig& config, const RunOptions& options = {});

}  // namespace rotconv
