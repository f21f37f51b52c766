#include "rotconv/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rotconv/mean_state.hpp"
#include "rotconv/norms.hpp"
#include "rotconv/operators.hpp"
#include "rotconv/random_field.hpp"
#include "rotconv/snapshot.hpp"
#include "rotconv/transform.hpp"

namespace rotconv {

std::vector<char> evolution_mask(const Grid& grid, bool dealias, std::optional<int> mode_cap) {
  std::vector<char> mask(grid.size(), 0);
  const int cx = dealias ? dealias_cutoff(grid.nx()) : grid.nx() / 2 - 1;
  const int cy = dealias ? dealias_cutoff(grid.ny()) : grid.ny() / 2 - 1;
  const int cz = dealias ? dealias_cutoff(grid.nz()) : grid.nz() / 2 - 1;
  grid.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = grid.wavevector(i, j, l);
    if (k.horizontal_mean()) return;
    if (std::abs(k.k1) > cx || std::abs(k.k2) > cy || std::abs(k.k3) > cz) return;
    if (mode_cap && (std::abs(k.k1) > *mode_cap || std::abs(k.k2) > *mode_cap ||
                     std::abs(k.k3) > *mode_cap)) {
      return;
    }
    mask[idx] = 1;
  });
  return mask;
}

TendencyEvaluator::TendencyEvaluator(const Grid& grid, double epsilon, bool dealias,
                                     std::optional<int> mode_cap)
    : grid_(grid),
      epsilon_(epsilon),
      mult_(grid),
      mask_(evolution_mask(grid, dealias, mode_cap)),
      kh2_(grid.size(), 0.0),
      k1_(grid.size(), 0.0),
      k2_(grid.size(), 0.0) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("tendency: epsilon must be >= 0");
  grid_.for_each([&](std::size_t idx, int i, int j, int l) {
    const Wavevector k = grid_.wavevector(i, j, l);
    kh2_[idx] = k.horizontal_sq();
    if (grid_.is_nyquist(i, j, l)) return;
    k1_[idx] = k.k1;
    k2_[idx] = k.k2;
  });
}

namespace {

struct NonFinite {};

}  // namespace

std::vector<double> TendencyEvaluator::mean_gradient_of(const SpectralField& theta) const {
  SpectralField W(grid_);
  for (std::size_t i = 0; i < grid_.size(); ++i) W[i] = mult_.mw(i) * theta[i];
  auto [th, w] = inverse_transform_pair(theta, W);
  return mean_gradient(heat_flux(th, w));
}

SpectralField TendencyEvaluator::evaluate(const SpectralField& theta, bool with_diffusion) const {
  require_same_grid(grid_, theta.grid(), "tendency");
  const std::size_t n = grid_.size();
  SpectralField U(grid_), V(grid_), W(grid_), TX(grid_), TY(grid_);
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex t = theta[i];
    U[i] = mult_.mu(i) * t;
    V[i] = mult_.mv(i) * t;
    W[i] = mult_.mw(i) * t;
    TX[i] = I * (k1_[i] * t);
    TY[i] = I * (k2_[i] * t);
  }
  auto [th, w] = inverse_transform_pair(theta, W);
  auto [u, v] = inverse_transform_pair(U, V);
  auto [tx, ty] = inverse_transform_pair(TX, TY);
  const auto dtheta_dz = mean_gradient(heat_flux(th, w));

  PhysicalField N(grid_);
  const int nz = grid_.nz();
  const std::size_t columns = n / static_cast<std::size_t>(nz);
  for (std::size_t col = 0; col < columns; ++col) {
    for (int l = 0; l < nz; ++l) {
      const std::size_t i = col * nz + l;
      N[i] = -(u[i] * tx[i] + v[i] * ty[i]) - w[i] * dtheta_dz[l];
    }
  }
  if (!N.all_finite()) throw NonFinite{};
  SpectralField out = forward_transform(N);
  const double e2 = epsilon_ * epsilon_;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask_[i]) {
      out[i] = 0.0;
    } else if (with_diffusion && e2 != 0.0) {
      out[i] -= e2 * kh2_[i] * theta[i];
    }
  }
  return out;
}

SpectralField tendency(const SpectralField& theta, double epsilon) {
  if (!theta.has_zero_horizontal_mean()) {
    throw std::invalid_argument("tendency: theta must have zero horizontal mean");
  }
  try {
    return TendencyEvaluator(theta.grid(), epsilon)(theta);
  } catch (const NonFinite&) {
    throw std::invalid_argument("tendency: non-finite products");
  }
}

Stepper::Stepper(const SimConfig& config)
    : integrator_(config.integrator),
      eval_(config.grid, config.epsilon, config.dealias, config.mode_cap) {}

void Stepper::prepare_factors(double dt) {
  if (dt == factor_dt_) return;
  const Grid& g = eval_.grid();
  e_full_.assign(g.size(), 1.0);
  e_half_.assign(g.size(), 1.0);
  const double e2 = eval_.epsilon() * eval_.epsilon();
  g.for_each([&](std::size_t idx, int i, int j, int l) {
    const double rate = e2 * g.wavevector(i, j, l).horizontal_sq();
    e_full_[idx] = std::exp(-rate * dt);
    e_half_[idx] = std::exp(-rate * 0.5 * dt);
  });
  factor_dt_ = dt;
}

SimState Stepper::step(const SimState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const Grid& g = eval_.grid();
  require_same_grid(g, state.theta.grid(), "step");
  const std::size_t n = g.size();
  const SpectralField& th = state.theta;
  SpectralField out(g);
  try {
    if (integrator_ == Integrator::Rk4) {
      const SpectralField k1 = eval_.evaluate(th, true);
      SpectralField a(g);
      for (std::size_t i = 0; i < n; ++i) a[i] = th[i] + 0.5 * dt * k1[i];
      const SpectralField k2 = eval_.evaluate(a, true);
      for (std::size_t i = 0; i < n; ++i) a[i] = th[i] + 0.5 * dt * k2[i];
      const SpectralField k3 = eval_.evaluate(a, true);
      for (std::size_t i = 0; i < n; ++i) a[i] = th[i] + dt * k3[i];
      const SpectralField k4 = eval_.evaluate(a, true);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = th[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
      }
    } else {
      prepare_factors(dt);
      const auto& E = e_full_;
      const auto& H = e_half_;
      const SpectralField k1 = eval_.evaluate(th, false);
      SpectralField a(g);
      for (std::size_t i = 0; i < n; ++i) a[i] = H[i] * (th[i] + 0.5 * dt * k1[i]);
      const SpectralField k2 = eval_.evaluate(a, false);
      for (std::size_t i = 0; i < n; ++i) a[i] = H[i] * th[i] + 0.5 * dt * k2[i];
      const SpectralField k3 = eval_.evaluate(a, false);
      for (std::size_t i = 0; i < n; ++i) a[i] = E[i] * th[i] + dt * H[i] * k3[i];
      const SpectralField k4 = eval_.evaluate(a, false);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = E[i] * th[i] +
                 dt / 6.0 * (E[i] * k1[i] + 2.0 * H[i] * (k2[i] + k3[i]) + k4[i]);
      }
    }
  } catch (const NonFinite&) {
    throw BlowUpError("step: non-finite tendency at t = " + std::to_string(state.t), state, {});
  }
  for (const auto& c : out.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw BlowUpError("step: non-finite state after t = " + std::to_string(state.t), state, {});
    }
  }
  return {state.t + dt, std::move(out)};
}

SimState step(const SimState& state, double dt, const SimConfig& config) {
  return Stepper(config).step(state, dt);
}

double cfl_dt(const SimState& state, const SimConfig& config) {
  return cfl_dt(state, config,
                TendencyEvaluator(config.grid, config.epsilon, config.dealias, config.mode_cap));
}

double cfl_dt(const SimState& state, const SimConfig& config, const TendencyEvaluator& eval) {
  if (!(config.cfl_safety > 0.0 && config.cfl_safety <= 1.0)) {
    throw std::invalid_argument("cfl_dt: safety must lie in (0, 1]");
  }
  const Grid& g = config.grid;
  require_same_grid(g, state.theta.grid(), "cfl_dt");
  const auto& m = eval.multipliers();
  SpectralField U(g), V(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    U[i] = m.mu(i) * state.theta[i];
    V[i] = m.mv(i) * state.theta[i];
  }
  auto [u, v] = inverse_transform_pair(U, V);
  double limit = kInfinity;
  const double umax = lp_norm(u, kInfinity), vmax = lp_norm(v, kInfinity);
  if (umax > 0.0) limit = std::min(limit, g.dx() / umax);
  if (vmax > 0.0) limit = std::min(limit, g.dy() / vmax);
  if (config.integrator == Integrator::Rk4 && config.epsilon > 0.0) {
    double kh2max = 0.0;
    g.for_each([&](std::size_t idx, int i, int j, int l) {
      if (eval.mask()[idx]) kh2max = std::max<double>(kh2max, g.wavevector(i, j, l).horizontal_sq());
    });
    // RK4 stability interval on the negative real axis is about [-2.785, 0].
    if (kh2max > 0.0) limit = std::min(limit, 2.78 / (config.epsilon * config.epsilon * kh2max));
  }
  if (std::isinf(limit)) return config.max_dt;
  return std::min(config.cfl_safety * limit, config.max_dt);
}

namespace {

// 1D coefficients of sin(k x) or cos(k x) as (wavenumber, coefficient) pairs.
std::vector<std::pair<int, Complex>> factor_coeffs(const std::string& shape, int k) {
  if (k == 0) {
    if (shape == "sin") return {};
    return {{0, 1.0}};
  }
  if (shape == "sin") return {{k, Complex(0.0, -0.5)}, {-k, Complex(0.0, 0.5)}};
  return {{k, 0.5}, {-k, 0.5}};
}

void require_in_mask(const SpectralField& F, const std::vector<char>& mask, const char* what) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i] && F[i] != Complex(0.0)) {
      throw std::invalid_argument(std::string(what) +
                                  ": initial data outside the resolved band or in the "
                                  "horizontal-mean sector");
    }
  }
}

}  // namespace

SimState initial_state(const SimConfig& config) {
  config.validate();
  const Grid& g = config.grid;
  const InitialSpec& s = config.initial;
  const auto mask = evolution_mask(g, config.dealias, config.mode_cap);
  SpectralField F(g);
  if (s.kind == InitialSpec::Kind::SingleMode) {
    if (s.mode[0] == 0 && s.mode[1] == 0) {
      throw std::invalid_argument("initial: single mode needs k1 or k2 nonzero");
    }
    const auto fx = factor_coeffs(s.shape[0], s.mode[0]);
    const auto fy = factor_coeffs(s.shape[1], s.mode[1]);
    const auto fz = factor_coeffs(s.shape[2], s.mode[2]);
    for (const auto& [k1, c1] : fx) {
      for (const auto& [k2, c2] : fy) {
        for (const auto& [k3, c3] : fz) {
          const Wavevector k{k1, k2, k3};
          if (!g.contains(k) || g.contains({-k1, -k2, -k3}) == false) {
            throw std::invalid_argument("initial: mode not representable on the grid");
          }
          F.set_coeff(k, F.coeff(k) + s.amplitude * c1 * c2 * c3);
        }
      }
    }
    if (F.max_abs() == 0.0 && s.amplitude != 0.0) {
      throw std::invalid_argument("initial: sin factor on a zero wavenumber gives a zero field");
    }
    require_in_mask(F, mask, "initial");
  } else {
    F = random_band_limited(g, s.kmin, s.kmax, s.seed.value_or(config.seed));
    require_in_mask(F, mask, "initial");
    const PhysicalField f = inverse_transform(F);
    const double norm = s.norm == "l2" ? lp_norm(f, 2.0)
                        : s.norm == "l6" ? lp_norm(f, 6.0)
                                         : lp_norm(f, kInfinity);
    if (norm == 0.0) throw std::invalid_argument("initial: empty band");
    F *= s.amplitude / norm;
  }
  return {0.0, std::move(F)};
}

namespace {

std::string numbered(const char* stem, std::size_t step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu%s", stem, step, ext);
  return buf;
}

void write_checkpoint(const std::filesystem::path& dir, std::size_t step, const SimState& state,
                      const TendencyEvaluator& eval) {
  const Grid& g = state.theta.grid();
  SpectralField W(g);
  for (std::size_t i = 0; i < g.size(); ++i) W[i] = eval.multipliers().mw(i) * state.theta[i];
  auto [th, w] = inverse_transform_pair(state.theta, W);
  write_snapshot(dir / numbered("checkpoint", step, ".rcs"), "theta", th);
  std::ofstream out(dir / numbered("profile", step, ".csv"));
  if (!out) throw std::runtime_error("run: cannot write profile in " + dir.string());
  write_profile_csv(out, mean_profile(th, w));
}

std::size_t fixed_step_count(double t_end, double dt) {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace

Trajectory run(const SimConfig& config, const RunOptions& options) {
  config.validate();
  Stepper stepper(config);
  const TendencyEvaluator& eval = stepper.tendency();
  const ReportBuilder builder(config.grid);

  if (options.initial) {
    require_same_grid(config.grid, options.initial->grid(), "run");
    require_in_mask(*options.initial, eval.mask(), "run");
  }
  SimState state = options.initial ? SimState{0.0, *options.initial} : initial_state(config);

  if (options.output_dir) std::filesystem::create_directories(*options.output_dir);

  Trajectory traj;
  auto sample = [&](const SimState& s) {
    std::optional<InvariantReport> report;
    if (options.compute_reports) {
      report = builder(s.theta, s.t, config.epsilon);
      traj.reports.push_back(*report);
    }
    if (options.on_sample) options.on_sample(s, report ? &*report : nullptr);
    if (options.keep_states) traj.states.push_back(s);
  };
  auto finish_reports = [&] {
    if (traj.reports.empty()) return;
    gronwall_envelopes(traj.reports, config.envelope_slack);
    fill_budget_residuals(traj.reports);
  };

  sample(state);
  traj.step_times.push_back(state.t);
  traj.step_l2.push_back(spectral_l2_norm(state.theta));
  if (options.output_dir) write_checkpoint(*options.output_dir, 0, state, eval);

  const std::size_t fixed_steps = config.dt ? fixed_step_count(config.t_end, *config.dt) : 0;
  std::size_t n = 0;
  while (config.dt ? n < fixed_steps : state.t < config.t_end) {
    double t_next;
    if (config.dt) {
      t_next = n + 1 == fixed_steps ? config.t_end : static_cast<double>(n + 1) * *config.dt;
    } else {
      t_next = std::min(config.t_end, state.t + cfl_dt(state, config, eval));
    }
    SimState next = [&] {
      try {
        return stepper.step(state, t_next - state.t);
      } catch (const BlowUpError& e) {
        finish_reports();
        throw BlowUpError(e.what(), state, traj.reports);
      }
    }();
    next.t = t_next;
    state = std::move(next);
    ++n;
    traj.step_times.push_back(state.t);
    traj.step_l2.push_back(spectral_l2_norm(state.theta));
    const bool last = config.dt ? n == fixed_steps : state.t >= config.t_end;
    if (n % static_cast<std::size_t>(config.diagnostics_every) == 0 || last) sample(state);
    if (options.output_dir &&
        (last || (config.checkpoint_every > 0 &&
                  n % static_cast<std::size_t>(config.checkpoint_every) == 0))) {
      write_checkpoint(*options.output_dir, n, state, eval);
    }
  }
  finish_reports();
  traj.steps = n;
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace rotconv
