#include "rotconv/experiments.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "rotconv/evolution.hpp"
#include "rotconv/multiplier.hpp"
#include "rotconv/norms.hpp"
#include "rotconv/operators.hpp"
#include "rotconv/random_field.hpp"

namespace rotconv {

using nlohmann::ordered_json;

namespace {

// Spectral pieces shared by every pairwise comparison on one grid.
class Comparator {
 public:
  explicit Comparator(const SimConfig& config)
      : eval_(config.grid, 0.0, config.dealias, config.mode_cap),
        lap_u_(config.grid.size()),
        lap_w_(config.grid.size()) {
    const Grid& g = config.grid;
    const auto& m = eval_.multipliers();
    g.for_each([&](std::size_t idx, int i, int j, int l) {
      const double kh2 = g.wavevector(i, j, l).horizontal_sq();
      lap_u_[idx] = kh2 * kh2 * (m.mu(idx) * m.mu(idx) + m.mv(idx) * m.mv(idx));
      lap_w_[idx] = kh2 * kh2 * m.mw(idx) * m.mw(idx);
    });
    const int K = std::max(8, std::max({g.nx(), g.ny(), g.nz()}) / 2);
    velocity_constant_ =
        lattice_sup(catalog_entry("LapU"), K) + lattice_sup(catalog_entry("LapW"), K);
    // sup_z |g(z)| <= sqrt(S / 2pi) ||(1 - d_zz)^{1/3} g||_L2(0,2pi), S = sum (1+k3^2)^{-2/3}
    double S = 0.0;
    for (int l = 0; l < g.nz(); ++l) {
      const double k3 = Grid::wavenumber(l, g.nz());
      S += std::pow(1.0 + k3 * k3, -2.0 / 3.0);
    }
    mean_constant_ =
        std::sqrt(S / kTwoPi) * lattice_sup(catalog_entry("E5"), K) / kSliceArea;
  }

  struct Errors {
    double theta, mean, velocity;
    bool velocity_ok, mean_ok;
  };

  std::vector<double> mean_gradient(const SpectralField& theta) const {
    return eval_.mean_gradient_of(theta);
  }

  Errors compare(const SpectralField& a, const std::vector<double>& mean_a, const SpectralField& b,
                 const std::vector<double>& mean_b) const {
    const SpectralField d = a - b;
    double su = 0.0, sw = 0.0;
    for (std::size_t i = 0; i < lap_u_.size(); ++i) {
      const double n2 = std::norm(d[i]);
      su += lap_u_[i] * n2;
      sw += lap_w_[i] * n2;
    }
    Errors e;
    e.theta = spectral_l2_norm(d);
    e.velocity = std::sqrt(kDomainVolume * su) + std::sqrt(kDomainVolume * sw);
    double sm = 0.0;
    for (std::size_t l = 0; l < mean_a.size(); ++l) {
      const double v = mean_a[l] - mean_b[l];
      sm += v * v;
    }
    e.mean = std::sqrt(sm * kTwoPi / static_cast<double>(mean_a.size()));
    constexpr double kSlack = 1e-10;
    e.velocity_ok = e.velocity <= velocity_constant_ * e.theta + kSlack;
    e.mean_ok = e.mean <= mean_constant_ * (spectral_l2_norm(a) + spectral_l2_norm(b)) * e.theta +
                             kSlack;
    return e;
  }

  double velocity_constant() const { return velocity_constant_; }
  double mean_constant() const { return mean_constant_; }

 private:
  TendencyEvaluator eval_;
  std::vector<double> lap_u_, lap_w_;
  double velocity_constant_ = 0.0;
  double mean_constant_ = 0.0;
};

struct Reference {
  std::vector<SimState> states;
  std::vector<std::vector<double>> means;
};

Reference run_reference(const SimConfig& config, const Comparator& cmp,
                        std::optional<SpectralField> initial = std::nullopt) {
  RunOptions opts;
  opts.compute_reports = false;
  opts.keep_states = true;
  opts.initial = std::move(initial);
  Reference ref;
  ref.states = run(config, opts).states;
  for (const auto& s : ref.states) ref.means.push_back(cmp.mean_gradient(s.theta));
  return ref;
}

// Runs config and folds the sup-in-time comparison against ref into a point.
SweepPoint compare_run(const SimConfig& config, const Reference& ref, const Comparator& cmp,
                       std::optional<SpectralField> initial,
                       std::vector<std::pair<double, double>>* history = nullptr) {
  SweepPoint p;
  std::size_t idx = 0;
  RunOptions opts;
  opts.compute_reports = false;
  opts.initial = std::move(initial);
  opts.on_sample = [&](const SimState& s, const InvariantReport*) {
    if (idx >= ref.states.size()) throw std::logic_error("sweep: sample count mismatch");
    const auto e = cmp.compare(s.theta, cmp.mean_gradient(s.theta), ref.states[idx].theta,
                               ref.means[idx]);
    p.theta_error = std::max(p.theta_error, e.theta);
    p.mean_error = std::max(p.mean_error, e.mean);
    p.velocity_error = std::max(p.velocity_error, e.velocity);
    p.velocity_bound_ok = p.velocity_bound_ok && e.velocity_ok;
    p.mean_bound_ok = p.mean_bound_ok && e.mean_ok;
    if (history) history->emplace_back(s.t, e.theta);
    ++idx;
  };
  run(config, opts);
  if (idx != ref.states.size()) throw std::logic_error("sweep: sample count mismatch");
  return p;
}

// Fixes an "auto" dt from the initial state so every member shares one time grid.
SimConfig with_fixed_dt(SimConfig config, double eps_for_cap) {
  if (!config.dt) {
    SimConfig probe = config;
    probe.epsilon = eps_for_cap;
    config.dt = cfl_dt(initial_state(probe), probe);
  }
  return config;
}

double growth_model(double c1, double t) { return c1 == 0.0 ? t : std::expm1(c1 * t) / c1; }

GronwallFit fit_gronwall(const std::vector<std::pair<double, double>>& samples, double slack) {
  // samples: (t, error^2 / eps^2)
  GronwallFit best;
  best.slack = slack;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    const double c1 = 0.05 * i;
    double sgy = 0.0, sgg = 0.0;
    for (const auto& [t, y] : samples) {
      const double g = growth_model(c1, t);
      sgy += g * y;
      sgg += g * g;
    }
    if (sgg == 0.0) continue;
    const double c2 = sgy / sgg;
    double ssr = 0.0;
    for (const auto& [t, y] : samples) {
      const double r = y - c2 * growth_model(c1, t);
      ssr += r * r;
    }
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best.c1 = c1;
      best.c2 = c2;
    }
  }
  best.pass = true;
  best.worst_ratio = 0.0;
  for (const auto& [t, y] : samples) {
    const double bound = slack * best.c2 * growth_model(best.c1, t);
    if (y == 0.0) continue;
    const double ratio = bound > 0.0 ? y / bound : std::numeric_limits<double>::infinity();
    best.worst_ratio = std::max(best.worst_ratio, ratio);
    if (!(ratio <= 1.0)) best.pass = false;
  }
  return best;
}

// Runs body(i) for i in [0, count) on up to `threads` workers;
// callers write results by index so the output does not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(count, threads);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  SlopeFit fit;
  const std::size_t n = lx.size();
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  const double slope = sxy / sxx;
  fit.slope = slope;
  if (n >= 3) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - my - slope * (lx[i] - mx);
      ssr += r * r;
    }
    const double se = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(n - 2));
    const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_low = slope - q * se;
    fit.ci_high = slope + q * se;
  }
  return fit;
}

SweepResult sweep_epsilon(const SimConfig& base, const std::vector<double>& eps_list,
                          InitialPerturbation mode, unsigned threads) {
  if (eps_list.empty()) throw std::invalid_argument("sweep_epsilon: empty epsilon list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] <= 1.0)) {
      throw std::invalid_argument("sweep_epsilon: epsilon values must lie in (0, 1]");
    }
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("sweep_epsilon: epsilon list must be strictly decreasing");
    }
  }
  SimConfig ref_config = with_fixed_dt(base, eps_list.front());
  ref_config.epsilon = 0.0;
  ref_config.validate();
  const Comparator cmp(ref_config);
  const SimState init = initial_state(ref_config);
  const Reference ref = run_reference(ref_config, cmp);

  SpectralField direction(ref_config.grid);
  if (mode == InitialPerturbation::EpsScaled) {
    const auto mask = evolution_mask(ref_config.grid, ref_config.dealias, ref_config.mode_cap);
    int kmax = 4;
    for (int k = 4; k >= 1; --k) {
      kmax = k;
      const auto d = random_band_limited(ref_config.grid, 1, k, ref_config.seed + 7919);
      bool inside = true;
      for (std::size_t i = 0; i < mask.size() && inside; ++i) {
        inside = mask[i] || d[i] == Complex(0.0);
      }
      if (inside) break;
    }
    direction = random_band_limited(ref_config.grid, 1, kmax, ref_config.seed + 7919);
    direction *= 1.0 / spectral_l2_norm(direction);
  }

  SweepResult result;
  result.kind = "epsilon";
  result.mode = mode == InitialPerturbation::Matched ? "matched" : "scaled";
  result.dt = *ref_config.dt;
  result.velocity_constant = cmp.velocity_constant();
  result.mean_constant = cmp.mean_constant();
  result.config_json = config_to_json(ref_config);
  result.points.resize(eps_list.size());
  std::vector<std::vector<std::pair<double, double>>> histories(eps_list.size());
  parallel_for(eps_list.size(), threads, [&](std::size_t i) {
    const double eps = eps_list[i];
    SimConfig c = ref_config;
    c.epsilon = eps;
    std::optional<SpectralField> initial;
    if (mode == InitialPerturbation::EpsScaled) initial = init.theta + eps * direction;
    result.points[i] = compare_run(c, ref, cmp, initial, &histories[i]);
    result.points[i].parameter = eps;
  });
  std::vector<std::pair<double, double>> gronwall_samples;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double eps2 = eps_list[i] * eps_list[i];
    for (const auto& [t, err] : histories[i]) gronwall_samples.emplace_back(t, err * err / eps2);
  }
  std::vector<double> x, y;
  for (const auto& p : result.points) {
    x.push_back(p.parameter);
    y.push_back(p.theta_error);
  }
  result.fit = fit_loglog(x, y);
  if (mode == InitialPerturbation::Matched) {
    result.gronwall = fit_gronwall(gronwall_samples, base.envelope_slack);
  }
  return result;
}

SweepResult sweep_resolution(const SimConfig& base, const std::vector<int>& mode_counts,
                             unsigned threads) {
  if (mode_counts.empty()) throw std::invalid_argument("sweep_resolution: empty mode list");
  for (std::size_t i = 0; i < mode_counts.size(); ++i) {
    if (mode_counts[i] < 1) throw std::invalid_argument("sweep_resolution: mode caps must be >= 1");
    if (i > 0 && !(mode_counts[i] > mode_counts[i - 1])) {
      throw std::invalid_argument("sweep_resolution: mode list must be strictly increasing");
    }
  }
  SimConfig ref_config = with_fixed_dt(base, base.epsilon);
  ref_config.mode_cap = mode_counts.back();
  ref_config.validate();
  const Comparator cmp(ref_config);
  // every member starts from the reference initial data, truncated to its cap
  const SimState init = initial_state(ref_config);
  const Reference ref = run_reference(ref_config, cmp);

  const Grid& g = ref_config.grid;
  const int dealias_cap = ref_config.dealias
                              ? std::min({dealias_cutoff(g.nx()), dealias_cutoff(g.ny()),
                                          dealias_cutoff(g.nz())})
                              : std::min({g.nx(), g.ny(), g.nz()}) / 2 - 1;
  SweepResult result;
  result.kind = "resolution";
  result.dt = *ref_config.dt;
  result.velocity_constant = cmp.velocity_constant();
  result.mean_constant = cmp.mean_constant();
  result.config_json = config_to_json(ref_config);
  result.points.resize(mode_counts.size());
  parallel_for(mode_counts.size(), threads, [&](std::size_t i) {
    const int m = mode_counts[i];
    SimConfig c = ref_config;
    c.mode_cap = m;
    SpectralField theta0 = init.theta;
    truncate_in_place(theta0, m);
    result.points[i] = compare_run(c, ref, cmp, theta0);
    result.points[i].parameter = m;
    result.points[i].effective_cap = std::min(m, dealias_cap);
  });
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].theta_error > result.points[i - 1].theta_error) result.monotone = false;
  }
  std::vector<double> x, y;
  for (const auto& p : result.points) {
    x.push_back(p.parameter);
    y.push_back(p.theta_error);
  }
  result.fit = fit_loglog(x, y);
  return result;
}

TwinResult twin_run(const SimConfig& base, double amplitude, std::array<int, 3> mode) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("twin_run: amplitude must be finite and >= 0");
  }
  if (mode[0] == 0 && mode[1] == 0) {
    throw std::invalid_argument("twin_run: perturbation needs zero horizontal mean (k1 or k2 != 0)");
  }
  SimConfig config = with_fixed_dt(base, base.epsilon);
  config.validate();
  const Grid& g = config.grid;
  const Wavevector k{mode[0], mode[1], mode[2]};
  const Wavevector mk{-mode[0], -mode[1], -mode[2]};
  if (!g.contains(k) || !g.contains(mk)) throw std::invalid_argument("twin_run: mode not on grid");
  SpectralField delta0(g);
  // cos(k.x) has coefficients 1/2 at +-k and L2 norm sqrt(4 pi^3)
  const double scale = amplitude / std::sqrt(0.5 * kDomainVolume);
  delta0.set_coeff(k, 0.5 * scale);
  delta0.set_coeff(mk, 0.5 * scale);
  const auto mask = evolution_mask(g, config.dealias, config.mode_cap);
  if (amplitude > 0.0 && !mask[g.index_of(k)]) {
    throw std::invalid_argument("twin_run: perturbation mode outside the resolved band");
  }

  const SimState init = initial_state(config);
  RunOptions opts;
  opts.compute_reports = false;
  opts.keep_states = true;
  const auto base_states = run(config, opts).states;
  opts.initial = init.theta + delta0;
  const auto full_states = run(config, opts).states;
  opts.initial = init.theta + 0.5 * delta0;
  const auto half_states = run(config, opts).states;

  TwinResult r;
  r.amplitude = amplitude;
  r.mode = mode;
  r.slack = config.envelope_slack;
  r.dt = *config.dt;
  r.config_json = config_to_json(config);
  for (std::size_t i = 0; i < base_states.size(); ++i) {
    TwinSample s;
    s.t = base_states[i].t;
    const SpectralField d = full_states[i].theta - base_states[i].theta;
    s.delta_l2 = spectral_l2_norm(d);
    s.delta_dual = dual_norm(d);
    s.half_l2 = spectral_l2_norm(half_states[i].theta - base_states[i].theta);
    r.sup_full = std::max(r.sup_full, s.delta_l2);
    r.sup_half = std::max(r.sup_half, s.half_l2);
    r.samples.push_back(s);
  }
  if (r.sup_full > 0.0) {
    r.response_ratio = r.sup_half / r.sup_full;
    r.in_regime = *r.response_ratio >= 0.3 && *r.response_ratio <= 0.7;
    r.linear = std::abs(*r.response_ratio - 0.5) <= 0.05;
  }
  const double d0sq = amplitude * amplitude;
  if (d0sq > 0.0) {
    double sty = 0.0, stt = 0.0;
    for (const auto& s : r.samples) {
      if (s.t <= 0.0 || s.delta_l2 <= 0.0) continue;
      sty += s.t * std::log(s.delta_l2 * s.delta_l2 / d0sq);
      stt += s.t * s.t;
    }
    r.c_fit = stt > 0.0 ? sty / stt : 0.0;
  }
  for (auto& s : r.samples) {
    s.envelope = r.slack * std::exp(r.c_fit * s.t) * d0sq;
    if (!(s.delta_l2 * s.delta_l2 <= s.envelope * (1.0 + 1e-12))) r.envelope_pass = false;
  }
  return r;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "parameter,theta_l2_error,mean_gradient_error,velocity_error,velocity_bound_ok,"
         "mean_bound_ok\n"
      << std::setprecision(17);
  for (const auto& p : r.points) {
    out << p.parameter << ',' << p.theta_error << ',' << p.mean_error << ',' << p.velocity_error
        << ',' << int(p.velocity_bound_ok) << ',' << int(p.mean_bound_ok) << '\n';
  }
}

std::string sweep_json(const SweepResult& r) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["kind"] = r.kind;
  if (!r.mode.empty()) j["mode"] = r.mode;
  j["slope"] = optional_json(r.fit.slope);
  j["ci_low"] = optional_json(r.fit.ci_low);
  j["ci_high"] = optional_json(r.fit.ci_high);
  j["dt"] = r.dt;
  j["velocity_constant"] = r.velocity_constant;
  j["mean_constant"] = r.mean_constant;
  if (r.kind == "resolution") j["monotone"] = r.monotone;
  if (r.gronwall) {
    j["gronwall"] = {{"c1", r.gronwall->c1},
                     {"c2", r.gronwall->c2},
                     {"slack", r.gronwall->slack},
                     {"worst_ratio", r.gronwall->worst_ratio},
                     {"pass", r.gronwall->pass}};
  }
  ordered_json pts = ordered_json::array();
  for (const auto& p : r.points) {
    ordered_json e{{"parameter", p.parameter},
                   {"theta_l2_error", p.theta_error},
                   {"mean_gradient_error", p.mean_error},
                   {"velocity_error", p.velocity_error},
                   {"velocity_bound_ok", p.velocity_bound_ok},
                   {"mean_bound_ok", p.mean_bound_ok}};
    if (r.kind == "resolution") e["effective_cap"] = p.effective_cap;
    pts.push_back(e);
  }
  j["points"] = pts;
  j["config"] = ordered_json::parse(r.config_json);
  return j.dump(2) + "\n";
}

void write_twin_csv(std::ostream& out, const TwinResult& r) {
  out << "t,delta_l2,delta_dual,half_l2,envelope\n" << std::setprecision(17);
  for (const auto& s : r.samples) {
    out << s.t << ',' << s.delta_l2 << ',' << s.delta_dual << ',' << s.half_l2 << ','
        << s.envelope << '\n';
  }
}

std::string twin_json(const TwinResult& r) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["amplitude"] = r.amplitude;
  j["mode"] = r.mode;
  j["sup_full"] = r.sup_full;
  j["sup_half"] = r.sup_half;
  j["response_ratio"] = optional_json(r.response_ratio);
  j["in_regime"] = r.in_regime;
  j["linear"] = r.linear;
  j["c_fit"] = r.c_fit;
  j["slack"] = r.slack;
  j["envelope_pass"] = r.envelope_pass;
  j["dt"] = r.dt;
  j["config"] = ordered_json::parse(r.config_json);
  return j.dump(2) + "\n";
}

}  // namespace rotconv
