#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rotconv/evolution.hpp"
#include "rotconv/norms.hpp"
#include "rotconv/snapshot.hpp"
#include "rotconv/transform.hpp"
#include "test_support.hpp"

using namespace rotconv;
using rotconv::testing::max_abs;
using rotconv::testing::max_abs_diff;

namespace {

SimConfig single_mode(int n, std::array<int, 3> mode, std::array<std::string, 3> shape, double amp) {
  SimConfig c;
  c.grid = Grid(n);
  c.initial.kind = InitialSpec::Kind::SingleMode;
  c.initial.mode = mode;
  c.initial.shape = shape;
  c.initial.amplitude = amp;
  return c;
}

SimConfig random_config(int n, double amp, std::uint64_t seed) {
  SimConfig c;
  c.grid = Grid(n);
  c.initial.kind = InitialSpec::Kind::RandomBand;
  c.initial.kmin = 1;
  c.initial.kmax = 4;
  c.initial.amplitude = amp;
  c.seed = seed;
  return c;
}

double l2_diff(const SpectralField& a, const SpectralField& b) { return spectral_l2_norm(a - b); }

}  // namespace

TEST_CASE("config JSON round trip and validation") {
  const char* text = R"({"grid": {"nx": 16, "ny": 16, "nz": 32}, "epsilon": 0.1, "dt": "auto",
    "t_end": 0.5, "integrator": "rk4", "initial": {"kind": "random-band-limited", "kmin": 1,
    "kmax": 3, "amplitude": 0.1, "norm": "l6", "seed": 4}, "diagnostics_every": 5, "seed": 9})";
  auto c = parse_config(text);
  CHECK(c.grid == Grid(16, 16, 32));
  CHECK_FALSE(c.dt.has_value());
  CHECK(c.integrator == Integrator::Rk4);
  CHECK(c.initial.seed == std::optional<std::uint64_t>(4));
  auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));

  CHECK_THROWS_AS(parse_config(R"({"epsilon": -1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"nx": 5, "ny": 8, "nz": 8}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"integrator": "euler"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"epsilonn": 0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"dt": "fast"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK(parse_config("{}").integrator == Integrator::IfRk4);
}

TEST_CASE("initial data") {
  auto c = single_mode(16, {1, 0, 1}, {"sin", "cos", "cos"}, 2.0);
  auto s = initial_state(c);
  auto exact = PhysicalField::sample(
      c.grid, [](double x, double, double z) { return 2.0 * std::sin(x) * std::cos(z); });
  CHECK(max_abs_diff(inverse_transform(s.theta), exact) <= 1e-14);

  CHECK_THROWS_AS(initial_state(single_mode(16, {0, 0, 1}, {"cos", "cos", "cos"}, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(initial_state(single_mode(16, {0, 1, 0}, {"cos", "sin", "sin"}, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(initial_state(single_mode(16, {7, 0, 0}, {"sin", "cos", "cos"}, 1)),
                  std::invalid_argument);

  auto r = random_config(16, 0.3, 5);
  r.initial.norm = "l6";
  auto rs = initial_state(r);
  CHECK(lp_norm(inverse_transform(rs.theta), 6.0) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(rs.theta.horizontal_mean_defect() == 0.0);
  r.initial.norm = "max";
  CHECK(lp_norm(inverse_transform(initial_state(r).theta), kInfinity) ==
        doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("tendency of sin x is pure diffusion") {
  auto c = single_mode(16, {1, 0, 0}, {"sin", "cos", "cos"}, 1.5);
  auto th = initial_state(c).theta;
  CHECK(tendency(th, 0.0).max_abs() <= 1e-15);
  auto d = tendency(th, 0.3);
  CHECK(l2_diff(d, -0.09 * th) <= 1e-14);
  CHECK(tendency(SpectralField(c.grid), 0.0).max_abs() == 0.0);
}

TEST_CASE("tendency of sin x cos z") {
  auto c = single_mode(32, {1, 0, 1}, {"sin", "cos", "cos"}, 1.0);
  auto T = tendency(initial_state(c).theta, 0.0);
  auto exact = PhysicalField::sample(c.grid, [](double x, double, double z) {
    return -std::sin(x) * std::cos(z) * std::cos(2 * z) / 16.0;
  });
  CHECK(max_abs_diff(inverse_transform(T), exact) <= 1e-12);
}

TEST_CASE("steady state under both integrators") {
  for (auto integ : {Integrator::Rk4, Integrator::IfRk4}) {
    auto c = single_mode(16, {1, 0, 0}, {"sin", "cos", "cos"}, 1.0);
    c.integrator = integ;
    Stepper stepper(c);
    SimState s = initial_state(c);
    const SimState s0 = s;
    for (int i = 0; i < 100; ++i) s = stepper.step(s, 1e-2);
    CHECK(l2_diff(s.theta, s0.theta) <= 1e-12);
    CHECK(s.t == doctest::Approx(1.0));
  }
}

TEST_CASE("integrating factor is exact for pure diffusion") {
  auto c = single_mode(16, {1, 0, 0}, {"sin", "cos", "cos"}, 1.0);
  c.epsilon = 0.5;
  c.integrator = Integrator::IfRk4;
  Stepper stepper(c);
  SimState s = initial_state(c);
  const Complex c0 = s.theta.coeff({1, 0, 0});
  const double dt = 0.1;
  for (int i = 1; i <= 10; ++i) {
    s = stepper.step(s, dt);
    CHECK(std::abs(s.theta.coeff({1, 0, 0}) - c0 * std::exp(-0.25 * dt * i)) <= 1e-15);
  }
}

TEST_CASE("rk4 one-step error is fourth order") {
  // sin x with diffusion: exact decay exp(-eps^2 k^2 t); rk4 local error O(dt^5)
  auto c = single_mode(16, {2, 0, 0}, {"sin", "cos", "cos"}, 1.0);
  c.epsilon = 1.0;
  c.integrator = Integrator::Rk4;
  const SimState s0 = initial_state(c);
  auto err = [&](double dt) {
    const SimState s1 = step(s0, dt, c);
    return l2_diff(s1.theta, std::exp(-4.0 * dt) * s0.theta);
  };
  const double ratio = err(0.02) / err(0.01);
  CHECK(ratio >= 16.0 * 0.8);
}

TEST_CASE("zero horizontal mean and symmetry are preserved") {
  auto c = random_config(16, 50.0, 2);
  c.dt = 0.01;
  c.t_end = 0.1;
  auto tr = run(c);
  const auto& th = tr.final_state.theta;
  CHECK(th.horizontal_mean_defect() == 0.0);
  CHECK(th.symmetry_defect() <= 1e-14 * th.max_abs());
}

TEST_CASE("z-independent data keep the mean gradient at zero") {
  auto c = random_config(16, 20.0, 3);
  c.initial.kind = InitialSpec::Kind::SingleMode;
  c.initial.mode = {1, 2, 0};
  c.initial.shape = {"sin", "cos", "cos"};
  c.dt = 0.01;
  c.t_end = 0.2;
  c.diagnostics_every = 2;
  auto tr = run(c);
  for (const auto& r : tr.reports) CHECK(r.mean_grad_l2 <= 1e-13);
}

TEST_CASE("cfl_dt") {
  auto c = single_mode(32, {1, 0, 1}, {"sin", "cos", "cos"}, 1.0);
  c.cfl_safety = 0.5;
  c.max_dt = 10.0;
  SimState s = initial_state(c);
  // u = 0, |v|_inf = 1/2 on the collocation grid
  const double expected = 0.5 * (kTwoPi / 32) / 0.5;
  CHECK(cfl_dt(s, c) == doctest::Approx(expected).epsilon(1e-12));
  SimState doubled{0.0, 2.0 * s.theta};
  CHECK(cfl_dt(doubled, c) == doctest::Approx(expected / 2).epsilon(1e-12));
  c.max_dt = 0.1;
  CHECK(cfl_dt(SimState{0.0, SpectralField(c.grid)}, c) == 0.1);
  c.integrator = Integrator::Rk4;
  c.epsilon = 1.0;
  c.max_dt = 10.0;
  // diffusive cap 2.78 / (eps^2 * max k_h^2) with |k_i| <= 10
  CHECK(cfl_dt(SimState{0.0, SpectralField(c.grid)}, c) ==
        doctest::Approx(0.5 * 2.78 / 200.0).epsilon(1e-12));
  c.cfl_safety = 0.0;
  CHECK_THROWS_AS(cfl_dt(s, c), std::invalid_argument);
}

TEST_CASE("run: t_end = 0, steady run, sampling cadence") {
  auto c = single_mode(16, {1, 0, 0}, {"sin", "cos", "cos"}, 1.0);
  c.t_end = 0.0;
  auto tr0 = run(c);
  CHECK(tr0.steps == 0);
  CHECK(tr0.reports.size() == 1);

  c.t_end = 1.0;
  c.dt = 0.01;
  c.diagnostics_every = 10;
  RunOptions opts;
  opts.keep_states = true;
  auto tr = run(c, opts);
  CHECK(tr.steps == 100);
  CHECK(tr.reports.size() == 11);
  CHECK(tr.states.size() == 11);
  CHECK(tr.final_state.t == 1.0);
  CHECK(l2_diff(tr.final_state.theta, tr.states.front().theta) <= 1e-10);
}

TEST_CASE("run: L2 never increases and the budget closes") {
  auto c = random_config(16, 60.0, 7);
  c.dt = 0.01;
  c.t_end = 0.3;
  c.epsilon = 0.2;
  auto tr = run(c);
  for (std::size_t i = 1; i < tr.step_l2.size(); ++i) {
    CHECK(tr.step_l2[i] <= tr.step_l2[i - 1] + 1e-8 * tr.step_l2[0]);
  }
  for (const auto& r : tr.reports) {
    CHECK(r.budget_residual <= 1e-3 * (r.diss_h + r.diss_z));
    CHECK(r.diss_h >= 0.0);
    CHECK(r.diss_z >= 0.0);
  }
}

TEST_CASE("run: blow-up carries the last finite state") {
  auto c = random_config(16, 1e150, 1);
  c.dt = 1.0;
  c.t_end = 5.0;
  try {
    run(c);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.last_valid().theta.max_abs() < kInfinity);
    CHECK_FALSE(e.reports().empty());
  }
}

TEST_CASE("run: checkpoints and profiles") {
  auto dir = std::filesystem::temp_directory_path() / "rotconv_test_checkpoints";
  std::filesystem::remove_all(dir);
  auto c = random_config(16, 1.0, 2);
  c.dt = 0.05;
  c.t_end = 0.2;
  c.checkpoint_every = 2;
  RunOptions opts;
  opts.output_dir = dir;
  auto tr = run(c, opts);
  for (const char* name : {"checkpoint_000000.rcs", "checkpoint_000002.rcs", "checkpoint_000004.rcs",
                           "profile_000000.csv", "profile_000004.csv"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir / name), name);
  }
  auto snap = read_snapshot(dir / "checkpoint_000004.rcs");
  // the checkpoint comes from the paired (theta, w) inverse transform
  auto direct = inverse_transform(tr.final_state.theta);
  CHECK(max_abs_diff(snap.field, direct) <= 1e-14 * max_abs(direct));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run is deterministic") {
  auto c = random_config(16, 30.0, 11);
  c.dt = 0.02;
  c.t_end = 0.2;
  std::ostringstream a, b;
  write_series_csv(a, run(c).reports);
  write_series_csv(b, run(c).reports);
  CHECK(a.str() == b.str());
}
