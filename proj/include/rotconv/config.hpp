#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rotconv/grid.hpp"

namespace rotconv {

enum class Integrator { Rk4, IfRk4 };

struct InitialSpec {
  enum class Kind { SingleMode, RandomBand };
  Kind kind = Kind::SingleMode;

  // single mode: amplitude * f1(k1 x) f2(k2 y) f3(k3 z), f_i in {sin, cos}
  std::array<int, 3> mode{1, 0, 0};
  std::array<std::string, 3> shape{"sin", "cos", "cos"};
  double amplitude = 1.0;

  // random band: kmin <= |k| <= kmax, rescaled so that the chosen norm equals amplitude
  int kmin = 1;
  int kmax = 4;
  std::string norm = "l2";  ///< "l2", "l6" or "max"
  std::optional<std::uint64_t> seed;  ///< defaults to SimConfig::seed
};

struct SimConfig {
  Grid grid{32};
  double epsilon = 0.0;
  std::optional<double> dt;  ///< empty means "auto" (CFL)
  double t_end = 1.0;
  Integrator integrator = Integrator::IfRk4;
  bool dealias = true;
  InitialSpec initial;
  int diagnostics_every = 1;
  std::uint64_t seed = 0;
  double cfl_safety = 0.5;
  double max_dt = 0.1;  ///< cap used by auto dt when no other limit applies
  int checkpoint_every = 0;  ///< 0 writes only the first and last state
  double envelope_slack = 10.0;
  std::optional<int> mode_cap;  ///< Galerkin truncation |k_i| <= mode_cap

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Parses the JSON form; unknown keys are rejected. Throws std::invalid_argument.
SimConfig parse_config(std::string_view json_text);
SimConfig load_config(const std::filesystem::path& path);
/// Canonical JSON form (stable key order), parseable by parse_config.
std::string config_to_json(const SimConfig& config);

std::string_view integrator_name(Integrator integrator);

}  // namespace rotconv
