#include "rotconv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rotconv {

using nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& j, const std::set<std::string>& known, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
T get(const ordered_json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad or missing '") + key + "': " + e.what());
  }
}

template <class T>
void get_optional(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = get<T>(j, key);
}

InitialSpec parse_initial(const ordered_json& j) {
  InitialSpec s;
  const auto kind = get<std::string>(j, "kind");
  if (kind == "analytic-single-mode") {
    reject_unknown(j, {"kind", "mode", "shape", "amplitude"}, "initial");
    s.kind = InitialSpec::Kind::SingleMode;
    get_optional(j, "mode", s.mode);
    get_optional(j, "shape", s.shape);
    get_optional(j, "amplitude", s.amplitude);
  } else if (kind == "random-band-limited") {
    reject_unknown(j, {"kind", "kmin", "kmax", "amplitude", "norm", "seed"}, "initial");
    s.kind = InitialSpec::Kind::RandomBand;
    get_optional(j, "kmin", s.kmin);
    get_optional(j, "kmax", s.kmax);
    get_optional(j, "amplitude", s.amplitude);
    get_optional(j, "norm", s.norm);
    if (j.contains("seed")) s.seed = get<std::uint64_t>(j, "seed");
  } else {
    throw std::invalid_argument("config: unknown initial kind '" + kind + "'");
  }
  return s;
}

ordered_json initial_to_json(const InitialSpec& s) {
  ordered_json j;
  if (s.kind == InitialSpec::Kind::SingleMode) {
    j["kind"] = "analytic-single-mode";
    j["mode"] = s.mode;
    j["shape"] = s.shape;
    j["amplitude"] = s.amplitude;
  } else {
    j["kind"] = "random-band-limited";
    j["kmin"] = s.kmin;
    j["kmax"] = s.kmax;
    j["amplitude"] = s.amplitude;
    j["norm"] = s.norm;
    if (s.seed) j["seed"] = *s.seed;
  }
  return j;
}

}  // namespace

std::string_view integrator_name(Integrator integrator) {
  return integrator == Integrator::Rk4 ? "rk4" : "if-rk4";
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail("epsilon must be finite and >= 0");
  if (dt && !(*dt > 0.0 && std::isfinite(*dt))) fail("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be finite and >= 0");
  if (diagnostics_every < 1) fail("diagnostics_every must be >= 1");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) fail("cfl_safety must lie in (0, 1]");
  if (!(max_dt > 0.0)) fail("max_dt must be positive");
  if (checkpoint_every < 0) fail("checkpoint_every must be >= 0");
  if (!(envelope_slack >= 0.0)) fail("envelope_slack must be >= 0");
  if (mode_cap && *mode_cap < 1) fail("mode_cap must be >= 1");
  const auto& in = initial;
  if (in.kind == InitialSpec::Kind::SingleMode) {
    for (const auto& sh : in.shape) {
      if (sh != "sin" && sh != "cos") fail("initial.shape entries must be \"sin\" or \"cos\"");
    }
  } else {
    if (in.norm != "l2" && in.norm != "l6" && in.norm != "max") {
      fail("initial.norm must be \"l2\", \"l6\" or \"max\"");
    }
    if (in.kmin < 0 || in.kmax < std::max(in.kmin, 1)) fail("initial band needs 0 <= kmin <= kmax");
  }
  if (!std::isfinite(in.amplitude)) fail("initial.amplitude must be finite");
}

SimConfig parse_config(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(j,
                 {"grid", "epsilon", "dt", "t_end", "integrator", "dealias", "initial",
                  "diagnostics_every", "seed", "cfl_safety", "max_dt", "checkpoint_every",
                  "envelope_slack", "mode_cap"},
                 "config");
  SimConfig c;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"nx", "ny", "nz"}, "grid");
    try {
      c.grid = Grid(get<int>(g, "nx"), get<int>(g, "ny"), get<int>(g, "nz"));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
  }
  get_optional(j, "epsilon", c.epsilon);
  if (j.contains("dt")) {
    const auto& dt = j.at("dt");
    if (dt.is_string()) {
      if (dt.get<std::string>() != "auto") throw std::invalid_argument("config: dt must be a number or \"auto\"");
    } else {
      c.dt = get<double>(j, "dt");
    }
  }
  get_optional(j, "t_end", c.t_end);
  if (j.contains("integrator")) {
    const auto name = get<std::string>(j, "integrator");
    if (name == "rk4") {
      c.integrator = Integrator::Rk4;
    } else if (name == "if-rk4") {
      c.integrator = Integrator::IfRk4;
    } else {
      throw std::invalid_argument("config: integrator must be \"rk4\" or \"if-rk4\"");
    }
  }
  get_optional(j, "dealias", c.dealias);
  if (j.contains("initial")) c.initial = parse_initial(j.at("initial"));
  get_optional(j, "diagnostics_every", c.diagnostics_every);
  get_optional(j, "seed", c.seed);
  get_optional(j, "cfl_safety", c.cfl_safety);
  get_optional(j, "max_dt", c.max_dt);
  get_optional(j, "checkpoint_every", c.checkpoint_every);
  get_optional(j, "envelope_slack", c.envelope_slack);
  if (j.contains("mode_cap")) c.mode_cap = get<int>(j, "mode_cap");
  c.validate();
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const SimConfig& c) {
  ordered_json j;
  j["grid"] = {{"nx", c.grid.nx()}, {"ny", c.grid.ny()}, {"nz", c.grid.nz()}};
  j["epsilon"] = c.epsilon;
  if (c.dt) {
    j["dt"] = *c.dt;
  } else {
    j["dt"] = "auto";
  }
  j["t_end"] = c.t_end;
  j["integrator"] = integrator_name(c.integrator);
  j["dealias"] = c.dealias;
  j["initial"] = initial_to_json(c.initial);
  j["diagnostics_every"] = c.diagnostics_every;
  j["seed"] = c.seed;
  j["cfl_safety"] = c.cfl_safety;
  j["max_dt"] = c.max_dt;
  j["checkpoint_every"] = c.checkpoint_every;
  j["envelope_slack"] = c.envelope_slack;
  if (c.mode_cap) j["mode_cap"] = *c.mode_cap;
  return j.dump(2);
}

}  // namespace rotconv
