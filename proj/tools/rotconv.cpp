#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rotconv/evolution.hpp"
#include "rotconv/experiments.hpp"
#include "rotconv/multiplier.hpp"

using namespace rotconv;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBlowUp = 3;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) { open_output(path) << text; }

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir) {
  const SimConfig config = load_config(config_path);
  fs::create_directories(out_dir);
  RunOptions opts;
  opts.output_dir = out_dir;
  try {
    const auto traj = run(config, opts);
    auto out = open_output(out_dir / "series.csv");
    write_series_csv(out, traj.reports);
    std::cout << "steps " << traj.steps << ", t = " << traj.final_state.t << ", samples "
              << traj.reports.size() << "\n";
    return 0;
  } catch (const BlowUpError& e) {
    auto out = open_output(out_dir / "series.csv");
    write_series_csv(out, e.reports());
    std::cerr << "blow-up: " << e.what() << " (last finite state at t = " << e.last_valid().t
              << ")\n";
    return kExitBlowUp;
  }
}

int cmd_check_multipliers(int K, double p, int trials, std::uint64_t seed, const fs::path& out) {
  std::ostringstream csv;
  csv << "entry,hypothesis,lattice_sup,empirical_ratio\n" << std::setprecision(17);
  for (const auto& spec : multiplier_catalog()) {
    csv << spec.name << ',' << (hypothesis_check(spec) ? "pass" : "fail") << ','
        << lattice_sup(spec, K) << ',' << empirical_lp_ratio(spec, p, trials, seed) << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(out, csv.str());
  }
  return 0;
}

int cmd_export_catalog(const fs::path& out) {
  if (out.empty()) {
    std::cout << catalog_json();
  } else {
    write_text(out, catalog_json());
  }
  return 0;
}

void write_sweep(const SweepResult& r, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  auto csv = open_output(out_dir / "sweep.csv");
  write_sweep_csv(csv, r);
  write_text(out_dir / "sweep.json", sweep_json(r));
  std::cout << std::setprecision(6);
  for (const auto& p : r.points) {
    std::cout << r.kind << ' ' << p.parameter << ": theta " << p.theta_error << ", mean "
              << p.mean_error << ", velocity " << p.velocity_error << "\n";
  }
  if (r.fit.slope) {
    std::cout << "slope " << *r.fit.slope;
    if (r.fit.ci_low) std::cout << " [" << *r.fit.ci_low << ", " << *r.fit.ci_high << "]";
    std::cout << "\n";
  } else {
    std::cout << "slope undefined\n";
  }
}

int cmd_sweep_epsilon(const fs::path& config_path, const std::string& eps, const std::string& mode,
                      const fs::path& out_dir, unsigned threads) {
  const auto r =
      sweep_epsilon(load_config(config_path), parse_list<double>(eps, "--eps"),
                    mode == "scaled" ? InitialPerturbation::EpsScaled : InitialPerturbation::Matched,
                    threads);
  write_sweep(r, out_dir);
  if (r.gronwall) {
    std::cout << "gronwall envelope " << (r.gronwall->pass ? "holds" : "violated") << " (C1 "
              << r.gronwall->c1 << ", C2 " << r.gronwall->c2 << ")\n";
  }
  return 0;
}

int cmd_sweep_resolution(const fs::path& config_path, const std::string& modes,
                         const fs::path& out_dir, unsigned threads) {
  const auto r =
      sweep_resolution(load_config(config_path), parse_list<int>(modes, "--modes"), threads);
  write_sweep(r, out_dir);
  std::cout << (r.monotone ? "errors decrease monotonically\n" : "errors are not monotone\n");
  return 0;
}

int cmd_twin(const fs::path& config_path, double amp, const std::string& mode,
             const fs::path& out_dir) {
  const auto k = parse_list<int>(mode, "--delta-mode");
  if (k.size() != 3) throw std::invalid_argument("--delta-mode: expected k1,k2,k3");
  const auto r = twin_run(load_config(config_path), amp, {k[0], k[1], k[2]});
  fs::create_directories(out_dir);
  auto csv = open_output(out_dir / "twin.csv");
  write_twin_csv(csv, r);
  write_text(out_dir / "twin.json", twin_json(r));
  std::cout << std::setprecision(6) << "sup |delta| " << r.sup_full << ", half " << r.sup_half;
  if (r.response_ratio) {
    std::cout << ", ratio " << *r.response_ratio
              << (r.in_regime ? "" : " (out of the linear regime)");
  }
  std::cout << "\nfitted rate " << r.c_fit << ", envelope "
            << (r.envelope_pass ? "holds" : "violated") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral rotating convection simulator and verification tools"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  fs::path config, out;
  auto* run_cmd = app.add_subcommand("run", "Evolve a configuration and write diagnostics");
  run_cmd->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "Output directory")->required();

  int K = 128;
  double p = 3.0;
  int trials = 20;
  std::uint64_t seed = 42;
  auto* check = app.add_subcommand("check-multipliers", "Tabulate the multiplier catalog checks");
  check->add_option("--K", K, "Lattice half-width")->capture_default_str();
  check->add_option("--p", p, "Lebesgue exponent for the empirical ratio")->capture_default_str();
  check->add_option("--trials", trials, "Random fields per entry")->capture_default_str();
  check->add_option("--seed", seed, "Base seed")->capture_default_str();
  check->add_option("--out", out, "CSV file (default: stdout)");

  auto* exp_cmd = app.add_subcommand("export-catalog", "Write the multiplier catalog as JSON");
  exp_cmd->add_option("--out", out, "JSON file (default: stdout)");

  std::string eps, mode = "matched", modes, delta_mode = "1,1,1";
  unsigned threads = 0;
  double amp = 1e-6;
  auto* se = app.add_subcommand("sweep-epsilon", "Compare diffusive runs against eps = 0");
  se->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
  se->add_option("--eps", eps, "Comma-separated, strictly decreasing")->required();
  se->add_option("--mode", mode, "Initial data for the members")
      ->check(CLI::IsMember({"matched", "scaled"}))
      ->capture_default_str();
  se->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  se->add_option("--out", out, "Output directory")->required();

  auto* sr = app.add_subcommand("sweep-resolution", "Compare Galerkin truncations");
  sr->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
  sr->add_option("--modes", modes, "Comma-separated, strictly increasing")->required();
  sr->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  sr->add_option("--out", out, "Output directory")->required();

  auto* tw = app.add_subcommand("twin", "Continuous dependence on the initial data");
  tw->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
  tw->add_option("--delta-amp", amp, "L2 size of the perturbation")->capture_default_str();
  tw->add_option("--delta-mode", delta_mode, "Wavevector k1,k2,k3")->capture_default_str();
  tw->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config, out);
    if (*check) return cmd_check_multipliers(K, p, trials, seed, out);
    if (*exp_cmd) return cmd_export_catalog(out);
    if (*se) return cmd_sweep_epsilon(config, eps, mode, out, threads);
    if (*sr) return cmd_sweep_resolution(config, modes, out, threads);
    if (*tw) return cmd_twin(config, amp, delta_mode, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
