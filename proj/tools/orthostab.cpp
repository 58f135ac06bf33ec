// orthostab: constants, stability experiments and axiom checks.

#include <iostream>

#include "CLI11.hpp"
#include "orthostab/workbench.hpp"

using namespace orthostab;

int main(int argc, char** argv) {
  CLI::App app{"Hyers-Ulam stability workbench for orthogonally Jensen equations"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", mode_name, target;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  std::vector<double> betas{0.5, 1.0, 2.0};
  std::vector<double> ps{0.25, 0.5, 0.75, 1.0};

  auto* constants = app.add_subcommand("constants", "print S(beta), K_add, K_quad, K_add_p, K_quad_p as CSV");
  constants->add_option("--beta", betas, "beta values")->delimiter(',');
  constants->add_option("--p", ps, "p values for the quasi-Banach constants")->delimiter(',');
  constants->add_option("--tol", tol, "maximum interval width");

  auto* run = app.add_subcommand("run", "run a stability experiment");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "artifact directory");
  auto* run_seed = run->add_option("--seed", seed, "override stability.seed");
  auto* run_mode = run->add_option("--mode", mode_name, "float64 or rational");
  auto* run_tol = run->add_option("--tol", tol, "override relation.tolerance");

  auto* axioms = app.add_subcommand("check-axioms", "check gauge or relation axioms");
  axioms->add_option("--config", config_path, "config (JSON)")->required();
  axioms->add_option("--target", target, "gauge or relation (default: axioms.target)");
  axioms->add_option("--out", out_dir, "directory for axioms.json");
  auto* ax_seed = axioms->add_option("--seed", seed, "override axioms.seed");
  auto* ax_tol = axioms->add_option("--tol", tol, "override relation.tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  Overrides ov;
  if (*run_seed || *ax_seed) ov.seed = seed;
  if (*run_tol || *ax_tol) ov.tol = tol;
  if (*run_mode) {
    try {
      ov.mode = parse_backend(mode_name);
    } catch (const ConfigError& e) {
      std::cerr << "config error: --mode: " << e.what() << '\n';
      return kExitConfig;
    }
  }

  if (*constants) return constants_command(betas, ps, tol, std::cout, std::cerr);
  if (*run) return run_experiment(config_path, out_dir, ov, std::cout, std::cerr);
  return check_axioms_command(config_path, target, axioms->count("--out") ? out_dir : "", ov, std::cout, std::cerr);
}
