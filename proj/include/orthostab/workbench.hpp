#pragma once

// Experiment configuration, orchestration and artifact emission.
//
// A config is one JSON document:
//   space      {dimension, codomain_dimension}
//   gauge      {kind: euclidean | beta-sum | lp-quasi | euclidean-squared, beta, p}
//   relation   {kind: euclidean | isosceles | trivial-zero, dimension, tolerance}
//   map        {base: linear | quadratic-form | zero, matrix, matrices,
//               noise_amplitude, noise_parity, seed}
//   stability  {equation, epsilon (optional), beta, sample_count, n_max, seed,
//               mode, quasi_corollary, point_scale_log2, threads}
//   axioms     {target: gauge | relation, system, sample_count, seed, beta}
// Only the sections a command needs are required.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "orthostab/map_builder.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/precise.hpp"
#include "orthostab/stability.hpp"

namespace orthostab {

enum ExitStatus : int { kExitOk = 0, kExitConfig = 1, kExitBound = 2, kExitPremise = 3 };

struct AxiomsSection {
  std::string target = "gauge";   // gauge | relation
  std::string system = "all";     // an AxiomSystem name or "all"
  std::size_t sample_count = 1000;
  std::uint64_t seed = 1;
  std::optional<double> beta;     // homogeneity to verify; defaults to the gauge's own
};

struct ExperimentConfig {
  std::size_t dimension = 2;
  std::size_t codomain_dimension = 2;
  std::string gauge_name;
  Gauge gauge = Gauge::euclidean();
  std::optional<OrthoRelation> relation;
  std::optional<MapSpec> map;
  std::optional<StabilityConfig> stability;
  std::string epsilon_source;  // "configured" or "derived from noise_amplitude"
  AxiomsSection axioms;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<ScalarBackend> mode;
  std::optional<double> tol;  // relation tolerance
};

/// Throws ConfigError whose message starts with the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const Overrides& overrides = {});

/// Gauge from a JSON section; "euclidean-squared" is beta-sum with beta = 2.
Gauge parse_gauge(const nlohmann::json& section);

struct ExperimentResult {
  int exit_status = kExitOk;
  std::optional<StabilityReport> report;
  nlohmann::json report_json;
  std::string samples_csv;
  std::string summary;
};

/// Builds the map, runs the pipeline and renders the artifacts (nothing is
/// written). Never throws for config errors; they become exit status 1.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// run_experiment + report.json, samples.csv, summary.txt in out_dir.
int run_experiment(const std::string& config_path, const std::string& out_dir, const Overrides& overrides,
                   std::ostream& out, std::ostream& err);

struct ConstantRow {
  std::string quantity;  // S, K_add, K_quad, K_add_p, K_quad_p
  double parameter = 0.0;
  PreciseInterval value;
};

std::vector<ConstantRow> constants_table(const std::vector<double>& betas, const std::vector<double>& ps,
                                         double tol);
/// Columns: quantity, parameter, lower, upper, width.
std::string constants_csv(const std::vector<ConstantRow>& rows);

/// Prints the table; exit 0 on success, 1 on invalid parameters, 2 when a
/// width cannot be brought within tol.
int constants_command(const std::vector<double>& betas, const std::vector<double>& ps, double tol,
                      std::ostream& out, std::ostream& err);

/// Axiom report for the configured gauge or relation.
AxiomReport check_axioms(const ExperimentConfig& config, const std::string& target);

/// Exit 0 when every axiom passes, 2 with witnesses otherwise, 1 on config
/// errors. Writes axioms.json when out_dir is non-empty.
int check_axioms_command(const std::string& config_path, const std::string& target, const std::string& out_dir,
                         const Overrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace orthostab
