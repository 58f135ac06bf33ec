#pragma once

// Stability pipelines for the orthogonally Jensen additive equation
//   x _|_ y  =>  ||2f((x+y)/2) - f(x) - f(y)|| <= eps,  ||f(x) + f(-x)|| <= eps
// and the orthogonally Jensen quadratic equation
//   x _|_ y  =>  ||2f((x+y)/2) + 2f((x-y)/2) - f(x) - f(y)|| <= eps
// in a beta-homogeneous F-space. The approximating solution is the corrector
// limit g; the guaranteed distance is ||f(x) - g(x)|| <= K eps on 2X with
//   K_add  = (S(beta) + 1) (1 + 2^b + 4^b + 8^b + 16^b) / 8^b,
//   K_quad = (S(beta) + 1) (1 + 2^b + 2^(1-b) + 2^(1-2b)) / 8^b.
// The quasi-Banach variants run the same pipeline on ||.||^p with eps^p and
// report K_p = K(p)^(1/p).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "orthostab/corrector.hpp"
#include "orthostab/evaluable_map.hpp"
#include "orthostab/gauge.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/series.hpp"

namespace orthostab {

enum class Equation { jensen_additive, jensen_quadratic };

std::string to_string(Equation eq);
Equation parse_equation(const std::string& name);

// ---- constants -------------------------------------------------------------

Interval K_add(double beta, double tol = 1e-12);
Interval K_quad(double beta, double tol = 1e-12);
/// K_add(p)^(1/p) and K_quad(p)^(1/p), 0 < p <= 1.
Interval K_add_p(double p, double tol = 1e-12);
Interval K_quad_p(double p, double tol = 1e-12);

/// Exact values at beta = 1: 31/4 and 9/8.
Rational K_add_exact();
Rational K_quad_exact();

/// Certified upper end of K (float) or the exact value (rational, beta = 1).
template <class S>
S stability_constant(Equation eq, double beta);

/// C / eps: (1 + 2^b + 4^b + 8^b + 16^b) / 8^b or (1 + 2^b + 2^(1-b) + 2^(1-2b)) / 8^b,
/// rounded up in float mode.
template <class S>
S chain_coefficient(Equation eq, double beta);

/// eps derived from a noise amplitude: (2^b + 2) delta or (2 * 2^b + 2) delta.
double epsilon_from_noise(Equation eq, double beta, double delta);

// ---- premises and the derivation chain ---------------------------------------

struct InequalityCheck {
  std::string name;
  double bound = 0.0;
  double max_value = 0.0;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string witness;  // point of the largest value

  bool pass() const { return failures == 0; }
};

struct ChainReport {
  std::vector<InequalityCheck> checks;

  bool pass() const;
  const InequalityCheck* find(const std::string& name) const;
};

struct PremiseReport {
  double max_defect = 0.0;
  std::size_t pairs_checked = 0;
  std::size_t points_checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;  // first few violations
  bool ok() const { return violations == 0; }
};

template <class S>
struct PremiseSamples {
  std::vector<PointPair<S>> pairs;  // orthogonal pairs
  std::vector<Vec<S>> points;       // chain and oddness sample points
};

template <class S>
struct DerivedC {
  S C;
  bool certified = true;  // false when a premise failed on the sample
  PremiseReport premises;
  ChainReport chain;
};

template <class S>
PremiseReport check_premises(const EvaluableMap& f, Equation eq, const S& epsilon, const Gauge& gauge,
                             const PremiseSamples<S>& samples);

template <class S>
DerivedC<S> derive_C_additive(const EvaluableMap& f, const S& epsilon, double beta, const Gauge& gauge,
                              const PremiseSamples<S>& samples);
template <class S>
DerivedC<S> derive_C_quadratic(const EvaluableMap& f, const S& epsilon, double beta, const Gauge& gauge,
                               const PremiseSamples<S>& samples);

// ---- conclusion and uniqueness ---------------------------------------------

template <class S>
using VectorFn = std::function<Tracked<S>(const Vec<S>&)>;

template <class S>
struct ConclusionDefect {
  Measured<S> max;
  std::vector<double> witness_x;
  std::vector<double> witness_y;
};

/// Max of the conclusion-equation defect of g_eval over the orthogonal pairs
/// (pairs the relation rejects are skipped).
template <class S>
ConclusionDefect<S> verify_conclusion(const VectorFn<S>& g_eval, Equation eq, const OrthoRelation& relation,
                                      const std::vector<PointPair<S>>& pairs, const Gauge& gauge);

/// Max over points of ||g_{n1}(x) - g_{n2}(x)||.
template <class S>
Measured<S> uniqueness_probe(const EvaluableMap& f, const std::vector<Vec<S>>& points, int n1, int n2,
                             const Gauge& gauge);

/// C * sum_{m=n1}^{n2-1} cauchy_gap(m, beta), certified.
template <class S>
S uniqueness_bound(const S& C, int n1, int n2, double beta);

// ---- pipeline ----------------------------------------------------------------

struct StabilityConfig {
  Equation equation = Equation::jensen_additive;
  double epsilon = 0.0;
  double beta = 1.0;
  OrthoRelation relation = OrthoRelation::euclidean(2);
  Gauge gauge = Gauge::euclidean();
  std::size_t sample_count = 1000;
  int n_max = 20;
  std::uint64_t seed = 0;
  ScalarBackend mode = ScalarBackend::float64;
  bool quasi_corollary = false;
  /// Sample points are 2^(1 + point_scale_log2) z with z in [-1, 1]^d.
  int point_scale_log2 = 0;
  /// Worker threads for the per-sample loops; 0 picks the hardware count.
  unsigned threads = 0;
};

/// Throws ConfigError naming the offending field.
void validate(const StabilityConfig& config, const EvaluableMap& f);

struct SampleRow {
  std::vector<double> point;
  double value = 0.0;     // ||f(x) - g(x)||
  double bound = 0.0;     // K eps
  double residual = 0.0;  // certified ||g_{n_max}(x) - g(x)|| bound
  double ratio = 0.0;     // value / (bound + residual + rounding slack)
  bool within = true;
};

struct StabilityReport {
  std::string equation;
  std::string mode;
  std::string gauge;
  std::string relation;
  double epsilon = 0.0;            // as configured
  double epsilon_effective = 0.0;  // eps^p under the corollary, else eps
  double beta = 1.0;               // homogeneity the pipeline ran with
  bool quasi_corollary = false;
  std::size_t sample_count = 0;
  int n_max = 0;
  std::uint64_t seed = 0;

  PremiseReport premises;
  ChainReport chain;
  double premise_max_defect = 0.0;
  double derived_C = 0.0;
  bool C_certified = true;
  double K = 0.0;  // reported constant (K_p under the corollary)
  Interval K_interval;
  double K_epsilon = 0.0;

  std::vector<SampleRow> per_sample;
  double max_ratio = 0.0;
  bool all_within_bound = true;

  bool hypothesis_ok = true;  // D <= C on every scale the correctors touched
  std::vector<std::string> hypothesis_violations;

  double conclusion_max_defect = 0.0;
  double conclusion_bound = 0.0;
  bool conclusion_ok = true;

  int uniqueness_n1 = 0;
  int uniqueness_n2 = 0;
  double uniqueness_gap = 0.0;
  double uniqueness_bound = 0.0;
  bool uniqueness_ok = true;

  std::vector<std::string> warnings;

  /// Every derived inequality held (premises aside).
  bool verdict_ok() const {
    return all_within_bound && chain.pass() && hypothesis_ok && conclusion_ok && uniqueness_ok;
  }
};

/// check premises -> derive C -> corrector limits at sampled points of 2X ->
/// per-sample bound check -> conclusion equation -> uniqueness probe.
StabilityReport run_stability(const StabilityConfig& config, const EvaluableMap& f);

nlohmann::json to_json(const StabilityReport& report);
/// Columns: x0..x{d-1}, value, bound, ratio, residual_bound.
std::string samples_csv(const StabilityReport& report);
std::string summary_text(const StabilityReport& report);

}  // namespace orthostab
