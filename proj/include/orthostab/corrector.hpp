#pragma once

// Corrector sequence of the doubling method:
//
//   g_n(x)  = a_n f(2^n x) - b_n f(-2^n x),
//   a_n     = (2^n + 1) / (2*4^n),  b_n = (2^n - 1) / (2*4^n),
//   h(x, n) = || f(2x) - g_n(2x) ||,
//   D(x)    = || f(2x) - 3/8 f(4x) + 1/8 f(-4x) ||   (= h(x, 1)).
//
// If D <= C everywhere in a beta-homogeneous target, consecutive correctors
// differ by at most C * cauchy_gap(n, beta), and g = lim g_n satisfies
// ||f(2x) - g(2x)|| <= C (S(beta) + 1).
//
// Every routine is instantiated for double and for exact rationals. Float
// results carry a rounding envelope so comparisons can allow for it; exact
// results carry a zero envelope.

#include <string>
#include <vector>

#include "json.hpp"
#include "orthostab/core.hpp"
#include "orthostab/evaluable_map.hpp"
#include "orthostab/gauge.hpp"
#include "orthostab/series.hpp"

namespace orthostab {

/// Above this n, float-mode correctors of quadratically growing maps lose
/// about n bits to cancellation and carry a precision warning.
inline constexpr int kCancellationLimit = 20;

/// A computed vector with a per-coordinate bound on its accumulated
/// rounding error (all zeros in exact mode).
template <class S>
struct Tracked {
  Vec<S> value;
  std::vector<double> envelope;
};

template <class S>
Tracked<S> exact_value(Vec<S> v) {
  const std::size_t m = v.size();
  return {std::move(v), std::vector<double>(m, 0.0)};
}

/// A gauge value and the rounding slack that must be allowed when comparing
/// it with a bound. Slack is zero in exact mode.
template <class S>
struct Measured {
  S value;
  double slack = 0.0;
};

template <class S>
struct Term {
  S coeff;
  const Tracked<S>* vec;
};

/// sum_j c_j v_j with envelope gamma * sum |c_j| |v_j| + sum |c_j| env_j.
template <class S>
Tracked<S> combine(std::initializer_list<Term<S>> terms);
template <class S>
Tracked<S> combine(const std::vector<Term<S>>& terms);

template <class S>
Measured<S> measure(const Gauge& gauge, const Tracked<S>& v);

/// Whether `value` <= `bound` once the rounding slack is allowed for.
template <class S>
bool within(const Measured<S>& m, const S& bound) {
  if constexpr (ScalarTraits<S>::exact)
    return m.value <= bound;
  else
    return m.value <= bound + m.slack;
}

template <class S>
Measured<S> defect_38(const EvaluableMap& f, std::span<const S> x, const Gauge& gauge);

template <class S>
Measured<S> h_value(const EvaluableMap& f, std::span<const S> x, int n, const Gauge& gauge);

template <class S>
Tracked<S> g_n(const EvaluableMap& f, std::span<const S> x, int n);

/// True when a float-mode corrector of this map at step n is exposed to
/// catastrophic cancellation.
bool cancellation_risk(const EvaluableMap& f, int n, ScalarBackend backend);

struct CorrectorStep {
  int n = 0;
  std::vector<double> g_n;
  double defect = 0.0;     // max D(+-2^(n-1) x): the scales the n -> n+1 gap uses
  double gap_bound = 0.0;  // C * cauchy_gap(n, beta)
};

struct CorrectorTrace {
  std::vector<double> point;
  std::vector<CorrectorStep> steps;
  double residual_bound = 0.0;  // C * tail_bound(n_max, beta)
  int terminated_at = 0;
  bool hypothesis_ok = true;
  std::vector<std::string> hypothesis_violations;
  std::vector<std::string> warnings;
};

template <class S>
struct CorrectorResult {
  Tracked<S> value;  // g_{n_max}(x)
  S residual_bound;
  CorrectorTrace trace;
};

/// g_{n_max}(x) with a certified residual ||g_{n_max}(x) - lim g_n(x)|| <=
/// C * sum_{m >= n_max} cauchy_gap(m, beta), valid when D <= C holds
/// globally. D is checked (and recorded) on the scales +-2^(k-1) x touched.
template <class S>
CorrectorResult<S> corrector_limit(const EvaluableMap& f, std::span<const S> x, double beta, const S& C,
                                   const Gauge& gauge, int n_max);

/// One JSON object per step: {point, n, g_n, defect, gap_bound, residual_bound}.
std::string trace_to_jsonl(const CorrectorTrace& trace);

struct LemmaEntry {
  int n = 0;
  double lhs = 0.0;    // measured quantity
  double bound = 0.0;  // bound it must respect
  bool pass = true;
};

struct LemmaReport {
  bool hypothesis_ok = true;
  bool checked = false;
  bool pass = false;
  std::vector<std::string> hypothesis_violations;
  std::vector<LemmaEntry> gap_entries;    // |h(n+1) - h(n)| <= C gap(n)
  std::vector<LemmaEntry> bound_entries;  // h(n) <= C (S + 1)
};

/// Checks |h(x,n+1) - h(x,n)| <= C cauchy_gap(n, beta) and
/// h(x,n) <= C (S(beta) + 1) for n in [n_lo, n_hi]. Skipped (checked = false)
/// when D(+-2^k x) <= C fails for some k in [0, n_hi].
template <class S>
LemmaReport verify_lemma_part1(const EvaluableMap& f, std::span<const S> x, int n_lo, int n_hi, const S& C,
                               double beta, const Gauge& gauge);

/// Checks ||g_n(x) - g_{n+1}(x)|| <= C cauchy_gap(n, beta) for n in
/// [n_lo, n_hi], gated on D(+-2^(n-1) x) <= C.
template <class S>
LemmaReport verify_corrector_gaps(const EvaluableMap& f, std::span<const S> x, int n_lo, int n_hi, const S& C,
                                  double beta, const Gauge& gauge);

/// Upper end of S(beta); exactly 1 in rational mode (beta = 1).
template <class S>
S series_upper(double beta);

}  // namespace orthostab
