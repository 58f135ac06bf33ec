#pragma once

// The Cauchy-gap coefficients of the corrector sequence and their certified
// sum
//   S(beta) = sum_{n>=1} [((2^n+1)/(2*4^n))^beta + ((2^n-1)/(2*4^n))^beta].
// Enclosures round outward; the tail uses (2^n +- 1)/(2*4^n) <= 2^-n.

#include "orthostab/core.hpp"

namespace orthostab {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

struct SeriesValue {
  double lower = 0.0;
  double upper = 0.0;
  int terms_used = 0;

  Interval interval() const { return {lower, upper}; }
  double width() const { return upper - lower; }
};

/// ((2^n+1)/(2*4^n))^beta + ((2^n-1)/(2*4^n))^beta for n >= 1, beta > 0.
double cauchy_gap(int n, double beta);

/// Exact cauchy_gap; only beta == 1, where it equals 2^-n.
Rational cauchy_gap_exact(int n);

template <class S>
S cauchy_gap_as(int n, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    return cauchy_gap_exact(n);
  } else {
    return cauchy_gap(n, beta);
  }
}

/// Certified upper bound on sum_{m >= n} cauchy_gap(m, beta):
/// 2 * 2^(-n beta) / (1 - 2^-beta), rounded up.
double tail_bound(int n, double beta);

/// Exact majorant at beta = 1: 2 * 2^-n / (1 - 1/2) = 4 * 2^-n.
Rational tail_bound_exact(int n);

template <class S>
S tail_bound_as(int n, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    return tail_bound_exact(n);
  } else {
    return tail_bound(n, beta);
  }
}

/// Certified upper bound on sum_{m = lo}^{hi - 1} cauchy_gap(m, beta).
double gap_sum_upper(int lo, int hi, double beta);

/// Enclosure [partial, partial + tail] of S(beta) with width <= tol.
/// Throws ConfigError for beta <= 0 or tol <= 0 and RangeError when the
/// requested width is out of reach in double precision.
SeriesValue series_S(double beta, double tol);

/// Enclosure helpers: exp2 and pow with a one-ulp error allowance.
Interval enclose_exp2(double x);
Interval enclose_mul(Interval a, Interval b);
Interval enclose_add(Interval a, Interval b);
Interval enclose_div(Interval a, Interval b);
Interval enclose_pow(Interval a, double exponent);

}  // namespace orthostab
