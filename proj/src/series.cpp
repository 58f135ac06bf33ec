#include "orthostab/series.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace orthostab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v) { return std::nextafter(v, -kInf); }
double up(double v) { return std::nextafter(v, kInf); }

// Libm exp2/pow/expm1 are accurate to within an ulp; two steps outward
// covers that plus the rounding of the operation itself.
Interval widen(double v) { return {down(down(v)), up(up(v))}; }

// (2^n + 1) / (2*4^n) = (1 + 2^-n) * 2^-(n+1), written to avoid overflow.
double weight_plus(int n) { return std::ldexp(1.0 + std::ldexp(1.0, -n), -n - 1); }
double weight_minus(int n) { return std::ldexp(1.0 - std::ldexp(1.0, -n), -n - 1); }

}  // namespace

Interval enclose_exp2(double x) { return widen(std::exp2(x)); }

Interval enclose_add(Interval a, Interval b) { return {down(a.lower + b.lower), up(a.upper + b.upper)}; }

Interval enclose_mul(Interval a, Interval b) {
  // Only non-negative operands occur here.
  return {down(a.lower * b.lower), up(a.upper * b.upper)};
}

Interval enclose_div(Interval a, Interval b) { return {down(a.lower / b.upper), up(a.upper / b.lower)}; }

Interval enclose_pow(Interval a, double exponent) {
  // Monotone increasing for non-negative base and positive exponent.
  return {widen(std::pow(a.lower, exponent)).lower, widen(std::pow(a.upper, exponent)).upper};
}

double cauchy_gap(int n, double beta) {
  if (n < 1) throw InputError("cauchy_gap needs n >= 1");
  if (!(beta > 0.0)) throw ConfigError("cauchy_gap needs beta > 0");
  if (beta == 1.0) return std::ldexp(1.0, -n);
  return std::pow(weight_plus(n), beta) + std::pow(weight_minus(n), beta);
}

Rational cauchy_gap_exact(int n) {
  if (n < 1) throw InputError("cauchy_gap needs n >= 1");
  const auto w = corrector_weights<Rational>(n);
  return w.plus + w.minus;
}

double tail_bound(int n, double beta) {
  if (!(beta > 0.0)) throw ConfigError("tail bound needs beta > 0");
  const double numer = widen(std::exp2(-static_cast<double>(n) * beta)).upper;
  // 1 - 2^-beta = -expm1(-beta ln 2), accurate for small beta.
  const double denom = widen(-std::expm1(-beta * std::numbers::ln2)).lower;
  return up(up(2.0 * numer / denom));
}

Rational tail_bound_exact(int n) {
  if (n < 0) throw InputError("tail bound needs n >= 0");
  mpz_class den(1);
  den <<= n;
  Rational r(mpz_class(4), den);
  r.canonicalize();
  return r;
}

double gap_sum_upper(int lo, int hi, double beta) {
  double acc = 0.0;
  for (int m = lo; m < hi; ++m) acc = up(acc + widen(cauchy_gap(m, beta)).upper);
  return acc;
}

namespace {

// Largest double <= q and smallest double >= q, for q >= 0.
double round_down(const Rational& q) { return q.get_d(); }  // get_d truncates toward zero
double round_up(const Rational& q) {
  const double d = q.get_d();
  return Rational(d) < q ? up(d) : d;
}

}  // namespace

SeriesValue series_S(double beta, double tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("series_S needs beta > 0");
  if (!(tol > 0.0)) throw ConfigError("series_S needs tol > 0");
  constexpr int kMaxTerms = 4000;
  // Term enclosures are summed exactly (doubles are dyadic rationals), so the
  // only rounding is the final outward conversion.
  Rational lower(0), upper(0);
  for (int n = 1; n <= kMaxTerms; ++n) {
    Interval term;
    if (beta == 1.0) {
      term = {std::ldexp(1.0, -n), std::ldexp(1.0, -n)};
    } else {
      const Interval a = widen(std::pow(weight_plus(n), beta));
      const Interval b = widen(std::pow(weight_minus(n), beta));
      term = {a.lower + b.lower, a.upper + b.upper};
      term = {down(term.lower), up(term.upper)};
    }
    lower += Rational(term.lower);
    upper += Rational(term.upper);
    const double tail = tail_bound(n + 1, beta);
    if (Rational(upper - lower).get_d() + tail > tol) continue;
    SeriesValue out;
    out.lower = round_down(lower);
    out.upper = up(round_up(upper) + tail);
    out.terms_used = n;
    if (out.upper - out.lower <= tol) return out;
  }
  throw RangeError("series_S(beta=" + format_number(beta) + ") cannot reach width " + format_number(tol) +
                   " within " + std::to_string(kMaxTerms) + " terms");
}

}  // namespace orthostab
