#include "orthostab/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orthostab {

std::string to_string(GrowthHint hint) {
  switch (hint) {
    case GrowthHint::linear: return "linear";
    case GrowthHint::quadratic: return "quadratic";
    case GrowthHint::bounded: return "bounded";
    case GrowthHint::unknown: return "unknown";
  }
  return "unknown";
}

template <class S>
Tracked<S> combine(const std::vector<Term<S>>& terms) {
  if (terms.empty()) throw InputError("empty combination");
  const std::size_t m = terms.front().vec->value.size();
  Tracked<S> out{Vec<S>(m, S(0)), std::vector<double>(m, 0.0)};
  for (const auto& t : terms) {
    if (t.vec->value.size() != m) throw InputError("dimension mismatch in combination");
    for (std::size_t i = 0; i < m; ++i) {
      out.value[i] += t.coeff * t.vec->value[i];
      if constexpr (!ScalarTraits<S>::exact) {
        const double c = std::fabs(t.coeff);
        out.envelope[i] += kRoundingGamma * c * std::fabs(t.vec->value[i]) + c * t.vec->envelope[i];
      }
    }
  }
  return out;
}

template <class S>
Tracked<S> combine(std::initializer_list<Term<S>> terms) {
  return combine<S>(std::vector<Term<S>>(terms));
}

template <class S>
Measured<S> measure(const Gauge& gauge, const Tracked<S>& v) {
  Measured<S> m{gauge(v.value), 0.0};
  if constexpr (!ScalarTraits<S>::exact) {
    m.slack = gauge.evaluate(v.envelope) + kRoundingGamma * m.value;
  }
  return m;
}

namespace {

template <class S>
Tracked<S> eval_at(const EvaluableMap& f, const Vec<S>& x) {
  return exact_value<S>(f.evaluate<S>(std::span<const S>(x)));
}

template <class S>
S constant(double v) {
  return ScalarTraits<S>::from_double(v);
}

template <class S>
Measured<S> max_of(const Measured<S>& a, const Measured<S>& b) {
  return {a.value >= b.value ? a.value : b.value, std::max(a.slack, b.slack)};
}

template <class S>
std::string describe_violation(const std::string& what, const Measured<S>& m, const S& bound) {
  return what + " = " + format_number(to_double(m.value)) + " > " + format_number(to_double(bound));
}

}  // namespace

template <class S>
Measured<S> defect_38(const EvaluableMap& f, std::span<const S> x, const Gauge& gauge) {
  const Tracked<S> f2 = eval_at<S>(f, scaled_pow2<S>(x, 1));
  const Vec<S> x4 = scaled_pow2<S>(x, 2);
  const Tracked<S> f4 = eval_at<S>(f, x4);
  const Tracked<S> fm4 = eval_at<S>(f, negated<S>(x4));
  // 3/8 and 1/8 are exact in both backends.
  return measure<S>(gauge, combine<S>({{constant<S>(1.0), &f2}, {constant<S>(-0.375), &f4}, {constant<S>(0.125), &fm4}}));
}

template <class S>
Measured<S> h_value(const EvaluableMap& f, std::span<const S> x, int n, const Gauge& gauge) {
  if (n < 1) throw InputError("h(x, n) needs n >= 1");
  const auto w = corrector_weights<S>(n);
  const Tracked<S> f2 = eval_at<S>(f, scaled_pow2<S>(x, 1));
  const Vec<S> xs = scaled_pow2<S>(x, n + 1);
  const Tracked<S> fp = eval_at<S>(f, xs);
  const Tracked<S> fm = eval_at<S>(f, negated<S>(xs));
  return measure<S>(gauge, combine<S>({{constant<S>(1.0), &f2}, {S(-w.plus), &fp}, {w.minus, &fm}}));
}

template <class S>
Tracked<S> g_n(const EvaluableMap& f, std::span<const S> x, int n) {
  if (n < 1) throw InputError("g_n needs n >= 1");
  const auto w = corrector_weights<S>(n);
  const Vec<S> xs = scaled_pow2<S>(x, n);
  const Tracked<S> fp = eval_at<S>(f, xs);
  const Tracked<S> fm = eval_at<S>(f, negated<S>(xs));
  return combine<S>({{w.plus, &fp}, {S(-w.minus), &fm}});
}

bool cancellation_risk(const EvaluableMap& f, int n, ScalarBackend backend) {
  return backend == ScalarBackend::float64 && f.growth_hint() == GrowthHint::quadratic && n > kCancellationLimit;
}

template <class S>
CorrectorResult<S> corrector_limit(const EvaluableMap& f, std::span<const S> x, double beta, const S& C,
                                   const Gauge& gauge, int n_max) {
  if (n_max < 1) throw InputError("corrector_limit needs n_max >= 1");
  CorrectorResult<S> out{{}, S(0), {}};
  out.trace.point = to_doubles<S>(x);
  out.trace.terminated_at = n_max;
  for (int n = 1; n <= n_max; ++n) {
    Tracked<S> gn = g_n<S>(f, x, n);
    const Vec<S> scale = scaled_pow2<S>(x, n - 1);
    const Measured<S> dp = defect_38<S>(f, std::span<const S>(scale), gauge);
    const Vec<S> neg = negated<S>(scale);
    const Measured<S> dm = defect_38<S>(f, std::span<const S>(neg), gauge);
    for (const auto* d : {&dp, &dm}) {
      if (!within<S>(*d, C)) {
        out.trace.hypothesis_ok = false;
        out.trace.hypothesis_violations.push_back(
            describe_violation<S>(std::string("D(") + (d == &dp ? "+" : "-") + "2^" + std::to_string(n - 1) + " x)", *d, C));
      }
    }
    CorrectorStep step;
    step.n = n;
    step.g_n = to_doubles<S>(gn.value);
    step.defect = to_double(max_of<S>(dp, dm).value);
    step.gap_bound = to_double(S(C * cauchy_gap_as<S>(n, beta)));
    out.trace.steps.push_back(std::move(step));
    if (n == n_max) out.value = std::move(gn);
  }
  if (cancellation_risk(f, n_max, ScalarTraits<S>::backend))
    out.trace.warnings.push_back("precision: quadratic growth with n_max = " + std::to_string(n_max) + " > " +
                                 std::to_string(kCancellationLimit) + " loses about n_max bits to cancellation");
  out.residual_bound = C * tail_bound_as<S>(n_max, beta);
  if constexpr (ScalarTraits<S>::exact) {
    out.trace.residual_bound = to_double(out.residual_bound);
  } else {
    out.residual_bound = std::nextafter(out.residual_bound, std::numeric_limits<double>::infinity());
    out.trace.residual_bound = out.residual_bound;
  }
  return out;
}

std::string trace_to_jsonl(const CorrectorTrace& trace) {
  std::ostringstream os;
  for (const auto& s : trace.steps) {
    nlohmann::json j{{"point", trace.point},     {"n", s.n},
                     {"g_n", s.g_n},             {"defect", s.defect},
                     {"gap_bound", s.gap_bound}, {"residual_bound", trace.residual_bound}};
    os << j.dump() << '\n';
  }
  return os.str();
}

template <class S>
S series_upper(double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    return Rational(1);  // sum_{n>=1} 2^-n
  } else {
    return series_S(beta, 1e-12).upper;
  }
}

namespace {

template <class S>
bool gate_defects(const EvaluableMap& f, std::span<const S> x, int k_lo, int k_hi, const S& C, const Gauge& gauge,
                  std::vector<std::string>& violations) {
  bool ok = true;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Vec<S> p = scaled_pow2<S>(x, k);
    const Vec<S> q = negated<S>(p);
    const Measured<S> dp = defect_38<S>(f, std::span<const S>(p), gauge);
    const Measured<S> dm = defect_38<S>(f, std::span<const S>(q), gauge);
    if (!within<S>(dp, C)) {
      ok = false;
      violations.push_back(describe_violation<S>("D(+2^" + std::to_string(k) + " x)", dp, C));
    }
    if (!within<S>(dm, C)) {
      ok = false;
      violations.push_back(describe_violation<S>("D(-2^" + std::to_string(k) + " x)", dm, C));
    }
  }
  return ok;
}

}  // namespace

template <class S>
LemmaReport verify_lemma_part1(const EvaluableMap& f, std::span<const S> x, int n_lo, int n_hi, const S& C,
                               double beta, const Gauge& gauge) {
  if (n_lo < 1 || n_hi < n_lo) throw InputError("verify_lemma_part1 needs 1 <= n_lo <= n_hi");
  LemmaReport r;
  r.hypothesis_ok = gate_defects<S>(f, x, 0, n_hi, C, gauge, r.hypothesis_violations);
  if (!r.hypothesis_ok) return r;
  r.checked = true;
  r.pass = true;

  const S h_cap = C * (series_upper<S>(beta) + S(1));
  std::vector<Measured<S>> h;
  for (int n = n_lo; n <= n_hi + 1; ++n) h.push_back(h_value<S>(f, x, n, gauge));
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto& a = h[static_cast<std::size_t>(n - n_lo)];
    const auto& b = h[static_cast<std::size_t>(n - n_lo + 1)];
    const S diff = a.value >= b.value ? S(a.value - b.value) : S(b.value - a.value);
    const S bound = C * cauchy_gap_as<S>(n, beta);
    const bool ok = within<S>(Measured<S>{diff, a.slack + b.slack}, bound);
    r.gap_entries.push_back({n, to_double(diff), to_double(bound), ok});
    r.pass = r.pass && ok;
  }
  for (int n = n_lo; n <= n_hi + 1; ++n) {
    const auto& a = h[static_cast<std::size_t>(n - n_lo)];
    const bool ok = within<S>(a, h_cap);
    r.bound_entries.push_back({n, to_double(a.value), to_double(h_cap), ok});
    r.pass = r.pass && ok;
  }
  return r;
}

template <class S>
LemmaReport verify_corrector_gaps(const EvaluableMap& f, std::span<const S> x, int n_lo, int n_hi, const S& C,
                                  double beta, const Gauge& gauge) {
  if (n_lo < 1 || n_hi < n_lo) throw InputError("verify_corrector_gaps needs 1 <= n_lo <= n_hi");
  LemmaReport r;
  r.hypothesis_ok = gate_defects<S>(f, x, n_lo - 1, n_hi - 1, C, gauge, r.hypothesis_violations);
  if (!r.hypothesis_ok) return r;
  r.checked = true;
  r.pass = true;
  Tracked<S> prev = g_n<S>(f, x, n_lo);
  for (int n = n_lo; n <= n_hi; ++n) {
    Tracked<S> next = g_n<S>(f, x, n + 1);
    const Measured<S> diff = measure<S>(gauge, combine<S>({{S(1), &prev}, {S(-1), &next}}));
    const S bound = C * cauchy_gap_as<S>(n, beta);
    const bool ok = within<S>(diff, bound);
    r.gap_entries.push_back({n, to_double(diff.value), to_double(bound), ok});
    r.pass = r.pass && ok;
    prev = std::move(next);
  }
  return r;
}

#define ORTHOSTAB_INSTANTIATE(S)                                                                              \
  template Tracked<S> combine<S>(const std::vector<Term<S>>&);                                                \
  template Tracked<S> combine<S>(std::initializer_list<Term<S>>);                                             \
  template Measured<S> measure<S>(const Gauge&, const Tracked<S>&);                                          \
  template Measured<S> defect_38<S>(const EvaluableMap&, std::span<const S>, const Gauge&);                  \
  template Measured<S> h_value<S>(const EvaluableMap&, std::span<const S>, int, const Gauge&);               \
  template Tracked<S> g_n<S>(const EvaluableMap&, std::span<const S>, int);                                  \
  template CorrectorResult<S> corrector_limit<S>(const EvaluableMap&, std::span<const S>, double, const S&,   \
                                                 const Gauge&, int);                                          \
  template LemmaReport verify_lemma_part1<S>(const EvaluableMap&, std::span<const S>, int, int, const S&,     \
                                             double, const Gauge&);                                           \
  template LemmaReport verify_corrector_gaps<S>(const EvaluableMap&, std::span<const S>, int, int, const S&,  \
                                                double, const Gauge&);                                        \
  template S series_upper<S>(double);

ORTHOSTAB_INSTANTIATE(double)
ORTHOSTAB_INSTANTIATE(Rational)

#undef ORTHOSTAB_INSTANTIATE

}  // namespace orthostab
