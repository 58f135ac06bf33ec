#include "orthostab/stability.hpp"

#include "orthostab/precise.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace orthostab {

std::string to_string(Equation eq) {
  return eq == Equation::jensen_additive ? "jensen-additive" : "jensen-quadratic";
}

Equation parse_equation(const std::string& name) {
  if (name == "jensen-additive" || name == "additive") return Equation::jensen_additive;
  if (name == "jensen-quadratic" || name == "quadratic") return Equation::jensen_quadratic;
  throw ConfigError("unknown equation '" + name + "' (expected jensen-additive or jensen-quadratic)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double v) { return std::nextafter(v, kInf); }

Interval point(double v) { return {v, v}; }

// 1 + 2^b + 4^b + 8^b + 16^b  or  1 + 2^b + 2^(1-b) + 2^(1-2b)
Interval chain_polynomial(Equation eq, double beta) {
  Interval p = point(1.0);
  if (eq == Equation::jensen_additive) {
    for (int k = 1; k <= 4; ++k) p = enclose_add(p, enclose_exp2(k * beta));
  } else {
    p = enclose_add(p, enclose_exp2(beta));
    p = enclose_add(p, enclose_exp2(1.0 - beta));
    p = enclose_add(p, enclose_exp2(1.0 - 2.0 * beta));
  }
  return p;
}

Interval coefficient_interval(Equation eq, double beta) {
  return enclose_div(chain_polynomial(eq, beta), enclose_exp2(3.0 * beta));
}

Interval stability_interval(Equation eq, double beta, double tol) {
  const auto q = eq == Equation::jensen_additive ? PreciseQuantity::K_add : PreciseQuantity::K_quad;
  return precise_constant(q, beta, tol).enclosure;
}

Interval corollary_interval(Equation eq, double p, double tol) {
  const auto q = eq == Equation::jensen_additive ? PreciseQuantity::K_add_p : PreciseQuantity::K_quad_p;
  return precise_constant(q, p, tol).enclosure;
}

template <class S>
S eps_times(const S& coeff, const S& eps) {
  if constexpr (ScalarTraits<S>::exact)
    return coeff * eps;
  else
    return eps == 0.0 ? 0.0 : up(coeff * eps);
}

template <class S>
Tracked<S> eval(const EvaluableMap& f, const Vec<S>& x) {
  return exact_value<S>(f.evaluate<S>(std::span<const S>(x)));
}

template <class S>
Vec<S> halved(const Vec<S>& x) {
  return scaled_pow2<S>(std::span<const S>(x), -1);
}

template <class S>
Vec<S> pow2(const Vec<S>& x, int k) {
  return scaled_pow2<S>(std::span<const S>(x), k);
}

template <class S>
Vec<S> neg(const Vec<S>& x) {
  return negated<S>(std::span<const S>(x));
}

template <class S>
Vec<S> sum(const Vec<S>& a, const Vec<S>& b) {
  return added<S>(std::span<const S>(a), std::span<const S>(b));
}

template <class S>
Vec<S> diff(const Vec<S>& a, const Vec<S>& b) {
  return subtracted<S>(std::span<const S>(a), std::span<const S>(b));
}

template <class S>
std::string fmt(const Vec<S>& x) {
  const auto d = to_doubles<S>(std::span<const S>(x));
  return format_vector(d);
}

template <class S>
class Accumulator {
 public:
  Accumulator(std::string name, S bound) : bound_(std::move(bound)) {
    check_.name = std::move(name);
    check_.bound = to_double(bound_);
  }

  void add(const Measured<S>& m, const std::string& where) {
    ++check_.checked;
    const double v = to_double(m.value);
    if (check_.checked == 1 || v > check_.max_value) {
      check_.max_value = v;
      check_.witness = where;
    }
    if (!within<S>(m, bound_)) ++check_.failures;
  }

  InequalityCheck result() const { return check_; }

 private:
  S bound_;
  InequalityCheck check_;
};

template <class S>
Measured<S> jensen_defect(Equation eq, const Vec<S>& x, const Vec<S>& y, const Gauge& gauge,
                          const VectorFn<S>& eval_fn) {
  const Tracked<S> fx = eval_fn(x);
  const Tracked<S> fy = eval_fn(y);
  const Tracked<S> fp = eval_fn(halved<S>(sum<S>(x, y)));
  if (eq == Equation::jensen_additive)
    return measure<S>(gauge, combine<S>({{S(2), &fp}, {S(-1), &fx}, {S(-1), &fy}}));
  const Tracked<S> fm = eval_fn(halved<S>(diff<S>(x, y)));
  return measure<S>(gauge, combine<S>({{S(2), &fp}, {S(2), &fm}, {S(-1), &fx}, {S(-1), &fy}}));
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

// ---- constants -------------------------------------------------------------

Interval K_add(double beta, double tol) { return stability_interval(Equation::jensen_additive, beta, tol); }
Interval K_quad(double beta, double tol) { return stability_interval(Equation::jensen_quadratic, beta, tol); }
Interval K_add_p(double p, double tol) { return corollary_interval(Equation::jensen_additive, p, tol); }
Interval K_quad_p(double p, double tol) { return corollary_interval(Equation::jensen_quadratic, p, tol); }

Rational K_add_exact() { return Rational(31, 4); }
Rational K_quad_exact() { return Rational(9, 8); }

template <class S>
S stability_constant(Equation eq, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    return eq == Equation::jensen_additive ? K_add_exact() : K_quad_exact();
  } else {
    return stability_interval(eq, beta, 1e-12).upper;
  }
}

template <class S>
S chain_coefficient(Equation eq, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    return eq == Equation::jensen_additive ? Rational(31, 8) : Rational(9, 16);
  } else {
    return coefficient_interval(eq, beta).upper;
  }
}

double epsilon_from_noise(Equation eq, double beta, double delta) {
  const double k = eq == Equation::jensen_additive ? 1.0 : 2.0;
  return (k * std::exp2(beta) + 2.0) * delta;
}

// ---- premises and chain ------------------------------------------------------

bool ChainReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass(); });
}

const InequalityCheck* ChainReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

template <class S>
PremiseReport check_premises(const EvaluableMap& f, Equation eq, const S& epsilon, const Gauge& gauge,
                             const PremiseSamples<S>& samples) {
  PremiseReport r;
  const VectorFn<S> ev = [&](const Vec<S>& x) { return eval<S>(f, x); };
  auto note = [&](const std::string& what, const Measured<S>& m) {
    const double v = to_double(m.value);
    r.max_defect = std::max(r.max_defect, v);
    if (!within<S>(m, epsilon)) {
      ++r.violations;
      if (r.witnesses.size() < 10)
        r.witnesses.push_back(what + ": defect " + format_number(v) + " > eps " + format_number(to_double(epsilon)));
    }
  };
  for (const auto& [x, y] : samples.pairs) {
    note("x = " + fmt<S>(x) + ", y = " + fmt<S>(y), jensen_defect<S>(eq, x, y, gauge, ev));
    ++r.pairs_checked;
  }
  if (eq == Equation::jensen_additive) {
    for (const auto& x : samples.points) {
      const Tracked<S> a = eval<S>(f, x);
      const Tracked<S> b = eval<S>(f, neg<S>(x));
      note("oddness at x = " + fmt<S>(x), measure<S>(gauge, combine<S>({{S(1), &a}, {S(1), &b}})));
      ++r.points_checked;
    }
  }
  return r;
}

template <class S>
DerivedC<S> derive_C_additive(const EvaluableMap& f, const S& epsilon, double beta, const Gauge& gauge,
                              const PremiseSamples<S>& samples) {
  DerivedC<S> out{S(0), true, {}, {}};
  out.premises = check_premises<S>(f, Equation::jensen_additive, epsilon, gauge, samples);
  out.certified = out.premises.ok();
  out.C = eps_times<S>(chain_coefficient<S>(Equation::jensen_additive, beta), epsilon);

  const S one_plus = S(pow2_beta<S>(-1, beta) + S(1));
  S poly(1);
  for (int k = 1; k <= 4; ++k) poly += pow2_beta<S>(k, beta);

  Accumulator<S> zero("zero_value", S(epsilon * pow2_beta<S>(-1, beta)));
  Accumulator<S> halving("halving", S(one_plus * epsilon));
  Accumulator<S> doubling("doubling", S(one_plus * epsilon));
  Accumulator<S> scale4("scale4_identity", S(poly * epsilon));
  Accumulator<S> d38("defect_38", out.C);

  const std::size_t dim = f.domain_dim();
  const Tracked<S> f0 = eval<S>(f, Vec<S>(dim, S(0)));
  zero.add(measure<S>(gauge, f0), "x = 0");

  for (const auto& z : samples.points) {
    const std::string where = "x = " + fmt<S>(z);
    const Tracked<S> fz = eval<S>(f, z);
    const Tracked<S> fh = eval<S>(f, halved<S>(z));
    const Tracked<S> f2 = eval<S>(f, pow2<S>(z, 1));
    const Vec<S> z4 = pow2<S>(z, 2);
    const Tracked<S> f4 = eval<S>(f, z4);
    const Tracked<S> fm4 = eval<S>(f, neg<S>(z4));
    halving.add(measure<S>(gauge, combine<S>({{S(2), &fh}, {S(-1), &fz}})), where);
    doubling.add(measure<S>(gauge, combine<S>({{S(2), &fz}, {S(-1), &f2}})), where);
    scale4.add(measure<S>(gauge, combine<S>({{S(3), &f4}, {S(-8), &f2}, {S(-1), &fm4}})), where);
    d38.add(defect_38<S>(f, std::span<const S>(z), gauge), where);
  }
  out.chain.checks = {zero.result(), halving.result(), doubling.result(), scale4.result(), d38.result()};
  return out;
}

template <class S>
DerivedC<S> derive_C_quadratic(const EvaluableMap& f, const S& epsilon, double beta, const Gauge& gauge,
                               const PremiseSamples<S>& samples) {
  DerivedC<S> out{S(0), true, {}, {}};
  out.premises = check_premises<S>(f, Equation::jensen_quadratic, epsilon, gauge, samples);
  out.certified = out.premises.ok();
  out.C = eps_times<S>(chain_coefficient<S>(Equation::jensen_quadratic, beta), epsilon);

  const S one_plus = S(pow2_beta<S>(-1, beta) + S(1));
  const S poly = S(S(1) + pow2_beta<S>(1, beta) + S(2) * pow2_beta<S>(-1, beta) + S(2) * pow2_beta<S>(-2, beta));

  Accumulator<S> zero("zero_value", S(epsilon * pow2_beta<S>(-1, beta)));
  Accumulator<S> sym("halving_symmetric", S(one_plus * epsilon));
  Accumulator<S> quad("halving_quadratic", S(one_plus * epsilon));
  Accumulator<S> even("evenness", S(S(2) * pow2_beta<S>(-1, beta) * one_plus * epsilon));
  Accumulator<S> scale4("scale4_identity", S(poly * epsilon));
  Accumulator<S> d38("defect_38", out.C);

  const std::size_t dim = f.domain_dim();
  const Tracked<S> f0 = eval<S>(f, Vec<S>(dim, S(0)));
  zero.add(measure<S>(gauge, f0), "x = 0");

  for (const auto& z : samples.points) {
    const std::string where = "x = " + fmt<S>(z);
    const Tracked<S> fz = eval<S>(f, z);
    const Tracked<S> fmz = eval<S>(f, neg<S>(z));
    const Vec<S> h = halved<S>(z);
    const Tracked<S> fh = eval<S>(f, h);
    const Tracked<S> fmh = eval<S>(f, neg<S>(h));
    const Tracked<S> f2 = eval<S>(f, pow2<S>(z, 1));
    const Vec<S> z4 = pow2<S>(z, 2);
    const Tracked<S> f4 = eval<S>(f, z4);
    const Tracked<S> fm4 = eval<S>(f, neg<S>(z4));
    sym.add(measure<S>(gauge, combine<S>({{S(2), &fh}, {S(2), &fmh}, {S(-1), &fz}})), where);
    quad.add(measure<S>(gauge, combine<S>({{S(4), &fh}, {S(-1), &fz}})), where);
    even.add(measure<S>(gauge, combine<S>({{S(1), &fz}, {S(-1), &fmz}})), where);
    scale4.add(measure<S>(gauge, combine<S>({{S(3), &f4}, {S(-8), &f2}, {S(-1), &fm4}})), where);
    d38.add(defect_38<S>(f, std::span<const S>(z), gauge), where);
  }
  out.chain.checks = {zero.result(), sym.result(), quad.result(), even.result(), scale4.result(), d38.result()};
  return out;
}

// ---- conclusion and uniqueness ---------------------------------------------

template <class S>
ConclusionDefect<S> verify_conclusion(const VectorFn<S>& g_eval, Equation eq, const OrthoRelation& relation,
                                      const std::vector<PointPair<S>>& pairs, const Gauge& gauge) {
  ConclusionDefect<S> out{{S(0), 0.0}, {}, {}};
  bool first = true;
  for (const auto& [x, y] : pairs) {
    if (!relation(x, y)) continue;
    const Tracked<S> gx = g_eval(x);
    const Tracked<S> gy = g_eval(y);
    const Tracked<S> gp = g_eval(halved<S>(sum<S>(x, y)));
    Measured<S> m;
    if (eq == Equation::jensen_additive) {
      m = measure<S>(gauge, combine<S>({{S(2), &gp}, {S(-1), &gx}, {S(-1), &gy}}));
    } else {
      const Tracked<S> gm = g_eval(halved<S>(diff<S>(x, y)));
      m = measure<S>(gauge, combine<S>({{S(2), &gp}, {S(2), &gm}, {S(-1), &gx}, {S(-1), &gy}}));
    }
    out.max.slack = std::max(out.max.slack, m.slack);
    if (first || m.value > out.max.value) {
      out.max.value = m.value;
      out.witness_x = to_doubles<S>(std::span<const S>(x));
      out.witness_y = to_doubles<S>(std::span<const S>(y));
      first = false;
    }
  }
  return out;
}

template <class S>
Measured<S> uniqueness_probe(const EvaluableMap& f, const std::vector<Vec<S>>& points, int n1, int n2,
                             const Gauge& gauge) {
  if (n1 < 1 || n2 < n1) throw InputError("uniqueness_probe needs 1 <= n1 <= n2");
  Measured<S> out{S(0), 0.0};
  for (const auto& x : points) {
    const Tracked<S> a = g_n<S>(f, std::span<const S>(x), n1);
    const Tracked<S> b = g_n<S>(f, std::span<const S>(x), n2);
    const Measured<S> m = measure<S>(gauge, combine<S>({{S(1), &a}, {S(-1), &b}}));
    if (m.value > out.value) out.value = m.value;
    out.slack = std::max(out.slack, m.slack);
  }
  return out;
}

template <class S>
S uniqueness_bound(const S& C, int n1, int n2, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    Rational acc(0);
    for (int m = n1; m < n2; ++m) acc += cauchy_gap_exact(m);
    return C * acc;
  } else {
    return n2 <= n1 ? 0.0 : up(C * gap_sum_upper(n1, n2, beta));
  }
}

// ---- pipeline ----------------------------------------------------------------

void validate(const StabilityConfig& c, const EvaluableMap& f) {
  if (!std::isfinite(c.epsilon) || c.epsilon < 0.0) throw ConfigError("stability.epsilon must be finite and >= 0");
  if (!std::isfinite(c.beta) || !(c.beta > 0.0) || c.beta > 1.0)
    throw ConfigError("stability.beta must lie in (0, 1]");
  if (c.sample_count < 1) throw ConfigError("stability.sample_count must be >= 1");
  if (c.n_max < 1 || c.n_max > 500) throw ConfigError("stability.n_max must lie in [1, 500]");
  if (c.point_scale_log2 < 0 || c.point_scale_log2 > 16)
    throw ConfigError("stability.point_scale_log2 must lie in [0, 16]");
  if (c.relation.dimension() != f.domain_dim())
    throw ConfigError("relation.dimension must equal space.dimension");
  if (c.quasi_corollary) {
    if (c.gauge.kind() != GaugeKind::lp_quasi)
      throw ConfigError("stability.quasi_corollary needs an lp-quasi gauge");
    if (std::fabs(c.gauge.p() - c.beta) > 1e-15)
      throw ConfigError("stability.beta must equal gauge.p when quasi_corollary is set");
    if (c.mode != ScalarBackend::float64)
      throw ConfigError("stability.quasi_corollary runs in float64 mode only");
  } else {
    if (!c.gauge.is_fnorm()) throw ConfigError("gauge must be an F-norm (use quasi_corollary for lp-quasi)");
    if (std::fabs(c.gauge.homogeneity() - c.beta) > 1e-15)
      throw ConfigError("stability.beta must equal the gauge homogeneity " + format_number(c.gauge.homogeneity()));
  }
  if (c.mode == ScalarBackend::exact_rational) {
    if (!c.gauge.supports_exact() || c.beta != 1.0)
      throw ConfigError("rational mode needs gauge beta-sum with beta = 1");
    if (c.relation.kind() == RelationKind::isosceles)
      throw ConfigError("rational mode cannot sample isosceles-orthogonal pairs exactly");
    if (!f.supports(ScalarBackend::exact_rational)) throw ConfigError("map has no exact-rational implementation");
  } else if (!f.supports(ScalarBackend::float64)) {
    throw ConfigError("map has no float64 implementation");
  }
}

namespace {

template <class S>
StabilityReport run_impl(const StabilityConfig& c, const EvaluableMap& f) {
  StabilityReport r;
  r.equation = to_string(c.equation);
  r.mode = to_string(c.mode);
  r.gauge = c.gauge.describe();
  r.relation = c.relation.describe();
  r.epsilon = c.epsilon;
  r.quasi_corollary = c.quasi_corollary;
  r.sample_count = c.sample_count;
  r.n_max = c.n_max;
  r.seed = c.seed;

  const double p = c.quasi_corollary ? c.gauge.p() : 1.0;
  const Gauge gauge = c.quasi_corollary ? p_power_transform(c.gauge, p) : c.gauge;
  const double beta = c.beta;
  r.beta = beta;
  const S eps = c.quasi_corollary ? S(std::pow(c.epsilon, p)) : ScalarTraits<S>::from_double(c.epsilon);
  r.epsilon_effective = to_double(eps);

  const std::size_t d = f.domain_dim();
  const int shift = c.point_scale_log2;

  // Orthogonal pairs, scaled onto the requested doubling level.
  std::vector<PointPair<S>> pairs = sample_pairs<S>(c.relation, c.sample_count, c.seed);
  for (auto& [x, y] : pairs) {
    x = pow2<S>(x, shift);
    y = pow2<S>(y, shift);
  }

  SplitMix64 rng(c.seed ^ 0xA5A5A5A55A5A5A5AULL);
  std::vector<Vec<S>> base_points;
  base_points.reserve(c.sample_count);
  for (std::size_t i = 0; i < c.sample_count; ++i) base_points.push_back(pow2<S>(random_point<S>(rng, d), shift));

  if (c.equation == Equation::jensen_quadratic) {
    const Vec<S> zero(d, S(0));
    std::size_t rejected = 0;
    auto push = [&](const Vec<S>& a, const Vec<S>& b) {
      if (c.relation(a, b))
        pairs.emplace_back(a, b);
      else
        ++rejected;
    };
    push(zero, zero);
    for (const auto& z : base_points) {
      push(zero, z);
      push(z, zero);
    }
    if (rejected > 0)
      r.warnings.push_back("relation rejected " + std::to_string(rejected) +
                           " of the forced (0,0), (0,x), (x,0) pairs; the quadratic chain is not covered by the premise");
  }

  const PremiseSamples<S> samples{pairs, base_points};
  const DerivedC<S> dc = c.equation == Equation::jensen_additive
                             ? derive_C_additive<S>(f, eps, beta, gauge, samples)
                             : derive_C_quadratic<S>(f, eps, beta, gauge, samples);
  r.premises = dc.premises;
  r.premise_max_defect = c.quasi_corollary ? std::pow(dc.premises.max_defect, 1.0 / p) : dc.premises.max_defect;
  r.chain = dc.chain;
  r.C_certified = dc.certified;
  r.derived_C = to_double(dc.C);
  const S C = dc.C;

  const S K = stability_constant<S>(c.equation, beta);
  const S k_eps = eps_times<S>(K, eps);
  if (c.quasi_corollary) {
    r.K_interval = c.equation == Equation::jensen_additive ? K_add_p(p) : K_quad_p(p);
    r.K = r.K_interval.upper;
  } else if constexpr (ScalarTraits<S>::exact) {
    r.K = to_double(K);
    r.K_interval = {r.K, r.K};
  } else {
    r.K_interval = stability_interval(c.equation, beta, 1e-12);
    r.K = r.K_interval.upper;
  }
  const auto to_reported = [&](double v) { return c.quasi_corollary ? std::pow(v, 1.0 / p) : v; };
  r.K_epsilon = to_reported(to_double(k_eps));

  // Per-sample corrector limits at x = 2z.
  std::vector<Vec<S>> xs;
  xs.reserve(base_points.size());
  for (const auto& z : base_points) xs.push_back(pow2<S>(z, 1));

  struct Local {
    SampleRow row;
    CorrectorTrace trace;
  };
  std::vector<Local> local(xs.size());
  parallel_for(xs.size(), c.threads, [&](std::size_t i) {
    const auto& x = xs[i];
    CorrectorResult<S> g = corrector_limit<S>(f, std::span<const S>(x), beta, C, gauge, c.n_max);
    const Tracked<S> fx = eval<S>(f, x);
    const Measured<S> m = measure<S>(gauge, combine<S>({{S(1), &fx}, {S(-1), &g.value}}));
    SampleRow& row = local[i].row;
    row.point = to_doubles<S>(std::span<const S>(x));
    const S denom_exact = S(k_eps + g.residual_bound);
    if constexpr (ScalarTraits<S>::exact) {
      row.within = m.value <= denom_exact;
      row.ratio = sgn(denom_exact) == 0 ? (sgn(m.value) == 0 ? 0.0 : kInf) : Rational(m.value / denom_exact).get_d();
    } else {
      const double denom = denom_exact + m.slack;
      row.within = m.value <= denom;
      row.ratio = denom == 0.0 ? (m.value == 0.0 ? 0.0 : kInf) : m.value / denom;
    }
    row.value = to_reported(to_double(m.value));
    row.bound = r.K_epsilon;
    row.residual = to_reported(to_double(g.residual_bound));
    if (c.quasi_corollary) row.ratio = std::pow(row.ratio, 1.0 / p);
    local[i].trace = std::move(g.trace);
  });

  for (auto& l : local) {
    r.per_sample.push_back(l.row);
    r.max_ratio = std::max(r.max_ratio, l.row.ratio);
    r.all_within_bound = r.all_within_bound && l.row.within;
    if (!l.trace.hypothesis_ok) {
      r.hypothesis_ok = false;
      for (const auto& v : l.trace.hypothesis_violations)
        if (r.hypothesis_violations.size() < 10)
          r.hypothesis_violations.push_back("x = " + format_vector(l.trace.point) + ": " + v);
    }
    for (const auto& w : l.trace.warnings)
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
  }

  // Conclusion equation for g_{n_max} on the orthogonal pairs.
  const VectorFn<S> g_eval = [&](const Vec<S>& x) { return g_n<S>(f, std::span<const S>(x), c.n_max); };
  const ConclusionDefect<S> cd = verify_conclusion<S>(g_eval, c.equation, c.relation, pairs, gauge);
  const S conclusion_bound = S(cauchy_gap_as<S>(c.n_max, beta) * eps);
  r.conclusion_ok = within<S>(cd.max, conclusion_bound);
  r.conclusion_max_defect = to_reported(to_double(cd.max.value));
  r.conclusion_bound = to_reported(to_double(conclusion_bound));

  // Uniqueness probe between two corrector depths.
  r.uniqueness_n1 = std::max(1, c.n_max / 2);
  r.uniqueness_n2 = c.n_max;
  const Measured<S> ug = uniqueness_probe<S>(f, xs, r.uniqueness_n1, r.uniqueness_n2, gauge);
  const S ub = uniqueness_bound<S>(C, r.uniqueness_n1, r.uniqueness_n2, beta);
  r.uniqueness_ok = within<S>(ug, ub);
  r.uniqueness_gap = to_reported(to_double(ug.value));
  r.uniqueness_bound = to_reported(to_double(ub));
  return r;
}

}  // namespace

StabilityReport run_stability(const StabilityConfig& config, const EvaluableMap& f) {
  validate(config, f);
  if (config.mode == ScalarBackend::exact_rational) return run_impl<Rational>(config, f);
  return run_impl<double>(config, f);
}

// ---- serialisation -----------------------------------------------------------

namespace {

nlohmann::json check_json(const InequalityCheck& c) {
  return {{"name", c.name},   {"bound", c.bound},       {"max_value", c.max_value}, {"checked", c.checked},
          {"failures", c.failures}, {"witness", c.witness}, {"pass", c.pass()}};
}

double finite_or_max(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::max(); }

}  // namespace

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& c : r.chain.checks) chain.push_back(check_json(c));
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : r.per_sample)
    rows.push_back({{"point", s.point},
                    {"value", s.value},
                    {"bound", s.bound},
                    {"residual_bound", s.residual},
                    {"ratio", finite_or_max(s.ratio)},
                    {"within", s.within}});
  return {
      {"equation", r.equation},
      {"mode", r.mode},
      {"gauge", r.gauge},
      {"relation", r.relation},
      {"epsilon", r.epsilon},
      {"epsilon_effective", r.epsilon_effective},
      {"beta", r.beta},
      {"quasi_corollary", r.quasi_corollary},
      {"sample_count", r.sample_count},
      {"n_max", r.n_max},
      {"seed", r.seed},
      {"premises",
       {{"ok", r.premises.ok()},
        {"max_defect", r.premise_max_defect},
        {"pairs_checked", r.premises.pairs_checked},
        {"points_checked", r.premises.points_checked},
        {"violations", r.premises.violations},
        {"witnesses", r.premises.witnesses}}},
      {"premise_max_defect", r.premise_max_defect},
      {"chain", chain},
      {"chain_ok", r.chain.pass()},
      {"derived_C", r.derived_C},
      {"C_certified", r.C_certified},
      {"K", r.K},
      {"K_interval", {r.K_interval.lower, r.K_interval.upper}},
      {"K_epsilon", r.K_epsilon},
      {"max_ratio", finite_or_max(r.max_ratio)},
      {"all_within_bound", r.all_within_bound},
      {"hypothesis_ok", r.hypothesis_ok},
      {"hypothesis_violations", r.hypothesis_violations},
      {"conclusion_max_defect", r.conclusion_max_defect},
      {"conclusion_bound", r.conclusion_bound},
      {"conclusion_ok", r.conclusion_ok},
      {"uniqueness", {{"n1", r.uniqueness_n1}, {"n2", r.uniqueness_n2}, {"gap", r.uniqueness_gap},
                      {"bound", r.uniqueness_bound}, {"ok", r.uniqueness_ok}}},
      {"uniqueness_gap", r.uniqueness_gap},
      {"warnings", r.warnings},
      {"per_sample", rows},
  };
}

std::string samples_csv(const StabilityReport& r) {
  std::ostringstream os;
  const std::size_t d = r.per_sample.empty() ? 0 : r.per_sample.front().point.size();
  for (std::size_t i = 0; i < d; ++i) os << 'x' << i << ',';
  os << "value,bound,ratio,residual_bound\n";
  for (const auto& s : r.per_sample) {
    for (double v : s.point) os << format_number(v) << ',';
    os << format_number(s.value) << ',' << format_number(s.bound) << ',' << format_number(s.ratio) << ','
       << format_number(s.residual) << '\n';
  }
  return os.str();
}

std::string summary_text(const StabilityReport& r) {
  std::ostringstream os;
  auto yes = [](bool b) { return b ? "yes" : "NO"; };
  os << "equation          " << r.equation << (r.quasi_corollary ? " (p-power corollary)" : "") << '\n'
     << "mode              " << r.mode << '\n'
     << "gauge             " << r.gauge << '\n'
     << "relation          " << r.relation << '\n'
     << "beta              " << format_number(r.beta) << '\n'
     << "epsilon           " << format_number(r.epsilon) << '\n'
     << "samples           " << r.sample_count << " (n_max " << r.n_max << ", seed " << r.seed << ")\n"
     << "premises hold     " << yes(r.premises.ok()) << "  max defect " << format_number(r.premise_max_defect)
     << " over " << r.premises.pairs_checked << " pairs, " << r.premises.points_checked << " points\n";
  for (const auto& w : r.premises.witnesses) os << "  violation: " << w << '\n';
  os << "chain             " << yes(r.chain.pass()) << '\n';
  for (const auto& c : r.chain.checks)
    os << "  " << c.name << ": max " << format_number(c.max_value) << " <= " << format_number(c.bound) << "  "
       << (c.pass() ? "ok" : "FAIL (" + std::to_string(c.failures) + ")") << '\n';
  os << "C                 " << format_number(r.derived_C) << (r.C_certified ? "" : " (uncertified)") << '\n'
     << "K                 " << format_number(r.K) << "  [" << format_number(r.K_interval.lower) << ", "
     << format_number(r.K_interval.upper) << "]\n"
     << "K * epsilon       " << format_number(r.K_epsilon) << '\n'
     << "max ratio         " << format_number(r.max_ratio) << '\n'
     << "all within bound  " << yes(r.all_within_bound) << '\n'
     << "D <= C on scales  " << yes(r.hypothesis_ok) << '\n';
  for (const auto& v : r.hypothesis_violations) os << "  " << v << '\n';
  os << "conclusion defect " << format_number(r.conclusion_max_defect) << " <= "
     << format_number(r.conclusion_bound) << "  " << (r.conclusion_ok ? "ok" : "FAIL") << '\n'
     << "uniqueness gap    " << format_number(r.uniqueness_gap) << " <= " << format_number(r.uniqueness_bound)
     << " (n " << r.uniqueness_n1 << " vs " << r.uniqueness_n2 << ")  " << (r.uniqueness_ok ? "ok" : "FAIL") << '\n';
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

#define ORTHOSTAB_INSTANTIATE(S)                                                                                 \
  template S stability_constant<S>(Equation, double);                                                          \
  template S chain_coefficient<S>(Equation, double);                                                           \
  template PremiseReport check_premises<S>(const EvaluableMap&, Equation, const S&, const Gauge&,                \
                                           const PremiseSamples<S>&);                                           \
  template DerivedC<S> derive_C_additive<S>(const EvaluableMap&, const S&, double, const Gauge&,               \
                                            const PremiseSamples<S>&);                                          \
  template DerivedC<S> derive_C_quadratic<S>(const EvaluableMap&, const S&, double, const Gauge&,              \
                                             const PremiseSamples<S>&);                                         \
  template ConclusionDefect<S> verify_conclusion<S>(const VectorFn<S>&, Equation, const OrthoRelation&,         \
                                                    const std::vector<PointPair<S>>&, const Gauge&);            \
  template Measured<S> uniqueness_probe<S>(const EvaluableMap&, const std::vector<Vec<S>>&, int, int,          \
                                           const Gauge&);                                                      \
  template S uniqueness_bound<S>(const S&, int, int, double);

ORTHOSTAB_INSTANTIATE(double)
ORTHOSTAB_INSTANTIATE(Rational)

#undef ORTHOSTAB_INSTANTIATE

}  // namespace orthostab
