#include "orthostab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orthostab {

std::string to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::euclidean: return "euclidean";
    case GaugeKind::beta_sum: return "beta-sum";
    case GaugeKind::lp_quasi: return "lp-quasi";
    case GaugeKind::p_power_of: return "p-power-of";
  }
  return "unknown";
}

Gauge Gauge::euclidean() { return Gauge(GaugeKind::euclidean, 1.0, 1.0, nullptr); }

Gauge Gauge::beta_sum(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ConfigError("beta-sum gauge needs beta > 0 (got " + format_number(beta) + ")");
  return Gauge(GaugeKind::beta_sum, beta, 1.0, nullptr);
}

Gauge Gauge::lp_quasi(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("lp-quasi gauge needs 0 < p < 1 (got " + format_number(p) + ")");
  return Gauge(GaugeKind::lp_quasi, 1.0, p, nullptr);
}

Gauge p_power_transform(const Gauge& gauge, double p) {
  if (gauge.kind() != GaugeKind::lp_quasi)
    throw ConfigError("p-power transform applies to lp-quasi gauges, got " + to_string(gauge.kind()));
  if (p != gauge.p())
    throw ConfigError("p-power transform: p = " + format_number(p) + " does not match gauge p = " +
                      format_number(gauge.p()));
  return Gauge(GaugeKind::p_power_of, 1.0, p, std::make_shared<const Gauge>(gauge));
}

double Gauge::homogeneity() const {
  switch (kind_) {
    case GaugeKind::euclidean: return 1.0;
    case GaugeKind::beta_sum: return beta_;
    case GaugeKind::lp_quasi: return 1.0;
    case GaugeKind::p_power_of: return p_ * base_->homogeneity();
  }
  return 1.0;
}

double Gauge::quasi_constant() const {
  if (kind_ == GaugeKind::lp_quasi) return std::exp2(1.0 / p_ - 1.0);
  if (kind_ == GaugeKind::beta_sum && beta_ > 1.0) return std::numeric_limits<double>::infinity();
  return 1.0;
}

bool Gauge::is_fnorm() const {
  switch (kind_) {
    case GaugeKind::euclidean: return true;
    case GaugeKind::beta_sum: return beta_ <= 1.0;
    case GaugeKind::lp_quasi: return false;
    case GaugeKind::p_power_of: return true;
  }
  return false;
}

namespace {

double power_sum(std::span<const double> y, double exponent) {
  double acc = 0.0;
  if (exponent == 1.0) {
    for (double v : y) acc += std::fabs(v);
  } else {
    for (double v : y) acc += std::pow(std::fabs(v), exponent);
  }
  return acc;
}

}  // namespace

double Gauge::evaluate(std::span<const double> y) const {
  for (double v : y)
    if (!std::isfinite(v)) throw RangeError("gauge evaluated at a non-finite vector");
  switch (kind_) {
    case GaugeKind::euclidean: {
      double acc = 0.0;
      for (double v : y) acc += v * v;
      return std::sqrt(acc);
    }
    case GaugeKind::beta_sum: return power_sum(y, beta_);
    case GaugeKind::lp_quasi: return std::pow(power_sum(y, p_), 1.0 / p_);
    case GaugeKind::p_power_of:
      // (sum |y_i|^p)^(1/p) raised to p, without the round trip.
      return power_sum(y, p_);
  }
  return 0.0;
}

bool Gauge::supports_exact() const {
  return kind_ == GaugeKind::beta_sum && beta_ == std::floor(beta_) && beta_ <= 64.0;
}

Rational Gauge::evaluate(std::span<const Rational> y) const {
  if (!supports_exact())
    throw ConfigError("gauge " + describe() +
                      " has no exact evaluation (exact mode needs beta-sum with integer beta)");
  const auto k = static_cast<unsigned long>(beta_);
  Rational acc(0);
  for (const auto& v : y) {
    Rational a = ::abs(v);
    Rational term(1);
    for (unsigned long i = 0; i < k; ++i) term *= a;
    acc += term;
  }
  return acc;
}

std::string Gauge::describe() const {
  switch (kind_) {
    case GaugeKind::euclidean: return "euclidean";
    case GaugeKind::beta_sum: return "beta-sum(beta=" + format_number(beta_) + ")";
    case GaugeKind::lp_quasi: return "lp-quasi(p=" + format_number(p_) + ")";
    case GaugeKind::p_power_of: return "p-power-of(" + base_->describe() + ", p=" + format_number(p_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// F-norm axioms

namespace {

bool relatively_equal(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), std::numeric_limits<double>::min()});
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

struct LimitWalk {
  bool monotone = true;
  bool reached = false;
  double last = 0.0;
  int steps = 0;
};

// Walks n = 1..max_terms while the gauge value stays non-increasing, stopping
// once it drops below the limit threshold. `point(n, lambda_n)` yields the
// vector whose gauge is measured.
template <class PointFn>
LimitWalk walk_to_zero(const Gauge& gauge, const ScalarSequence& seq, PointFn point) {
  LimitWalk walk;
  double lambda = seq.first;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= seq.max_terms; ++n) {
    const Vec<double> v = point(lambda);
    const double value = gauge.evaluate(v);
    walk.steps = n;
    walk.last = value;
    if (value > prev * (1.0 + kAlgebraicTol)) walk.monotone = false;
    prev = value;
    if (value < kLimitThreshold) {
      walk.reached = true;
      break;
    }
    lambda *= seq.ratio;
    if (lambda == 0.0) break;
  }
  return walk;
}

std::string pair_witness(const Vec<double>& a, const Vec<double>& b) {
  return "y1=" + format_vector(a) + " y2=" + format_vector(b);
}

}  // namespace

AxiomReport check_fnorm_axioms(const Gauge& gauge, std::span<const FnormSample> samples) {
  if (samples.empty()) throw InputError("check_fnorm_axioms needs at least one sample");

  AxiomCheck zero{"(1) ||x|| = 0 iff x = 0", true, "", 0.0, ""};
  AxiomCheck unit{"(2) ||lambda x|| = ||x|| for |lambda| = 1", true, "", 0.0, "lambda in {1, -1}"};
  AxiomCheck triangle{"(3) ||x + y|| <= ||x|| + ||y||", true, "", -std::numeric_limits<double>::infinity(),
                      "worst_value = (lhs - rhs) / max(rhs, tiny)"};
  AxiomCheck scalar_null{"(4) ||lambda_n x|| -> 0 as lambda_n -> 0", true, "", 0.0,
                         "worst_value = final gauge value along the sequence"};
  AxiomCheck vector_null{"(5) ||lambda x_n|| -> 0 as x_n -> 0", true, "", 0.0,
                         "worst_value = final gauge value along the sequence"};
  AxiomCheck joint_null{"(6) ||lambda_n x_n|| -> 0 as lambda_n, x_n -> 0", true, "", 0.0,
                        "worst_value = final gauge value along the sequence"};

  const std::size_t dim = samples.front().y1.size();
  const Vec<double> origin(dim, 0.0);
  const double at_zero = gauge.evaluate(origin);
  if (at_zero != 0.0) {
    zero.pass = false;
    zero.worst_witness = "x=" + format_vector(origin);
    zero.worst_value = at_zero;
  }
  double min_nonzero = std::numeric_limits<double>::infinity();

  auto check_limit = [&](AxiomCheck& check, const LimitWalk& walk, const std::string& witness) {
    if (walk.last >= check.worst_value) {
      check.worst_value = walk.last;
      if (check.pass) check.worst_witness = witness;
    }
    if (!walk.monotone || !walk.reached) {
      if (check.pass) check.worst_witness = witness;
      check.pass = false;
    }
  };

  for (const auto& s : samples) {
    if (s.y1.size() != dim || s.y2.size() != dim) throw InputError("F-norm samples have mixed dimensions");
    for (const Vec<double>* y : {&s.y1, &s.y2}) {
      const double value = gauge.evaluate(*y);
      const bool is_zero = is_zero_vector<double>(*y);
      if (is_zero != (value == 0.0)) {
        zero.pass = false;
        zero.worst_witness = "x=" + format_vector(*y);
        zero.worst_value = value;
      }
      if (!is_zero) min_nonzero = std::min(min_nonzero, value);

      const double flipped = gauge.evaluate(negated<double>(*y));
      const double gap = relative_gap(flipped, value);
      if (gap > unit.worst_value) {
        unit.worst_value = gap;
        unit.worst_witness = "x=" + format_vector(*y);
      }
      if (!relatively_equal(flipped, value, kAlgebraicTol)) unit.pass = false;
    }

    const double lhs = gauge.evaluate(added<double>(s.y1, s.y2));
    const double rhs = gauge.evaluate(s.y1) + gauge.evaluate(s.y2);
    const double excess = (lhs - rhs) / std::max(rhs, std::numeric_limits<double>::min());
    if (excess > triangle.worst_value) {
      triangle.worst_value = excess;
      triangle.worst_witness = pair_witness(s.y1, s.y2);
    }
    if (lhs > rhs * (1.0 + kAlgebraicTol)) triangle.pass = false;

    const std::string witness = "x=" + format_vector(s.y1);
    check_limit(scalar_null, walk_to_zero(gauge, s.sequence, [&](double l) { return scaled<double>(s.y1, l); }),
                witness);
    check_limit(vector_null,
                walk_to_zero(gauge, s.sequence, [&](double l) { return scaled<double>(s.y1, l * s.scalar); }),
                witness + " lambda=" + format_number(s.scalar));
    check_limit(joint_null, walk_to_zero(gauge, s.sequence, [&](double l) { return scaled<double>(s.y1, l * l); }),
                witness);
  }
  if (zero.pass) zero.worst_value = std::isfinite(min_nonzero) ? min_nonzero : 0.0;
  if (triangle.pass && triangle.worst_witness.empty()) triangle.worst_value = 0.0;

  return AxiomReport{{zero, unit, triangle, scalar_null, vector_null, joint_null}};
}

std::vector<FnormSample> make_fnorm_samples(std::size_t dim, std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<FnormSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    FnormSample s;
    s.y1.resize(dim);
    s.y2.resize(dim);
    const double magnitude = std::exp2(rng.uniform(-6.0, 6.0));
    for (std::size_t k = 0; k < dim; ++k) {
      // Sparse coordinates make the axis-aligned extremes reachable.
      s.y1[k] = rng.unit() < 0.25 ? 0.0 : magnitude * rng.uniform(-1.0, 1.0);
      s.y2[k] = rng.unit() < 0.25 ? 0.0 : magnitude * rng.uniform(-1.0, 1.0);
    }
    if (i == 0) std::fill(s.y1.begin(), s.y1.end(), 0.0);
    s.scalar = rng.uniform(-8.0, 8.0);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// beta-homogeneity

AxiomReport check_beta_homogeneity(const Gauge& gauge, double beta,
                                   std::span<const HomogeneitySample<double>> samples) {
  AxiomCheck check{"beta-homogeneity ||t y|| = |t|^beta ||y||", true, "", 0.0,
                   "claimed beta = " + format_number(beta) + "; worst_value = relative gap"};
  for (const auto& s : samples) {
    const double lhs = gauge.evaluate(scaled<double>(s.y, s.t));
    const double rhs = std::pow(std::fabs(s.t), beta) * gauge.evaluate(s.y);
    const double gap = relative_gap(lhs, rhs);
    const bool ok = relatively_equal(lhs, rhs, kAlgebraicTol) || (lhs == 0.0 && rhs == 0.0);
    if (gap >= check.worst_value) {
      check.worst_value = gap;
      if (check.pass || !ok) check.worst_witness = "t=" + format_number(s.t) + " y=" + format_vector(s.y);
    }
    if (!ok) check.pass = false;
  }
  return AxiomReport{{check}};
}

AxiomReport check_beta_homogeneity(const Gauge& gauge, double beta,
                                   std::span<const HomogeneitySample<Rational>> samples) {
  if (beta != 1.0) throw ConfigError("exact homogeneity check supports beta = 1 only");
  AxiomCheck check{"beta-homogeneity ||t y|| = |t|^beta ||y||", true, "", 0.0, "exact rational comparison"};
  for (const auto& s : samples) {
    const Rational lhs = gauge.evaluate(scaled<Rational>(s.y, s.t));
    const Rational rhs = ::abs(s.t) * gauge.evaluate(s.y);
    if (lhs != rhs) {
      const double gap = std::fabs(Rational(lhs - rhs).get_d());
      if (check.pass || gap > check.worst_value) {
        check.worst_value = gap;
        check.worst_witness = "t=" + s.t.get_str() + " y=" + format_vector(to_doubles<Rational>(s.y));
      }
      check.pass = false;
    }
  }
  return AxiomReport{{check}};
}

std::vector<HomogeneitySample<double>> make_homogeneity_samples(std::size_t dim, std::size_t count,
                                                                std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<HomogeneitySample<double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    HomogeneitySample<double> s;
    s.y = random_point<double>(rng, dim);
    if (i == 0) {
      s.t = 1.0;
    } else {
      const double sign = rng.unit() < 0.5 ? -1.0 : 1.0;
      s.t = sign * std::exp2(rng.uniform(-10.0, 10.0));
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// quasi-constant

double estimate_quasi_constant(const Gauge& gauge,
                               std::span<const std::pair<Vec<double>, Vec<double>>> pairs) {
  double best = 1.0;
  bool any = false;
  for (const auto& [x, y] : pairs) {
    const double denom = gauge.evaluate(x) + gauge.evaluate(y);
    if (denom == 0.0) continue;
    const double ratio = gauge.evaluate(added<double>(x, y)) / denom;
    best = any ? std::max(best, ratio) : ratio;
    any = true;
  }
  return any ? best : 1.0;
}

double estimate_quasi_constant(const Gauge& gauge, std::size_t dim, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("estimate_quasi_constant needs trials >= 1");
  SplitMix64 rng(seed);
  double best = 0.0;
  bool any = false;
  Vec<double> x(dim), y(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = rng.unit() < 0.5 ? 0.0 : rng.uniform(-1.0, 1.0);
      y[k] = rng.unit() < 0.5 ? 0.0 : rng.uniform(-1.0, 1.0);
    }
    const double denom = gauge.evaluate(x) + gauge.evaluate(y);
    if (denom == 0.0) continue;
    const double ratio = gauge.evaluate(added<double>(x, y)) / denom;
    best = any ? std::max(best, ratio) : ratio;
    any = true;
  }
  return any ? best : 1.0;
}

}  // namespace orthostab
