#include "orthostab/orthogonality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace orthostab {

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::euclidean: return "euclidean";
    case RelationKind::isosceles: return "isosceles";
    case RelationKind::trivial_zero: return "trivial-zero";
  }
  return "unknown";
}

std::string to_string(AxiomSystem system) {
  switch (system) {
    case AxiomSystem::ratz_123: return "ratz-123";
    case AxiomSystem::fechner_sikorska: return "fechner-sikorska";
    case AxiomSystem::sec2_ab: return "sec2-ab";
    case AxiomSystem::sec3_ab_prime: return "sec3-ab-prime";
  }
  return "unknown";
}

AxiomSystem parse_axiom_system(const std::string& name) {
  if (name == "ratz-123") return AxiomSystem::ratz_123;
  if (name == "fechner-sikorska") return AxiomSystem::fechner_sikorska;
  if (name == "sec2-ab") return AxiomSystem::sec2_ab;
  if (name == "sec3-ab-prime") return AxiomSystem::sec3_ab_prime;
  throw ConfigError("unknown axiom system '" + name +
                    "' (expected ratz-123, fechner-sikorska, sec2-ab or sec3-ab-prime)");
}

OrthoRelation OrthoRelation::euclidean(std::size_t dim, double tolerance) {
  if (dim < 2) throw ConfigError("orthogonality relations need dimension >= 2");
  if (!(tolerance >= 0.0)) throw ConfigError("relation tolerance must be >= 0");
  return OrthoRelation(RelationKind::euclidean, dim, tolerance, std::nullopt);
}

OrthoRelation OrthoRelation::isosceles(std::size_t dim, Gauge gauge, double tolerance) {
  if (dim < 2) throw ConfigError("orthogonality relations need dimension >= 2");
  if (!(tolerance >= 0.0)) throw ConfigError("relation tolerance must be >= 0");
  return OrthoRelation(RelationKind::isosceles, dim, tolerance, std::move(gauge));
}

OrthoRelation OrthoRelation::trivial_zero(std::size_t dim) {
  if (dim < 2) throw ConfigError("orthogonality relations need dimension >= 2");
  return OrthoRelation(RelationKind::trivial_zero, dim, 0.0, std::nullopt);
}

void OrthoRelation::check_dims(std::size_t a, std::size_t b) const {
  if (a != dim_ || b != dim_)
    throw InputError("orthogonality test in dimension " + std::to_string(dim_) + " got vectors of size " +
                     std::to_string(a) + " and " + std::to_string(b));
}

bool OrthoRelation::is_orthogonal(std::span<const double> x, std::span<const double> y) const {
  check_dims(x.size(), y.size());
  switch (kind_) {
    case RelationKind::euclidean: {
      const double ip = dot<double>(x, y);
      const double scale = std::sqrt(dot<double>(x, x)) * std::sqrt(dot<double>(y, y));
      return std::fabs(ip) <= tolerance_ * scale;
    }
    case RelationKind::isosceles: {
      const double plus = gauge_->evaluate(added<double>(x, y));
      const double minus = gauge_->evaluate(subtracted<double>(x, y));
      return std::fabs(plus - minus) <= tolerance_ * (plus + minus);
    }
    case RelationKind::trivial_zero: return is_zero_vector<double>(x) || is_zero_vector<double>(y);
  }
  return false;
}

bool OrthoRelation::is_orthogonal(std::span<const Rational> x, std::span<const Rational> y) const {
  check_dims(x.size(), y.size());
  switch (kind_) {
    case RelationKind::euclidean: return sgn(dot<Rational>(x, y)) == 0;
    case RelationKind::isosceles:
      return gauge_->evaluate(added<Rational>(x, y)) == gauge_->evaluate(subtracted<Rational>(x, y));
    case RelationKind::trivial_zero: return is_zero_vector<Rational>(x) || is_zero_vector<Rational>(y);
  }
  return false;
}

std::string OrthoRelation::describe() const {
  std::string s = to_string(kind_) + " on R^" + std::to_string(dim_);
  if (gauge_) s += " with " + gauge_->describe();
  return s;
}

// ---------------------------------------------------------------------------
// samplers

namespace {

template <class S>
Vec<S> project_off(const Vec<S>& r, const Vec<S>& x) {
  const S xx = dot<S>(x, x);
  if (ScalarTraits<S>::is_zero(xx)) return r;
  const S c = dot<S>(r, x) / xx;
  Vec<S> y = r;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * x[i];
  return y;
}

template <class S>
Vec<S> nonzero_random_point(SplitMix64& rng, std::size_t dim) {
  for (;;) {
    Vec<S> x = random_point<S>(rng, dim);
    if (!is_zero_vector<S>(x)) return x;
  }
}

// Solves ||x + y|| = ||x - y|| for y = u + lambda x by bracketing and bisection.
Vec<double> isosceles_partner(const OrthoRelation& rel, const Vec<double>& x, const Vec<double>& u) {
  const Gauge& g = *rel.gauge();
  auto candidate = [&](double lambda) {
    Vec<double> y = u;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += lambda * x[i];
    return y;
  };
  auto phi = [&](double lambda) {
    const Vec<double> y = candidate(lambda);
    return g.evaluate(added<double>(x, y)) - g.evaluate(subtracted<double>(x, y));
  };
  double lo = -1.0, hi = 1.0;
  int expansions = 0;
  while (!(phi(lo) < 0.0 && phi(hi) > 0.0)) {
    if (++expansions > 60)
      throw SamplerError("isosceles sampler: no sign change of ||x+y|| - ||x-y|| for x=" + format_vector(x) +
                         " u=" + format_vector(u) + " within |lambda| <= 2^61");
    lo *= 2.0;
    hi *= 2.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = phi(mid);
    if (v == 0.0) {
      lo = hi = mid;
      break;
    }
    (v < 0.0 ? lo : hi) = mid;
  }
  Vec<double> y = candidate(0.5 * (lo + hi));
  if (!rel.is_orthogonal(x, y))
    throw SamplerError("isosceles sampler did not converge for x=" + format_vector(x) + " u=" + format_vector(u) +
                       " (residual " + format_number(phi(0.5 * (lo + hi))) + ")");
  return y;
}

template <class S>
std::vector<PointPair<S>> sample_impl(const OrthoRelation& rel, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InputError("sample_orthogonal_pairs needs count >= 1");
  const std::size_t d = rel.dimension();
  SplitMix64 rng(seed);
  std::vector<PointPair<S>> out;
  out.reserve(count);
  const Vec<S> zero(d, S(0));
  if (count == 1) {
    out.emplace_back(zero, zero);
    return out;
  }
  out.emplace_back(zero, nonzero_random_point<S>(rng, d));
  out.emplace_back(nonzero_random_point<S>(rng, d), zero);
  while (out.size() < count) {
    Vec<S> x = nonzero_random_point<S>(rng, d);
    Vec<S> r = nonzero_random_point<S>(rng, d);
    switch (rel.kind()) {
      case RelationKind::euclidean: out.emplace_back(x, project_off<S>(r, x)); break;
      case RelationKind::trivial_zero:
        if (out.size() % 2 == 0)
          out.emplace_back(zero, r);
        else
          out.emplace_back(x, zero);
        break;
      case RelationKind::isosceles:
        if constexpr (ScalarTraits<S>::exact) {
          throw SamplerError("isosceles pairs cannot be sampled exactly; use float64 mode");
        } else {
          out.emplace_back(x, isosceles_partner(rel, x, r));
        }
        break;
    }
    if (!rel.is_orthogonal(std::span<const S>(out.back().first), std::span<const S>(out.back().second)))
      throw SamplerError("sampled pair failed the orthogonality test for " + rel.describe());
  }
  return out;
}

}  // namespace

std::vector<PointPair<double>> sample_orthogonal_pairs(const OrthoRelation& rel, std::size_t count,
                                                       std::uint64_t seed) {
  return sample_impl<double>(rel, count, seed);
}

std::vector<PointPair<Rational>> sample_orthogonal_pairs_exact(const OrthoRelation& rel, std::size_t count,
                                                               std::uint64_t seed) {
  return sample_impl<Rational>(rel, count, seed);
}

RelationSamples make_relation_samples(const OrthoRelation& rel, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InputError("make_relation_samples needs count >= 1");
  const std::size_t d = rel.dimension();
  SplitMix64 rng(seed ^ 0x5eed5eedULL);
  RelationSamples s;
  s.points.emplace_back(d, 0.0);
  Vec<double> e1(d, 0.0);
  e1[0] = 1.0;
  s.points.push_back(e1);
  while (s.points.size() < count + 2) s.points.push_back(nonzero_random_point<double>(rng, d));
  s.pairs = sample_orthogonal_pairs(rel, std::max<std::size_t>(count, 2), seed);
  s.scalars = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {-1.0, -1.0}, {2.0, 2.0}, {-3.5, 0.25}};
  for (std::size_t i = 0; i < 10; ++i) s.scalars.emplace_back(rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0));
  s.lambdas = {0.0, 1.0, 0.5, 2.0, 10.0};
  for (std::size_t i = 0; i < 5; ++i) s.lambdas.push_back(rng.uniform(0.0, 16.0));
  return s;
}

// ---------------------------------------------------------------------------
// axiom systems

namespace {

std::string pair_text(const Vec<double>& x, const Vec<double>& y) {
  return "x=" + format_vector(x) + " y=" + format_vector(y);
}

void fail(AxiomCheck& check, std::string witness) {
  if (check.pass) check.worst_witness = std::move(witness);
  check.pass = false;
  check.worst_value += 1.0;  // number of failing instances
}

AxiomCheck counting_check(std::string name) {
  return AxiomCheck{std::move(name), true, "", 0.0, "worst_value = number of failing instances"};
}

Vec<double> euclid_unit_perp(const Vec<double>& x, const Vec<double>& u) {
  Vec<double> w = project_off<double>(u, x);
  const double n = std::sqrt(dot<double>(w, w));
  if (n == 0.0) return w;
  for (auto& v : w) v /= n;
  return w;
}

// A perpendicular direction to x, from the standard basis.
Vec<double> some_perp(const Vec<double>& x) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    Vec<double> e(x.size(), 0.0);
    e[k] = 1.0;
    Vec<double> w = euclid_unit_perp(x, e);
    if (dot<double>(w, w) > 0.25) return w;
  }
  return Vec<double>(x.size(), 0.0);
}

bool fs_condition(const OrthoRelation& rel, const Vec<double>& x, const Vec<double>& y) {
  return rel(x, y) && rel(added<double>(x, y), subtracted<double>(x, y));
}

// Constructive witnesses for "exists y: x _|_ y and x+y _|_ x-y".
std::vector<Vec<double>> fs_candidates(const OrthoRelation& rel, const Vec<double>& x) {
  std::vector<Vec<double>> out;
  if (is_zero_vector<double>(x)) return out;
  const double xn = std::sqrt(dot<double>(x, x));
  const Vec<double> w = some_perp(x);
  if (rel.kind() == RelationKind::euclidean) {
    out.push_back(scaled<double>(w, xn));
  } else if (rel.kind() == RelationKind::isosceles) {
    // y(theta) on the gauge sphere of radius ||x|| in span{x, w}; theta = 0
    // gives y = x, theta = pi gives y = -x, so ||x+y|| - ||x-y|| changes sign.
    const Gauge& g = *rel.gauge();
    const double target = g.evaluate(x);
    const double h = g.homogeneity();
    auto point = [&](double theta) {
      Vec<double> v(x.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(theta) * x[i] / xn + std::sin(theta) * w[i];
      const double s = std::pow(target / g.evaluate(v), 1.0 / h);
      return scaled<double>(v, s);
    };
    auto phi = [&](double theta) {
      const Vec<double> y = point(theta);
      return g.evaluate(added<double>(x, y)) - g.evaluate(subtracted<double>(x, y));
    };
    double lo = 0.0, hi = std::numbers::pi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    out.push_back(point(0.5 * (lo + hi)));
  }
  return out;
}

}  // namespace

AxiomReport check_relation_axioms(const OrthoRelation& rel, AxiomSystem system, const RelationSamples& samples) {
  AxiomReport report;
  const std::size_t d = rel.dimension();
  const Vec<double> zero(d, 0.0);

  auto closure_check = [&](bool include_mixed_signs) {
    AxiomCheck c = counting_check(include_mixed_signs ? "(1) x _|_ y => x _|_ -y, -x _|_ y, 2x _|_ 2y"
                                                      : "(b) x _|_ y => -x _|_ -y, 2x _|_ 2y");
    for (const auto& [x, y] : samples.pairs) {
      if (!rel(x, y)) continue;
      const Vec<double> nx = negated<double>(x), ny = negated<double>(y);
      const Vec<double> x2 = scaled<double>(x, 2.0), y2 = scaled<double>(y, 2.0);
      bool ok = rel(x2, y2);
      if (include_mixed_signs)
        ok = ok && rel(x, ny) && rel(nx, y);
      else
        ok = ok && rel(nx, ny);
      if (!ok) fail(c, pair_text(x, y));
    }
    return c;
  };

  switch (system) {
    case AxiomSystem::ratz_123: {
      AxiomCheck c1 = counting_check("(1) x _|_ 0 and 0 _|_ x");
      for (const auto& x : samples.points)
        if (!(rel(x, zero) && rel(zero, x))) fail(c1, "x=" + format_vector(x));

      AxiomCheck c2 = counting_check("(2) nonzero x _|_ y => x, y linearly independent");
      for (const auto& [x, y] : samples.pairs) {
        if (is_zero_vector<double>(x) || is_zero_vector<double>(y) || !rel(x, y)) continue;
        double minor = 0.0;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = i + 1; j < d; ++j) minor = std::max(minor, std::fabs(x[i] * y[j] - x[j] * y[i]));
        const double scale = std::sqrt(dot<double>(x, x) * dot<double>(y, y));
        if (minor <= 1e-9 * scale) fail(c2, pair_text(x, y));
      }

      AxiomCheck c3 = counting_check("(3) x _|_ y => alpha x _|_ beta y");
      for (const auto& [x, y] : samples.pairs) {
        if (!rel(x, y)) continue;
        for (const auto& [a, b] : samples.scalars)
          if (!rel(scaled<double>(x, a), scaled<double>(y, b)))
            fail(c3, pair_text(x, y) + " alpha=" + format_number(a) + " beta=" + format_number(b));
      }

      AxiomCheck c4 = counting_check("(4) exists y in P: x _|_ y and x+y _|_ lambda x - y");
      if (rel.kind() == RelationKind::euclidean) {
        c4.note += "; constructive: y = sqrt(lambda) |x| w with w a unit normal to x in P";
        SplitMix64 rng(0xa11ce);
        for (const auto& x : samples.points) {
          Vec<double> u = random_point<double>(rng, d);
          Vec<double> w = euclid_unit_perp(x, u);
          if (dot<double>(w, w) == 0.0) w = some_perp(x);
          const double xn = std::sqrt(dot<double>(x, x));
          for (double lambda : samples.lambdas) {
            const Vec<double> y = scaled<double>(w, std::sqrt(lambda) * xn);
            const Vec<double> lhs = added<double>(x, y);
            const Vec<double> rhs = subtracted<double>(scaled<double>(x, lambda), y);
            if (!(rel(x, y) && rel(lhs, rhs)))
              fail(c4, "x=" + format_vector(x) + " lambda=" + format_number(lambda));
          }
        }
      } else {
        c4.note = "not checked: existential over two-dimensional subspaces, verified for euclidean only";
      }
      report.checks = {c1, c2, c3, c4};
      break;
    }
    case AxiomSystem::fechner_sikorska: {
      AxiomCheck c1 = closure_check(true);
      AxiomCheck c2 = counting_check("(2) for every x exists y: x _|_ y and x+y _|_ x-y");
      c2.note += "; search over constructive candidates, 0 and all sampled points";
      for (const auto& x : samples.points) {
        bool found = fs_condition(rel, x, zero);
        for (const auto& y : fs_candidates(rel, x))
          if (!found && fs_condition(rel, x, y)) found = true;
        for (const auto& y : samples.points)
          if (!found && fs_condition(rel, x, y)) found = true;
        for (const auto& [a, b] : samples.pairs)
          if (!found && (fs_condition(rel, x, a) || fs_condition(rel, x, b))) found = true;
        if (!found) fail(c2, "x=" + format_vector(x));
      }
      report.checks = {c1, c2};
      break;
    }
    case AxiomSystem::sec2_ab:
    case AxiomSystem::sec3_ab_prime: {
      const bool both = system == AxiomSystem::sec3_ab_prime;
      AxiomCheck ca = counting_check(both ? "(a') 0 _|_ x and x _|_ 0" : "(a) 0 _|_ x or x _|_ 0");
      for (const auto& x : samples.points) {
        const bool left = rel(zero, x), right = rel(x, zero);
        if (!(both ? (left && right) : (left || right))) fail(ca, "x=" + format_vector(x));
      }
      AxiomCheck cb = closure_check(false);
      if (both) cb.axiom = "(b') x _|_ y => -x _|_ -y, 2x _|_ 2y";
      report.checks = {ca, cb};
      break;
    }
  }
  return report;
}

}  // namespace orthostab
