#pragma once

// Decidable orthogonality relations on R^d, seeded orthogonal-pair samplers
// and sample-based checkers for the axiom systems the stability results
// rely on.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orthostab/axiom_report.hpp"
#include "orthostab/core.hpp"
#include "orthostab/gauge.hpp"

namespace orthostab {

enum class RelationKind { euclidean, isosceles, trivial_zero };

std::string to_string(RelationKind kind);

enum class AxiomSystem {
  ratz_123,          // Ratz orthogonality space, conditions (1)-(3) (+ (4) for euclidean)
  fechner_sikorska,  // sign/doubling closure and existence of y with x+y _|_ x-y
  sec2_ab,           // 0 _|_ x OR x _|_ 0; sign/doubling closure
  sec3_ab_prime,     // 0 _|_ x AND x _|_ 0; sign/doubling closure
};

std::string to_string(AxiomSystem system);
AxiomSystem parse_axiom_system(const std::string& name);

template <class S>
using PointPair = std::pair<Vec<S>, Vec<S>>;

class OrthoRelation {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  /// x _|_ y iff <x, y> = 0 (|<x,y>| <= tol * |x| |y| in float mode).
  static OrthoRelation euclidean(std::size_t dim, double tolerance = kDefaultTolerance);
  /// x _|_ y iff ||x + y|| = ||x - y|| within tol * (||x+y|| + ||x-y||).
  static OrthoRelation isosceles(std::size_t dim, Gauge gauge, double tolerance = kDefaultTolerance);
  /// x _|_ y iff x = 0 or y = 0.
  static OrthoRelation trivial_zero(std::size_t dim);

  RelationKind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }
  double tolerance() const { return tolerance_; }
  const std::optional<Gauge>& gauge() const { return gauge_; }

  bool is_orthogonal(std::span<const double> x, std::span<const double> y) const;
  bool is_orthogonal(std::span<const Rational> x, std::span<const Rational> y) const;

  template <class S>
  bool operator()(const Vec<S>& x, const Vec<S>& y) const {
    return is_orthogonal(std::span<const S>(x), std::span<const S>(y));
  }

  std::string describe() const;

 private:
  OrthoRelation(RelationKind kind, std::size_t dim, double tol, std::optional<Gauge> gauge)
      : kind_(kind), dim_(dim), tolerance_(tol), gauge_(std::move(gauge)) {}

  void check_dims(std::size_t a, std::size_t b) const;

  RelationKind kind_;
  std::size_t dim_;
  double tolerance_;
  std::optional<Gauge> gauge_;
};

/// Seeded orthogonal pairs. For count >= 2 the first pair is (0, y) and the
/// second (x, 0); count == 1 yields (0, 0). Every pair passes is_orthogonal.
std::vector<PointPair<double>> sample_orthogonal_pairs(const OrthoRelation& rel, std::size_t count,
                                                       std::uint64_t seed);
/// Exact pairs; euclidean and trivial-zero only.
std::vector<PointPair<Rational>> sample_orthogonal_pairs_exact(const OrthoRelation& rel, std::size_t count,
                                                               std::uint64_t seed);

template <class S>
std::vector<PointPair<S>> sample_pairs(const OrthoRelation& rel, std::size_t count, std::uint64_t seed) {
  if constexpr (ScalarTraits<S>::exact)
    return sample_orthogonal_pairs_exact(rel, count, seed);
  else
    return sample_orthogonal_pairs(rel, count, seed);
}

struct RelationSamples {
  std::vector<Vec<double>> points;             // includes 0 and e_1
  std::vector<PointPair<double>> pairs;        // orthogonal pairs
  std::vector<std::pair<double, double>> scalars;  // (alpha, beta), includes zeros and negatives
  std::vector<double> lambdas;                 // lambda >= 0 for Ratz (4)
};

RelationSamples make_relation_samples(const OrthoRelation& rel, std::size_t count, std::uint64_t seed);

AxiomReport check_relation_axioms(const OrthoRelation& rel, AxiomSystem system, const RelationSamples& samples);

}  // namespace orthostab
