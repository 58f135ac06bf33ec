#pragma once

// Gauges on R^m: the Euclidean norm, beta-homogeneous F-norms
// sum |y_i|^beta, lp quasi-norms and the p-th power of a p-norm, together
// with sample-based checkers for the F-norm axioms.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "orthostab/axiom_report.hpp"
#include "orthostab/core.hpp"

namespace orthostab {

enum class GaugeKind { euclidean, beta_sum, lp_quasi, p_power_of };

std::string to_string(GaugeKind kind);

/// Relative tolerance for algebraic identities checked in double precision.
inline constexpr double kAlgebraicTol = 1e-12;

class Gauge {
 public:
  static Gauge euclidean();
  /// sum |y_i|^beta. An F-norm for 0 < beta <= 1; larger beta is accepted so
  /// the axiom checker can demonstrate the failure.
  static Gauge beta_sum(double beta);
  /// (sum |y_i|^p)^(1/p), 0 < p < 1.
  static Gauge lp_quasi(double p);

  GaugeKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double p() const { return p_; }
  const Gauge* base() const { return base_.get(); }

  /// Exponent b with ||t y|| = |t|^b ||y||.
  double homogeneity() const;

  /// Analytic quasi-norm constant (1 for gauges satisfying the triangle inequality).
  double quasi_constant() const;

  /// True when the gauge satisfies all six F-norm axioms.
  bool is_fnorm() const;

  double evaluate(std::span<const double> y) const;
  /// Exact evaluation; only integer-exponent beta-sum gauges qualify.
  Rational evaluate(std::span<const Rational> y) const;

  template <class S>
  S operator()(std::span<const S> y) const {
    return evaluate(y);
  }
  template <class S>
  S operator()(const Vec<S>& y) const {
    return evaluate(std::span<const S>(y));
  }

  /// True when evaluate(span<const Rational>) is defined.
  bool supports_exact() const;

  std::string describe() const;

 private:
  Gauge(GaugeKind kind, double beta, double p, std::shared_ptr<const Gauge> base)
      : kind_(kind), beta_(beta), p_(p), base_(std::move(base)) {}

  GaugeKind kind_;
  double beta_ = 1.0;
  double p_ = 1.0;
  std::shared_ptr<const Gauge> base_;

  friend Gauge p_power_transform(const Gauge& gauge, double p);
};

/// y -> ||y||^p for an lp-quasi gauge with the same p. The result is
/// p-homogeneous and subadditive.
Gauge p_power_transform(const Gauge& gauge, double p);

/// lambda_n = first * ratio^(n-1), n = 1..max_terms; a finite stand-in for a
/// null sequence.
struct ScalarSequence {
  double first = 0.5;
  double ratio = 0.5;
  int max_terms = 1000;
};

struct FnormSample {
  Vec<double> y1;
  Vec<double> y2;
  ScalarSequence sequence;
  double scalar = 1.0;  // fixed lambda for axiom (5)
};

/// Values below this count as "reached zero" for the limit axioms.
inline constexpr double kLimitThreshold = 1e-8;

AxiomReport check_fnorm_axioms(const Gauge& gauge, std::span<const FnormSample> samples);

/// Seeded samples in R^dim; includes a zero vector and sparse vectors.
std::vector<FnormSample> make_fnorm_samples(std::size_t dim, std::size_t count, std::uint64_t seed);

template <class S>
struct HomogeneitySample {
  S t;
  Vec<S> y;
};

AxiomReport check_beta_homogeneity(const Gauge& gauge, double beta,
                                   std::span<const HomogeneitySample<double>> samples);
/// Exact check; gauge must support exact evaluation and beta must be 1.
AxiomReport check_beta_homogeneity(const Gauge& gauge, double beta,
                                   std::span<const HomogeneitySample<Rational>> samples);

/// Scalars t spread over |t| in [2^-10, 2^10] with both signs, plus t = 1.
std::vector<HomogeneitySample<double>> make_homogeneity_samples(std::size_t dim, std::size_t count,
                                                                std::uint64_t seed);

/// Max of ||x+y|| / (||x|| + ||y||) over seeded pairs: a lower bound on the
/// quasi-norm constant.
double estimate_quasi_constant(const Gauge& gauge, std::size_t dim, std::size_t trials,
                               std::uint64_t seed);
double estimate_quasi_constant(const Gauge& gauge,
                               std::span<const std::pair<Vec<double>, Vec<double>>> pairs);

}  // namespace orthostab
