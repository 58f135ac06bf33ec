#pragma once

#include <functional>
#include <span>
#include <string>

#include "orthostab/core.hpp"

namespace orthostab {

enum class GrowthHint { linear, quadratic, bounded, unknown };

std::string to_string(GrowthHint hint);

/// A pure map f: R^d -> R^m with a float64 and/or an exact-rational
/// implementation. Repeated evaluation at one point gives identical results.
class EvaluableMap {
 public:
  using FloatFn = std::function<Vec<double>(std::span<const double>)>;
  using ExactFn = std::function<Vec<Rational>(std::span<const Rational>)>;

  EvaluableMap(std::size_t domain_dim, std::size_t codomain_dim, GrowthHint growth, FloatFn float_fn,
               ExactFn exact_fn = {}, ScalarBackend preferred = ScalarBackend::float64)
      : domain_dim_(domain_dim),
        codomain_dim_(codomain_dim),
        growth_(growth),
        preferred_(preferred),
        float_fn_(std::move(float_fn)),
        exact_fn_(std::move(exact_fn)) {}

  std::size_t domain_dim() const { return domain_dim_; }
  std::size_t codomain_dim() const { return codomain_dim_; }
  GrowthHint growth_hint() const { return growth_; }
  ScalarBackend scalar_backend() const { return preferred_; }

  bool supports(ScalarBackend backend) const {
    return backend == ScalarBackend::float64 ? static_cast<bool>(float_fn_) : static_cast<bool>(exact_fn_);
  }

  template <class S>
  Vec<S> evaluate(std::span<const S> x) const;

  template <class S>
  Vec<S> operator()(const Vec<S>& x) const {
    return evaluate<S>(std::span<const S>(x));
  }

 private:
  std::size_t domain_dim_;
  std::size_t codomain_dim_;
  GrowthHint growth_;
  ScalarBackend preferred_;
  FloatFn float_fn_;
  ExactFn exact_fn_;
};

template <class S>
Vec<S> EvaluableMap::evaluate(std::span<const S> x) const {
  if (x.size() != domain_dim_)
    throw InputError("map expects dimension " + std::to_string(domain_dim_) + ", got " + std::to_string(x.size()));
  Vec<S> y;
  if constexpr (ScalarTraits<S>::exact) {
    if (!exact_fn_) throw ConfigError("map has no exact-rational implementation");
    y = exact_fn_(x);
  } else {
    if (!float_fn_) throw ConfigError("map has no float64 implementation");
    y = float_fn_(x);
    for (double v : y)
      if (!std::isfinite(v)) throw RangeError("map produced a non-finite value at " + format_vector(x));
  }
  if (y.size() != codomain_dim_) throw InputError("map returned a vector of the wrong dimension");
  return y;
}

}  // namespace orthostab
