#pragma once

// Shared scalar machinery: the two numeric backends (double and exact GMP
// rationals), error types, and small vector helpers used by every module.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace orthostab {

using Rational = mpq_class;

template <class S>
using Vec = std::vector<S>;

enum class ScalarBackend { float64, exact_rational };

std::string to_string(ScalarBackend backend);
ScalarBackend parse_backend(const std::string& name);

/// "(a, b, ...)" with shortest round-trip formatting.
std::string format_vector(std::span<const double> x);
std::string format_number(double v);

/// Invalid parameters in a gauge, relation, map or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed call arguments (dimension mismatch, empty request).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or overflow while evaluating at scaled points.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orthogonal-pair sampler failed to produce a pair.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unit roundoff multiple used for float-mode rounding slack. Sixteen units
// covers the handful of operations in every combination we bound.
inline constexpr double kRoundingGamma = 16.0 * 0x1.0p-53;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr ScalarBackend backend = ScalarBackend::float64;
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static bool is_zero(double v) { return v == 0.0; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr ScalarBackend backend = ScalarBackend::exact_rational;
  static Rational from_double(double v) {
    // mpq_class is exact for every finite double.
    return Rational(v);
  }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
};

template <class S>
double to_double(const S& v) {
  return ScalarTraits<S>::to_double(v);
}

/// |x|^beta. Exact scalars only admit beta == 1, where this is |x|.
template <class S>
S abs_pow(const S& x, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    return ScalarTraits<S>::abs(x);
  } else {
    return std::pow(std::fabs(x), beta);
  }
}

/// 2^(k*beta) for integer k; exact in rational mode (beta == 1).
template <class S>
S pow2_beta(int k, double beta) {
  if constexpr (ScalarTraits<S>::exact) {
    if (beta != 1.0) throw ConfigError("exact-rational mode requires beta = 1");
    Rational r(1);
    if (k >= 0) {
      mpz_class num(1);
      num <<= k;
      r = Rational(num);
    } else {
      mpz_class den(1);
      den <<= -k;
      r = Rational(mpz_class(1), den);
    }
    return r;
  } else {
    return std::exp2(static_cast<double>(k) * beta);
  }
}

/// Corrector weights (2^n + 1) / (2*4^n) and (2^n - 1) / (2*4^n).
template <class S>
struct CorrectorWeights {
  S plus;
  S minus;
};

template <class S>
CorrectorWeights<S> corrector_weights(int n) {
  if (n < 0) throw InputError("corrector weights need n >= 0");
  if constexpr (ScalarTraits<S>::exact) {
    mpz_class p(1);
    p <<= n;
    mpz_class den(1);
    den <<= (2 * n + 1);
    Rational plus(p + 1, den);
    Rational minus(p - 1, den);
    plus.canonicalize();
    minus.canonicalize();
    return {plus, minus};
  } else {
    if (n > 500) throw RangeError("corrector weights underflow beyond n = 500");
    const double p = std::exp2(n);
    const double den = std::exp2(2 * n + 1);
    return {(p + 1.0) / den, (p - 1.0) / den};
  }
}

template <class S>
Vec<S> scaled(std::span<const S> x, const S& t) {
  Vec<S> out(x.begin(), x.end());
  for (auto& v : out) v *= t;
  return out;
}

/// x * 2^k; exact for doubles absent overflow.
template <class S>
Vec<S> scaled_pow2(std::span<const S> x, int k) {
  Vec<S> out(x.begin(), x.end());
  if constexpr (ScalarTraits<S>::exact) {
    Rational t = pow2_beta<Rational>(k, 1.0);
    for (auto& v : out) v *= t;
  } else {
    for (auto& v : out) {
      v = std::ldexp(v, k);
      if (!std::isfinite(v)) throw RangeError("overflow scaling point by 2^" + std::to_string(k));
    }
  }
  return out;
}

template <class S>
Vec<S> negated(std::span<const S> x) {
  Vec<S> out(x.begin(), x.end());
  for (auto& v : out) v = -v;
  return out;
}

template <class S>
Vec<S> added(std::span<const S> a, std::span<const S> b) {
  if (a.size() != b.size()) throw InputError("dimension mismatch in vector sum");
  Vec<S> out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

template <class S>
Vec<S> subtracted(std::span<const S> a, std::span<const S> b) {
  if (a.size() != b.size()) throw InputError("dimension mismatch in vector difference");
  Vec<S> out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

template <class S>
S dot(std::span<const S> a, std::span<const S> b) {
  if (a.size() != b.size()) throw InputError("dimension mismatch in inner product");
  S acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class S>
bool is_zero_vector(std::span<const S> x) {
  for (const auto& v : x)
    if (!ScalarTraits<S>::is_zero(v)) return false;
  return true;
}

template <class S>
std::vector<double> to_doubles(std::span<const S> x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(to_double(v));
  return out;
}

/// Deterministic 64-bit generator with platform-independent real draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

 private:
  std::uint64_t state_;
};

/// Random point: float mode draws uniform [-1,1]^d; rational mode draws
/// dyadic rationals k / 256 with |k| <= 256.
template <class S>
Vec<S> random_point(SplitMix64& rng, std::size_t dim) {
  Vec<S> x(dim);
  for (auto& v : x) {
    if constexpr (ScalarTraits<S>::exact) {
      v = Rational(mpz_class(static_cast<long>(rng.integer(-256, 256))), mpz_class(256));
      v.canonicalize();
    } else {
      v = rng.uniform(-1.0, 1.0);
    }
  }
  return x;
}

}  // namespace orthostab
