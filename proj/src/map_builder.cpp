#include "orthostab/map_builder.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace orthostab {

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::linear: return "linear";
    case BaseKind::quadratic_form: return "quadratic-form";
    case BaseKind::zero: return "zero";
  }
  return "unknown";
}

std::string to_string(NoiseParity parity) {
  switch (parity) {
    case NoiseParity::none: return "none";
    case NoiseParity::odd: return "odd";
    case NoiseParity::even: return "even";
  }
  return "unknown";
}

BaseKind parse_base_kind(const std::string& name) {
  if (name == "linear") return BaseKind::linear;
  if (name == "quadratic-form" || name == "quadratic") return BaseKind::quadratic_form;
  if (name == "zero") return BaseKind::zero;
  throw ConfigError("unknown map base '" + name + "' (expected linear, quadratic-form or zero)");
}

NoiseParity parse_noise_parity(const std::string& name) {
  if (name == "none") return NoiseParity::none;
  if (name == "odd") return NoiseParity::odd;
  if (name == "even") return NoiseParity::even;
  throw ConfigError("unknown noise parity '" + name + "' (expected none, odd or even)");
}

namespace {

void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.size() != rows) throw ConfigError(what + " must have " + std::to_string(rows) + " rows");
  for (const auto& row : m) {
    if (row.size() != cols) throw ConfigError(what + " rows must have " + std::to_string(cols) + " entries");
    for (double v : row)
      if (!std::isfinite(v)) throw ConfigError(what + " has a non-finite entry");
  }
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Fnv {
  std::uint64_t h;
  explicit Fnv(std::uint64_t seed) : h(kFnvOffset ^ mix64(seed)) {}
  void byte(unsigned char b) {
    h ^= b;
    h *= kFnvPrime;
  }
  void text(const std::string& s) {
    for (char c : s) byte(static_cast<unsigned char>(c));
  }
};

std::vector<double> expand(std::uint64_t state, std::size_t m) {
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t z = mix64(state + (i + 1) * 0x9E3779B97F4A7C15ULL);
    out[i] = 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
  }
  return out;
}

template <class S>
std::vector<double> symmetrised(std::span<const S> x, std::uint64_t seed, std::size_t m, NoiseParity parity) {
  std::vector<double> raw = raw_noise(x, seed, m);
  if (parity == NoiseParity::none) return raw;
  const Vec<S> nx = negated<S>(x);
  const std::vector<double> mirror = raw_noise(std::span<const S>(nx), seed, m);
  for (std::size_t i = 0; i < m; ++i)
    raw[i] = parity == NoiseParity::odd ? 0.5 * (raw[i] - mirror[i]) : 0.5 * (raw[i] + mirror[i]);
  return raw;
}

}  // namespace

std::vector<double> raw_noise(std::span<const double> x, std::uint64_t seed, std::size_t codomain_dim) {
  Fnv fnv(seed);
  for (double v : x) {
    const double canonical = v == 0.0 ? 0.0 : v;
    auto bits = std::bit_cast<std::uint64_t>(canonical);
    for (int b = 0; b < 8; ++b) fnv.byte(static_cast<unsigned char>((bits >> (8 * b)) & 0xff));
  }
  return expand(fnv.h, codomain_dim);
}

std::vector<double> raw_noise(std::span<const Rational> x, std::uint64_t seed, std::size_t codomain_dim) {
  Fnv fnv(seed);
  for (const auto& v : x) {
    fnv.byte(sgn(v) < 0 ? '-' : '+');
    fnv.text(mpz_class(abs(v.get_num())).get_str(16));
    fnv.byte('/');
    fnv.text(v.get_den().get_str(16));
    fnv.byte(';');
  }
  return expand(fnv.h, codomain_dim);
}

void validate(const MapSpec& spec) {
  if (spec.domain_dim < 1 || spec.codomain_dim < 1) throw ConfigError("map dimensions must be >= 1");
  if (!(spec.noise_amplitude >= 0.0) || !std::isfinite(spec.noise_amplitude))
    throw ConfigError("noise_amplitude must be finite and >= 0");
  switch (spec.base) {
    case BaseKind::linear: check_matrix(spec.linear, spec.codomain_dim, spec.domain_dim, "linear matrix"); break;
    case BaseKind::quadratic_form:
      if (spec.forms.size() != spec.codomain_dim)
        throw ConfigError("quadratic-form base needs one matrix per codomain coordinate");
      for (const auto& q : spec.forms) check_matrix(q, spec.domain_dim, spec.domain_dim, "quadratic form");
      break;
    case BaseKind::zero: break;
  }
}

double noise_scale(const Gauge& gauge, std::size_t codomain_dim, double delta) {
  if (delta == 0.0) return 0.0;
  const std::vector<double> ones(codomain_dim, 1.0);
  const double g = gauge.evaluate(ones);
  return std::pow(delta / g, 1.0 / gauge.homogeneity()) * (1.0 - 1e-12);
}

EvaluableMap build_map(const MapSpec& spec, const Gauge& gauge) {
  validate(spec);
  const double t = noise_scale(gauge, spec.codomain_dim, spec.noise_amplitude);
  const std::size_t d = spec.domain_dim, m = spec.codomain_dim;

  // Shared copies so the closures own their data.
  const auto linear = std::make_shared<const Matrix>(spec.linear);
  const auto forms = std::make_shared<const std::vector<Matrix>>(spec.forms);
  const BaseKind base = spec.base;
  const NoiseParity parity = spec.noise_parity;
  const std::uint64_t seed = spec.seed;

  auto float_fn = [=](std::span<const double> x) {
    Vec<double> y(m, 0.0);
    if (base == BaseKind::linear) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) y[i] += (*linear)[i][j] * x[j];
    } else if (base == BaseKind::quadratic_form) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t k = 0; k < d; ++k) y[i] += (*forms)[i][j][k] * x[j] * x[k];
    }
    if (t != 0.0) {
      const std::vector<double> eta = symmetrised<double>(x, seed, m, parity);
      for (std::size_t i = 0; i < m; ++i) y[i] += t * eta[i];
    }
    return y;
  };

  auto exact_fn = [=](std::span<const Rational> x) {
    Vec<Rational> y(m, Rational(0));
    if (base == BaseKind::linear) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) y[i] += Rational((*linear)[i][j]) * x[j];
    } else if (base == BaseKind::quadratic_form) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t k = 0; k < d; ++k) y[i] += Rational((*forms)[i][j][k]) * x[j] * x[k];
    }
    if (t != 0.0) {
      const std::vector<double> eta = symmetrised<Rational>(x, seed, m, parity);
      for (std::size_t i = 0; i < m; ++i) {
        const double grid = std::trunc(t * eta[i] * 65536.0);
        Rational q(mpz_class(grid), mpz_class(65536));
        q.canonicalize();
        y[i] += q;
      }
    }
    return y;
  };

  const GrowthHint growth = base == BaseKind::linear           ? GrowthHint::linear
                            : base == BaseKind::quadratic_form ? GrowthHint::quadratic
                                                               : GrowthHint::bounded;
  return EvaluableMap(d, m, growth, float_fn, exact_fn, spec.backend);
}

}  // namespace orthostab
