#pragma once

// Test-instance generator: f(x) = base(x) + eta(x), where eta is a pure
// function of (seed, x) obtained by hashing the canonical encoding of x.
//
// Canonical encoding, per coordinate in order:
//   float64  - the 8 little-endian bytes of the IEEE-754 bit pattern, with
//              -0.0 normalised to +0.0;
//   rational - '+' or '-', the hex digits of |numerator|, '/', the hex
//              digits of the denominator, ';' (canonical form).
// The bytes are folded with 64-bit FNV-1a seeded by `seed`; coordinate i of
// the raw noise is splitmix64(state + (i + 1) * golden) mapped to [-1, 1).
// Parity symmetrisation: odd (raw(x) - raw(-x)) / 2, even (raw(x) +
// raw(-x)) / 2. The result is scaled by t = (delta / G)^(1/h) * (1 - 1e-12),
// G the gauge of the all-ones vector and h its homogeneity, so that
// gauge(eta(x)) <= delta for every x. Exact-rational noise truncates t*eta
// toward zero onto the grid 2^-16.

#include <cstdint>
#include <string>
#include <vector>

#include "orthostab/core.hpp"
#include "orthostab/evaluable_map.hpp"
#include "orthostab/gauge.hpp"

namespace orthostab {

enum class BaseKind { linear, quadratic_form, zero };
enum class NoiseParity { none, odd, even };

std::string to_string(BaseKind kind);
std::string to_string(NoiseParity parity);
BaseKind parse_base_kind(const std::string& name);
NoiseParity parse_noise_parity(const std::string& name);

using Matrix = std::vector<std::vector<double>>;

struct MapSpec {
  BaseKind base = BaseKind::zero;
  std::size_t domain_dim = 2;
  std::size_t codomain_dim = 1;
  Matrix linear;               // codomain_dim x domain_dim
  std::vector<Matrix> forms;   // codomain_dim matrices, each domain_dim x domain_dim
  double noise_amplitude = 0.0;
  NoiseParity noise_parity = NoiseParity::none;
  std::uint64_t seed = 0;
  ScalarBackend backend = ScalarBackend::float64;
};

/// Throws ConfigError for inconsistent shapes, non-finite entries or delta < 0.
void validate(const MapSpec& spec);

/// Both backends are populated; `spec.backend` is recorded as the preferred one.
EvaluableMap build_map(const MapSpec& spec, const Gauge& gauge);

/// Noise scale t with gauge(t * v) <= delta for all v in [-1, 1]^m.
double noise_scale(const Gauge& gauge, std::size_t codomain_dim, double delta);

/// Raw hashed noise in [-1, 1)^m (before symmetrisation and scaling).
std::vector<double> raw_noise(std::span<const double> x, std::uint64_t seed, std::size_t codomain_dim);
std::vector<double> raw_noise(std::span<const Rational> x, std::uint64_t seed, std::size_t codomain_dim);

}  // namespace orthostab
