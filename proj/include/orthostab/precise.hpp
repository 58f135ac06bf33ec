#pragma once

// Multi-precision enclosures of S(beta) and the stability constants. All
// operations use MPFR with directed rounding (lower ends rounded down, upper
// ends up), so the intervals are certified; the binary64 views round outward
// once more.

#include <string>

#include "orthostab/series.hpp"

namespace orthostab {

struct PreciseInterval {
  std::string lower;  // decimal, rounded down
  std::string upper;  // decimal, rounded up
  double width = 0.0; // upper - lower, rounded up
  Interval enclosure; // binary64 outward rounding of [lower, upper]
};

enum class PreciseQuantity { S, K_add, K_quad, K_add_p, K_quad_p };

std::string to_string(PreciseQuantity q);

/// Working precision in bits.
inline constexpr int kPreciseBits = 256;

/// Enclosure of q at parameter (beta, or p for the corollary constants) with
/// width <= tol. Throws ConfigError on invalid parameters and RangeError when
/// the series cannot be brought within tol.
PreciseInterval precise_constant(PreciseQuantity q, double parameter, double tol);

}  // namespace orthostab
