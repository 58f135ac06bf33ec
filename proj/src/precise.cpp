#include "orthostab/precise.hpp"

#include <mpfr.h>

#include <cmath>
#include <memory>

namespace orthostab {

std::string to_string(PreciseQuantity q) {
  switch (q) {
    case PreciseQuantity::S: return "S";
    case PreciseQuantity::K_add: return "K_add";
    case PreciseQuantity::K_quad: return "K_quad";
    case PreciseQuantity::K_add_p: return "K_add_p";
    case PreciseQuantity::K_quad_p: return "K_quad_p";
  }
  return "unknown";
}

namespace {

class Real {
 public:
  explicit Real(mpfr_prec_t prec = kPreciseBits) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

struct Range {
  Real lo, hi;
};

Range exact(double v) {
  Range r;
  mpfr_set_d(r.lo.get(), v, MPFR_RNDD);
  mpfr_set_d(r.hi.get(), v, MPFR_RNDU);
  return r;
}

Range add(const Range& a, const Range& b) {
  Range r;
  mpfr_add(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_add(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

// Non-negative operands only.
Range mul(const Range& a, const Range& b) {
  Range r;
  mpfr_mul(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_mul(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

Range div(const Range& a, const Range& b) {
  Range r;
  mpfr_div(r.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_div(r.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return r;
}

// 2^(a + k beta); the exponent is formed exactly at 256 bits.
Range exp2(double a, long k, double beta) {
  Range r;
  Real t, b;
  mpfr_set_d(b.get(), beta, MPFR_RNDN);
  mpfr_mul_si(b.get(), b.get(), k, MPFR_RNDN);
  mpfr_set_d(t.get(), a, MPFR_RNDN);
  mpfr_add(t.get(), t.get(), b.get(), MPFR_RNDN);
  mpfr_exp2(r.lo.get(), t.get(), MPFR_RNDD);
  mpfr_exp2(r.hi.get(), t.get(), MPFR_RNDU);
  return r;
}

// ((2^n + s) / 2^(2n+1))^beta, s = +-1, with the base held exactly.
Range weight_pow(int n, int s, double beta) {
  Real w(n + 8);
  mpfr_set_ui(w.get(), 1, MPFR_RNDN);
  mpfr_mul_2ui(w.get(), w.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  if (s > 0)
    mpfr_add_ui(w.get(), w.get(), 1, MPFR_RNDN);
  else
    mpfr_sub_ui(w.get(), w.get(), 1, MPFR_RNDN);
  mpfr_div_2ui(w.get(), w.get(), static_cast<unsigned long>(2 * n + 1), MPFR_RNDN);
  Real b;
  mpfr_set_d(b.get(), beta, MPFR_RNDN);
  Range r;
  mpfr_pow(r.lo.get(), w.get(), b.get(), MPFR_RNDD);
  mpfr_pow(r.hi.get(), w.get(), b.get(), MPFR_RNDU);
  return r;
}

// Upper bound of 2 * 2^(-n beta) / (1 - 2^-beta).
Real tail(int n, double beta) {
  Real num, t, den, out;
  Real e;
  mpfr_set_d(e.get(), beta, MPFR_RNDN);
  mpfr_mul_si(e.get(), e.get(), -n, MPFR_RNDN);  // exact
  mpfr_exp2(num.get(), e.get(), MPFR_RNDU);
  mpfr_mul_2ui(num.get(), num.get(), 1, MPFR_RNDU);
  mpfr_set_d(e.get(), -beta, MPFR_RNDN);
  mpfr_exp2(t.get(), e.get(), MPFR_RNDU);
  mpfr_ui_sub(den.get(), 1, t.get(), MPFR_RNDD);
  mpfr_div(out.get(), num.get(), den.get(), MPFR_RNDU);
  return out;
}

double to_double_up(const Real& v) { return mpfr_get_d(v.get(), MPFR_RNDU); }

Range series(double beta, double tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be > 0");
  constexpr int kMaxTerms = 20000;
  Range s = exact(0.0);
  for (int n = 1; n <= kMaxTerms; ++n) {
    s = add(s, add(weight_pow(n, +1, beta), weight_pow(n, -1, beta)));
    Real t = tail(n + 1, beta);
    // Stop once the tail is well below tol; the partial-sum rounding is far smaller.
    if (to_double_up(t) <= tol * 0.25) {
      mpfr_add(s.hi.get(), s.hi.get(), t.get(), MPFR_RNDU);
      return s;
    }
  }
  throw RangeError("S(beta=" + format_number(beta) + ") needs more than " + std::to_string(kMaxTerms) + " terms");
}

Range polynomial(bool additive, double beta) {
  Range p = exact(1.0);
  if (additive) {
    for (long k = 1; k <= 4; ++k) p = add(p, exp2(0.0, k, beta));
  } else {
    p = add(p, exp2(0.0, 1, beta));
    p = add(p, exp2(1.0, -1, beta));
    p = add(p, exp2(1.0, -2, beta));
  }
  return p;
}

Range stability(bool additive, double beta, double tol) {
  const Range coeff = div(polynomial(additive, beta), exp2(0.0, 3, beta));
  const double c = mpfr_get_d(coeff.hi.get(), MPFR_RNDU);
  return mul(add(series(beta, tol / (4.0 * c)), exact(1.0)), coeff);
}

// K^(1/p): evaluate every corner so monotonicity in either argument is covered.
Range root(const Range& k, double p) {
  Real e_lo, e_hi, one;
  mpfr_set_ui(one.get(), 1, MPFR_RNDN);
  Real pp;
  mpfr_set_d(pp.get(), p, MPFR_RNDN);
  mpfr_div(e_lo.get(), one.get(), pp.get(), MPFR_RNDD);
  mpfr_div(e_hi.get(), one.get(), pp.get(), MPFR_RNDU);
  Range r;
  bool first = true;
  for (const Real* base : {&k.lo, &k.hi}) {
    for (const Real* e : {&e_lo, &e_hi}) {
      Real lo, hi;
      mpfr_pow(lo.get(), base->get(), e->get(), MPFR_RNDD);
      mpfr_pow(hi.get(), base->get(), e->get(), MPFR_RNDU);
      if (first || mpfr_less_p(lo.get(), r.lo.get())) r.lo = lo;
      if (first || mpfr_greater_p(hi.get(), r.hi.get())) r.hi = hi;
      first = false;
    }
  }
  return r;
}

std::string decimal(const Real& v, mpfr_rnd_t rnd) {
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, rnd == MPFR_RNDD ? "%.25RDg" : "%.25RUg", v.get());
  return buf;
}

}  // namespace

PreciseInterval precise_constant(PreciseQuantity q, double parameter, double tol) {
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(parameter > 0.0) || !std::isfinite(parameter)) throw ConfigError("parameter must be > 0");
  const bool corollary = q == PreciseQuantity::K_add_p || q == PreciseQuantity::K_quad_p;
  if (corollary && parameter > 1.0) throw ConfigError("p must lie in (0, 1]");

  Range r;
  switch (q) {
    case PreciseQuantity::S: r = series(parameter, tol); break;
    case PreciseQuantity::K_add: r = stability(true, parameter, tol); break;
    case PreciseQuantity::K_quad: r = stability(false, parameter, tol); break;
    case PreciseQuantity::K_add_p:
    case PreciseQuantity::K_quad_p: {
      // The 1/p power stretches widths by about K^(1/p - 1) / p.
      const double k_approx = mpfr_get_d(stability(q == PreciseQuantity::K_add_p, parameter, 1e-3).hi.get(), MPFR_RNDU);
      const double stretch = std::pow(k_approx, 1.0 / parameter - 1.0) / parameter;
      r = root(stability(q == PreciseQuantity::K_add_p, parameter, tol / (4.0 * std::max(1.0, stretch))), parameter);
      break;
    }
  }

  PreciseInterval out;
  out.lower = decimal(r.lo, MPFR_RNDD);
  out.upper = decimal(r.hi, MPFR_RNDU);
  Real w;
  mpfr_sub(w.get(), r.hi.get(), r.lo.get(), MPFR_RNDU);
  out.width = mpfr_get_d(w.get(), MPFR_RNDU);
  out.enclosure = {mpfr_get_d(r.lo.get(), MPFR_RNDD), mpfr_get_d(r.hi.get(), MPFR_RNDU)};
  if (out.width > tol)
    throw RangeError(to_string(q) + "(" + format_number(parameter) + ") width " + format_number(out.width) +
                     " exceeds tol " + format_number(tol));
  return out;
}

}  // namespace orthostab
