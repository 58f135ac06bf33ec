#include "doctest.h"
#include "oracle.hpp"
#include "orthostab/gauge.hpp"

using namespace orthostab;

TEST_SUITE("gauge") {

TEST_CASE("beta-sum evaluates the closed form") {
  CHECK(Gauge::beta_sum(1.0)(Vec<double>{3, 4}) == 7.0);
  CHECK(Gauge::beta_sum(0.5)(Vec<double>{4, 9}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(Gauge::beta_sum(1.0)(Vec<Rational>{Rational(3, 2), Rational(-1, 3)}) == Rational(11, 6));
}

TEST_CASE("every gauge vanishes at zero") {
  const Vec<double> zero{0, 0, 0};
  for (const Gauge& g : {Gauge::euclidean(), Gauge::beta_sum(0.3), Gauge::beta_sum(1.0), Gauge::lp_quasi(0.5),
                         p_power_transform(Gauge::lp_quasi(0.5), 0.5)})
    CHECK(g(zero) == 0.0);
}

TEST_CASE("invalid parameters are configuration errors") {
  CHECK_THROWS_AS(Gauge::beta_sum(0.0), ConfigError);
  CHECK_THROWS_AS(Gauge::beta_sum(-1.0), ConfigError);
  CHECK_THROWS_AS(Gauge::lp_quasi(1.5), ConfigError);
  CHECK_THROWS_AS(Gauge::lp_quasi(0.0), ConfigError);
  CHECK_THROWS_AS(p_power_transform(Gauge::lp_quasi(0.5), 0.25), ConfigError);
  CHECK_THROWS_AS(p_power_transform(Gauge::beta_sum(0.5), 0.5), ConfigError);
}

TEST_CASE("beta-sum(0.5) passes all six axioms on 100 samples") {
  const AxiomReport r = check_fnorm_axioms(Gauge::beta_sum(0.5), make_fnorm_samples(2, 100, 3));
  CHECK(r.checks.size() == 6);
  CHECK(r.all_pass());
}

TEST_CASE("squared euclidean fails the triangle inequality at (1,0), (1,0)") {
  const FnormSample s{{1, 0}, {1, 0}, {}, 1.0};
  const AxiomReport r = check_fnorm_axioms(Gauge::beta_sum(2.0), std::vector<FnormSample>{s});
  const AxiomCheck* tri = r.find("(3) ||x + y|| <= ||x|| + ||y||");
  REQUIRE(tri != nullptr);
  CHECK_FALSE(tri->pass);
  CHECK(tri->worst_witness.find("(1, 0)") != std::string::npos);
  CHECK(tri->worst_value == doctest::Approx(1.0));  // (4 - 2) / 2
}

TEST_CASE("zero-only samples pass vacuously") {
  const FnormSample s{{0, 0}, {0, 0}, {}, 1.0};
  CHECK(check_fnorm_axioms(Gauge::beta_sum(0.7), std::vector<FnormSample>{s}).all_pass());
}

TEST_CASE("homogeneity examples") {
  const Gauge g = Gauge::beta_sum(0.5);
  CHECK(g(Vec<double>{4, 4}) == doctest::Approx(4.0));
  const std::vector<HomogeneitySample<double>> s{{4.0, {1, 1}}, {1.0, {0.3, -7}}};
  CHECK(check_beta_homogeneity(g, 0.5, s).all_pass());

  const std::vector<HomogeneitySample<Rational>> exact{{Rational(1), {Rational(2, 3), Rational(-5)}},
                                                       {Rational(-7, 2), {Rational(1, 9), Rational(4)}}};
  CHECK(check_beta_homogeneity(Gauge::beta_sum(1.0), 1.0, exact).all_pass());

  CHECK_FALSE(check_beta_homogeneity(Gauge::euclidean(), 2.0, make_homogeneity_samples(2, 50, 1)).all_pass());
}

TEST_CASE("quasi-norm constant estimates") {
  const double q = estimate_quasi_constant(Gauge::lp_quasi(0.5), 2, 100000, 11);
  CHECK(q > 1.0);
  CHECK(q <= 2.0);
  CHECK(estimate_quasi_constant(Gauge::euclidean(), 3, 10000, 11) <= 1.0 + 1e-12);
  const std::vector<std::pair<Vec<double>, Vec<double>>> one{{{1.5, -2}, {0, 0}}};
  CHECK(estimate_quasi_constant(Gauge::lp_quasi(0.5), one) == 1.0);
}

TEST_CASE("p-power transform of lp-quasi(0.5)") {
  const Gauge t = p_power_transform(Gauge::lp_quasi(0.5), 0.5);
  CHECK(t(Vec<double>{4, 9}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(t.homogeneity() == 0.5);
  oracle::Gen gen(5);
  for (int i = 0; i < 500; ++i) {
    const auto y = gen.shaped_point(3);
    CHECK(t(y) == doctest::Approx(Gauge::beta_sum(0.5)(y)).epsilon(1e-13));
  }
}

// Generated: random beta in (0, 1], sparse and zero vectors, scales 2^-8..2^8.
TEST_CASE("property: beta-sum agrees with the oracle and is subadditive and homogeneous") {
  oracle::Gen gen(20240601);
  for (int trial = 0; trial < 2000; ++trial) {
    const double beta = gen.beta();
    const Gauge g = Gauge::beta_sum(beta);
    const auto x = gen.shaped_point(3), y = gen.shaped_point(3);
    const double gx = g(x), gy = g(y);
    CHECK(gx == doctest::Approx(oracle::beta_sum(x, beta)).epsilon(1e-13));
    std::vector<double> s(3);
    for (int i = 0; i < 3; ++i) s[i] = x[i] + y[i];
    CHECK(g(s) <= (gx + gy) * (1 + 1e-12));
    const double t = gen.real(-16, 16);
    std::vector<double> tx(3);
    for (int i = 0; i < 3; ++i) tx[i] = t * x[i];
    CHECK(g(tx) == doctest::Approx(std::pow(std::fabs(t), beta) * gx).epsilon(1e-12));
  }
}

TEST_CASE("property: lp-quasi never exceeds its analytic constant") {
  oracle::Gen gen(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const double p = gen.real(0.1, 0.95);
    const Gauge g = Gauge::lp_quasi(p);
    const auto x = gen.shaped_point(2), y = gen.shaped_point(2);
    const double lhs = g(Vec<double>{x[0] + y[0], x[1] + y[1]});
    CHECK(lhs <= g.quasi_constant() * (g(x) + g(y)) * (1 + 1e-12));
  }
}

}  // TEST_SUITE
