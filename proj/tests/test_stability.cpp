#include "doctest.h"
#include "oracle.hpp"
#include "orthostab/map_builder.hpp"
#include "orthostab/stability.hpp"

using namespace orthostab;

namespace {

EvaluableMap linear_map(double delta, std::uint64_t seed = 7, double beta = 1.0) {
  MapSpec s{BaseKind::linear, 2, 2, {{5, 0}, {1, 3}}, {}, delta, NoiseParity::odd, seed, ScalarBackend::float64};
  return build_map(s, Gauge::beta_sum(beta));
}

EvaluableMap quadratic_map(double delta, std::uint64_t seed = 11, double beta = 1.0) {
  MapSpec s{BaseKind::quadratic_form, 2, 1, {}, {{{2, 1}, {1, 3}}}, delta, NoiseParity::even, seed,
            ScalarBackend::float64};
  return build_map(s, Gauge::beta_sum(beta));
}

template <class S>
PremiseSamples<S> samples(std::size_t count, bool quadratic) {
  PremiseSamples<S> out;
  out.pairs = sample_pairs<S>(OrthoRelation::euclidean(2), count, 3);
  SplitMix64 rng(4);
  for (std::size_t i = 0; i < count; ++i) out.points.push_back(random_point<S>(rng, 2));
  if (quadratic) {
    const Vec<S> zero(2, S(0));
    out.pairs.emplace_back(zero, zero);
    for (const auto& z : out.points) {
      out.pairs.emplace_back(zero, z);
      out.pairs.emplace_back(z, zero);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("constants at beta = 1") {
  CHECK(K_add(1.0).contains(7.75));
  CHECK(K_quad(1.0).contains(1.125));
  CHECK(K_add(1.0).width() <= 1e-12);
  CHECK(K_add_p(1.0).contains(7.75));
  CHECK(K_quad_p(1.0).contains(1.125));
  CHECK(K_add_exact() == Rational(31, 4));
  CHECK(K_quad_exact() == Rational(9, 8));
  CHECK(K_quad(0.5).lower >= (1 + 2 * std::sqrt(2.0) + 1) / std::sqrt(8.0));
}

TEST_CASE("property: constants enclose the long-double oracle") {
  oracle::Gen gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const double b = gen.real(0.1, 1.0);
    for (bool additive : {true, false}) {
      const Interval k = additive ? K_add(b) : K_quad(b);
      const double ref = static_cast<double>(oracle::stability_K(additive, b));
      CHECK(k.lower <= ref * (1 + 1e-15));
      CHECK(ref * (1 - 1e-15) <= k.upper);
      const Interval kp = additive ? K_add_p(b) : K_quad_p(b);
      CHECK(std::pow(kp.midpoint(), b) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("chain coefficients and derived epsilon") {
  CHECK(chain_coefficient<Rational>(Equation::jensen_additive, 1.0) == Rational(31, 8));
  CHECK(chain_coefficient<Rational>(Equation::jensen_quadratic, 1.0) == Rational(9, 16));
  CHECK(chain_coefficient<double>(Equation::jensen_additive, 1.0) >= 3.875);
  CHECK(epsilon_from_noise(Equation::jensen_additive, 1.0, 1e-3) == doctest::Approx(4e-3));
  CHECK(epsilon_from_noise(Equation::jensen_quadratic, 1.0, 1e-3) == doctest::Approx(6e-3));
  CHECK(parse_equation(to_string(Equation::jensen_quadratic)) == Equation::jensen_quadratic);
}

TEST_CASE("derive_C at beta = 1, eps = 1") {
  const Gauge g = Gauge::beta_sum(1.0);
  const auto add = derive_C_additive<Rational>(linear_map(0.0), Rational(1), 1.0, g, samples<Rational>(20, false));
  CHECK(add.C == Rational(31, 8));
  const auto quad = derive_C_quadratic<Rational>(quadratic_map(0.0), Rational(1), 1.0, g, samples<Rational>(20, true));
  CHECK(quad.C == Rational(9, 16));
}

TEST_CASE("exact solutions with eps = 0 give C = 0 and zero chain defects") {
  const Gauge g = Gauge::beta_sum(1.0);
  const auto add = derive_C_additive<Rational>(linear_map(0.0), Rational(0), 1.0, g, samples<Rational>(50, false));
  CHECK(add.C == 0);
  CHECK(add.certified);
  for (const auto& c : add.chain.checks) CHECK(c.max_value == 0.0);
  const auto quad = derive_C_quadratic<Rational>(quadratic_map(0.0), Rational(0), 1.0, g, samples<Rational>(50, true));
  CHECK(quad.C == 0);
  for (const auto& c : quad.chain.checks) CHECK(c.max_value == 0.0);
}

TEST_CASE("perturbed maps pass the chain on 1000 samples") {
  for (double beta : {0.5, 1.0}) {
    const Gauge g = Gauge::beta_sum(beta);
    const double eps_a = epsilon_from_noise(Equation::jensen_additive, beta, 1e-3);
    const auto a = derive_C_additive<double>(linear_map(1e-3, 7, beta), eps_a, beta, g, samples<double>(1000, false));
    CHECK(a.premises.ok());
    CHECK(a.chain.pass());
    const double eps_q = epsilon_from_noise(Equation::jensen_quadratic, beta, 1e-3);
    const auto q = derive_C_quadratic<double>(quadratic_map(1e-3, 11, beta), eps_q, beta, g, samples<double>(1000, true));
    CHECK(q.premises.ok());
    CHECK(q.chain.pass());
    const InequalityCheck* ev = q.chain.find("evenness");
    REQUIRE(ev != nullptr);
    CHECK(ev->bound == doctest::Approx(std::pow(2.0, 1 - beta) * (std::pow(2.0, -beta) + 1) * eps_q));
  }
}

TEST_CASE("premise violation is reported with witnesses and leaves C uncertified") {
  const Gauge g = Gauge::beta_sum(1.0);
  const auto d = derive_C_additive<double>(linear_map(10.0), 1e-9, 1.0, g, samples<double>(100, false));
  CHECK_FALSE(d.premises.ok());
  CHECK_FALSE(d.certified);
  CHECK_FALSE(d.premises.witnesses.empty());
}

TEST_CASE("conclusion and uniqueness") {
  const Gauge g = Gauge::beta_sum(1.0);
  const OrthoRelation rel = OrthoRelation::euclidean(2);
  const auto pairs = sample_pairs<Rational>(rel, 50, 2);
  const EvaluableMap exact = linear_map(0.0);
  const VectorFn<Rational> g20 = [&](const Vec<Rational>& x) { return g_n<Rational>(exact, std::span<const Rational>(x), 20); };
  CHECK(verify_conclusion<Rational>(g20, Equation::jensen_additive, rel, pairs, g).max.value == 0);

  std::vector<Vec<Rational>> pts;
  for (const auto& pr : pairs) pts.push_back(pr.first);
  CHECK(uniqueness_probe<Rational>(exact, pts, 10, 20, g).value == 0);

  MapSpec s{BaseKind::linear, 2, 2, {{5, 0}, {1, 3}}, {}, 1e-3, NoiseParity::odd, 7, ScalarBackend::exact_rational};
  const EvaluableMap noisy = build_map(s, g);
  const Rational C = Rational(31, 8) * Rational(epsilon_from_noise(Equation::jensen_additive, 1.0, 1e-3));
  const Rational ub = uniqueness_bound<Rational>(C, 10, 20, 1.0);
  CHECK(ub == C * (oracle::pow2(-9) - oracle::pow2(-19)));
  CHECK(uniqueness_probe<Rational>(noisy, pts, 10, 20, g).value <= ub);
}

TEST_CASE("validate names the offending field") {
  StabilityConfig c;
  c.beta = 0.0;
  const EvaluableMap f = linear_map(0.0);
  CHECK_THROWS_WITH_AS(validate(c, f), doctest::Contains("beta"), ConfigError);
  c.beta = 0.5;
  c.gauge = Gauge::beta_sum(0.5);
  c.mode = ScalarBackend::exact_rational;
  CHECK_THROWS_AS(validate(c, f), ConfigError);
  c.mode = ScalarBackend::float64;
  c.gauge = Gauge::beta_sum(1.0);
  CHECK_THROWS_AS(validate(c, f), ConfigError);
}

TEST_CASE("eps = 0 with an exact solution leaves only the residual") {
  StabilityConfig c;
  c.gauge = Gauge::beta_sum(1.0);
  c.epsilon = 0.0;
  c.sample_count = 50;
  c.mode = ScalarBackend::exact_rational;
  c.n_max = 8;
  const StabilityReport r = run_stability(c, linear_map(0.0));
  CHECK(r.all_within_bound);
  CHECK(r.verdict_ok());
  for (const auto& row : r.per_sample) {
    CHECK(row.value == 0.0);
    CHECK(row.value <= row.residual);
  }
}

TEST_CASE("doubling the sample scale keeps the verdicts") {
  for (int shift : {0, 1, 3}) {
    StabilityConfig c;
    c.gauge = Gauge::beta_sum(1.0);
    c.epsilon = epsilon_from_noise(Equation::jensen_additive, 1.0, 1e-3);
    c.sample_count = 200;
    c.seed = 5;
    c.point_scale_log2 = shift;
    const StabilityReport r = run_stability(c, linear_map(1e-3));
    CHECK(r.premises.ok());
    CHECK(r.all_within_bound);
    CHECK(r.verdict_ok());
  }
}

TEST_CASE("quasi corollary reports K_p") {
  MapSpec s{BaseKind::linear, 2, 2, {{5, 0}, {1, 3}}, {}, 1e-3, NoiseParity::odd, 7, ScalarBackend::float64};
  const EvaluableMap f = build_map(s, Gauge::lp_quasi(0.5));
  StabilityConfig c;
  c.gauge = Gauge::lp_quasi(0.5);
  c.beta = 0.5;
  c.quasi_corollary = true;
  c.epsilon = std::pow(epsilon_from_noise(Equation::jensen_additive, 0.5, std::sqrt(1e-3)), 2.0);
  c.sample_count = 100;
  const StabilityReport r = run_stability(c, f);
  CHECK(r.K == K_add_p(0.5).upper);
  CHECK(r.premises.ok());
  CHECK(r.verdict_ok());
}

TEST_CASE("artifacts render") {
  StabilityConfig c;
  c.gauge = Gauge::beta_sum(1.0);
  c.epsilon = 4e-3;
  c.sample_count = 10;
  const StabilityReport r = run_stability(c, linear_map(1e-3));
  const std::string csv = samples_csv(r);
  CHECK(csv.rfind("x0,x1,value,bound,ratio,residual_bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  CHECK(to_json(r)["per_sample"].size() == 10);
  CHECK_FALSE(summary_text(r).empty());
}

}  // TEST_SUITE
