#include "doctest.h"
#include "oracle.hpp"
#include "orthostab/orthogonality.hpp"

using namespace orthostab;

namespace {

double dot_ld(const Vec<double>& a, const Vec<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

double norm_ld(const Vec<double>& a) { return std::sqrt(dot_ld(a, a)); }

}  // namespace

TEST_SUITE("orthogonality") {

TEST_CASE("euclidean examples") {
  const OrthoRelation r = OrthoRelation::euclidean(2);
  CHECK(r(Vec<double>{1, 0}, Vec<double>{0, 1}));
  CHECK(r(Vec<double>{1, 1}, Vec<double>{1, -1}));
  CHECK_FALSE(r(Vec<double>{1, 0}, Vec<double>{2, 0}));
  CHECK(r(Vec<Rational>{Rational(1, 3), 2}, Vec<Rational>{-6, 1}));
  CHECK_THROWS_AS(r(Vec<double>{1, 0, 0}, Vec<double>{0, 1}), InputError);
}

TEST_CASE("isosceles orthogonality in l1") {
  const OrthoRelation r = OrthoRelation::isosceles(2, Gauge::beta_sum(1.0));
  CHECK(r(Vec<double>{1, 0}, Vec<double>{0, 1}));
  CHECK_FALSE(r(Vec<double>{1, 0}, Vec<double>{1, 0}));
}

TEST_CASE("trivial-zero relation") {
  const OrthoRelation r = OrthoRelation::trivial_zero(2);
  CHECK(r(Vec<double>{0, 0}, Vec<double>{3, 1}));
  CHECK(r(Vec<double>{3, 1}, Vec<double>{0, 0}));
  CHECK_FALSE(r(Vec<double>{1, 0}, Vec<double>{0, 1}));
}

TEST_CASE("sampler contract") {
  const auto pairs = sample_orthogonal_pairs(OrthoRelation::euclidean(2), 3, 7);
  REQUIRE(pairs.size() == 3);
  for (const auto& [x, y] : pairs) CHECK(std::fabs(dot_ld(x, y)) <= 1e-9 * norm_ld(x) * norm_ld(y));

  const auto tz = sample_orthogonal_pairs(OrthoRelation::trivial_zero(2), 2, 1);
  REQUIRE(tz.size() == 2);
  CHECK(is_zero_vector<double>(tz[0].first));
  CHECK(is_zero_vector<double>(tz[1].second));

  CHECK_THROWS_AS(sample_orthogonal_pairs(OrthoRelation::euclidean(2), 0, 1), InputError);
}

TEST_CASE("property: sampled pairs satisfy the relation by an independent check") {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = static_cast<std::size_t>(gen.integer(2, 5));
    const auto seed = static_cast<std::uint64_t>(gen.integer(0, 1L << 40));
    for (const auto& [x, y] : sample_orthogonal_pairs(OrthoRelation::euclidean(d), 50, seed))
      CHECK(std::fabs(dot_ld(x, y)) <= 1e-9 * norm_ld(x) * norm_ld(y));
    for (const auto& [x, y] : sample_orthogonal_pairs_exact(OrthoRelation::euclidean(d), 50, seed)) {
      oracle::Q s = 0;
      for (std::size_t i = 0; i < d; ++i) s += x[i] * y[i];
      CHECK(s == 0);
    }
    const Gauge l1 = Gauge::beta_sum(1.0);
    for (const auto& [x, y] : sample_orthogonal_pairs(OrthoRelation::isosceles(2, l1), 20, seed)) {
      const double a = oracle::beta_sum({x[0] + y[0], x[1] + y[1]}, 1.0);
      const double b = oracle::beta_sum({x[0] - y[0], x[1] - y[1]}, 1.0);
      CHECK(std::fabs(a - b) <= 1e-9 * (a + b) + 1e-300);
    }
  }
}

TEST_CASE("axiom systems") {
  const OrthoRelation euc = OrthoRelation::euclidean(2);
  const RelationSamples s = make_relation_samples(euc, 200, 9);
  CHECK(check_relation_axioms(euc, AxiomSystem::sec3_ab_prime, s).all_pass());
  CHECK(check_relation_axioms(euc, AxiomSystem::ratz_123, s).all_pass());

  const OrthoRelation tz = OrthoRelation::trivial_zero(2);
  const AxiomReport r = check_relation_axioms(tz, AxiomSystem::fechner_sikorska, make_relation_samples(tz, 200, 9));
  const AxiomCheck* a2 = r.find("(2) for every x exists y: x _|_ y and x+y _|_ x-y");
  REQUIRE(a2 != nullptr);
  CHECK_FALSE(a2->pass);
  CHECK(a2->worst_witness.find("(1, 0)") != std::string::npos);

  CHECK(parse_axiom_system(to_string(AxiomSystem::sec2_ab)) == AxiomSystem::sec2_ab);
  CHECK_THROWS_AS(parse_axiom_system("nope"), ConfigError);
}

}  // TEST_SUITE
