// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "oracle.hpp"
#include "orthostab/corrector.hpp"
#include "orthostab/map_builder.hpp"
#include "orthostab/stability.hpp"
#include "orthostab/workbench.hpp"

using namespace orthostab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& name) {
  std::ifstream in(fs::path(ORTHOSTAB_CONFIG_DIR) / name);
  return nlohmann::json::parse(in);
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("orthostab_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(ORTHOSTAB_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// ---- 1 ----------------------------------------------------------------------

Outcome constants_reproduced() {
  Outcome o;
  const fs::path log = scratch_dir() / "constants.csv";
  const auto t0 = Clock::now();
  const int code = run_cli("constants --beta 1,2 --p 1 --tol 1e-12", log);
  const double dt = seconds_since(t0);
  o.require(code == 0, "exit status " + std::to_string(code));

  struct Want {
    std::string quantity, parameter;
    oracle::Q value;
  };
  const std::vector<Want> wants = {{"S", "1", oracle::Q(1)},
                                   {"S", "2", oracle::Q(1, 5)},
                                   {"K_add", "1", oracle::Q(31, 4)},
                                   {"K_quad", "1", oracle::Q(9, 8)}};
  std::istringstream csv(read_file(log));
  std::string line;
  std::size_t found = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (cells.size() != 5) continue;
    for (const auto& w : wants) {
      if (cells[0] != w.quantity || cells[1] != w.parameter) continue;
      ++found;
      const oracle::Q lo = oracle::parse_decimal(cells[2]);
      const oracle::Q hi = oracle::parse_decimal(cells[3]);
      const bool ok = lo <= w.value && w.value <= hi && oracle::Q(hi - lo) <= oracle::Q(1, 1000000000);
      o.require(ok, w.quantity + "(" + w.parameter + ") = [" + cells[2] + ", " + cells[3] + "]");
    }
  }
  o.require(found == wants.size(), "rows found " + std::to_string(found));
  o.require(dt < 1.0, "runtime");
  o.detail << "S(1), S(2), K_add(1), K_quad(1) enclosed, width <= 1e-9, " << dt << " s";
  return o;
}

// ---- 2 ----------------------------------------------------------------------

Outcome fixed_points() {
  Outcome o;
  const auto t0 = Clock::now();
  const Gauge gauge = Gauge::beta_sum(1.0);
  MapSpec additive{BaseKind::linear, 2, 2, {{5, -2}, {1, 3}}, {}, 0.0, NoiseParity::none, 1, ScalarBackend::float64};
  MapSpec quadratic{BaseKind::quadratic_form, 2, 1, {}, {{{2, 1}, {1, 3}}}, 0.0, NoiseParity::none, 1,
                    ScalarBackend::float64};
  double worst_float = 0.0;
  std::size_t exact_mismatches = 0;
  for (const MapSpec& spec : {additive, quadratic}) {
    const EvaluableMap f = build_map(spec, gauge);
    oracle::Gen gen(2024);
    for (int i = 0; i < 100; ++i) {
      const oracle::QVec xq = gen.dyadic_point(2, 10, 4);
      const std::vector<double> xd = gen.point(2, 4.0);
      const Vec<Rational> fx_q = f(Vec<Rational>(xq.begin(), xq.end()));
      const Vec<double> fx_d = f(xd);
      for (int n = 1; n <= 10; ++n) {
        const Tracked<Rational> gq = g_n<Rational>(f, std::span<const Rational>(xq), n);
        if (gq.value != fx_q) ++exact_mismatches;
        const Tracked<double> gd = g_n<double>(f, std::span<const double>(xd), n);
        for (std::size_t k = 0; k < gd.value.size(); ++k)
          worst_float = std::max(worst_float, std::fabs(gd.value[k] - fx_d[k]));
      }
    }
  }
  const double dt = seconds_since(t0);
  o.require(exact_mismatches == 0, std::to_string(exact_mismatches) + " exact mismatches");
  o.require(worst_float <= 1e-9, "float deviation");
  o.require(dt < 5.0, "runtime");
  o.detail << "additive + quadratic, 100 points, n <= 10: exact mismatches " << exact_mismatches
           << ", float max |g_n - f| " << worst_float << ", " << dt << " s";
  return o;
}

// ---- 3 ----------------------------------------------------------------------

Outcome lemma_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  const Gauge gauge = Gauge::beta_sum(1.0);
  const double delta = 1e-3;
  std::size_t instances = 0, entries = 0, unchecked = 0, library_fail = 0, oracle_fail = 0;

  for (int inst = 0; inst < 20; ++inst) {
    const bool additive = inst % 2 == 0;
    const Equation eq = additive ? Equation::jensen_additive : Equation::jensen_quadratic;
    oracle::Gen gen(1000 + inst);
    MapSpec spec;
    spec.domain_dim = 2;
    spec.seed = static_cast<std::uint64_t>(77 + inst);
    spec.noise_amplitude = delta;
    spec.backend = ScalarBackend::exact_rational;
    if (additive) {
      spec.base = BaseKind::linear;
      spec.codomain_dim = 2;
      spec.linear = {{double(gen.integer(-5, 5)), double(gen.integer(-5, 5))},
                     {double(gen.integer(-5, 5)), double(gen.integer(-5, 5))}};
      spec.noise_parity = NoiseParity::odd;
    } else {
      spec.base = BaseKind::quadratic_form;
      spec.codomain_dim = 1;
      const double b = double(gen.integer(-3, 3));
      spec.forms = {{{double(gen.integer(-4, 4)), b}, {b, double(gen.integer(-4, 4))}}};
      spec.noise_parity = NoiseParity::even;
    }
    const EvaluableMap f = build_map(spec, gauge);
    const Rational eps = Rational(epsilon_from_noise(eq, 1.0, delta));

    PremiseSamples<Rational> samples;
    samples.pairs = sample_pairs<Rational>(OrthoRelation::euclidean(2), 60, spec.seed);
    for (int i = 0; i < 30; ++i) {
      const oracle::QVec z = gen.dyadic_point(2);
      samples.points.emplace_back(z.begin(), z.end());
    }
    if (!additive) {
      const Vec<Rational> zero(2, Rational(0));
      samples.pairs.emplace_back(zero, zero);
      for (const auto& z : samples.points) {
        samples.pairs.emplace_back(zero, z);
        samples.pairs.emplace_back(z, zero);
      }
    }
    const DerivedC<Rational> dc = additive ? derive_C_additive<Rational>(f, eps, 1.0, gauge, samples)
                                           : derive_C_quadratic<Rational>(f, eps, 1.0, gauge, samples);
    o.require(dc.certified && dc.chain.pass(), "derive_C instance " + std::to_string(inst));
    ++instances;

    const oracle::QMap fq = [&](const oracle::QVec& x) {
      const Vec<Rational> y = f(Vec<Rational>(x.begin(), x.end()));
      return oracle::QVec(y.begin(), y.end());
    };
    for (int k = 0; k < 3; ++k) {
      const oracle::QVec x = gen.dyadic_point(2);
      const std::span<const Rational> xs(x);
      const LemmaReport part1 = verify_lemma_part1<Rational>(f, xs, 1, 8, dc.C, 1.0, gauge);
      const LemmaReport gaps = verify_corrector_gaps<Rational>(f, xs, 1, 8, dc.C, 1.0, gauge);
      if (!part1.checked || !gaps.checked) ++unchecked;
      if (!part1.pass || !gaps.pass) ++library_fail;

      const oracle::QVec x2 = oracle::scale(x, 2);
      const oracle::QVec fx2 = fq(x2);
      for (int n = 1; n <= 8; ++n) {
        const oracle::QVec gn = oracle::corrector(fq, x2, n);
        const oracle::QVec gn1 = oracle::corrector(fq, x2, n + 1);
        const oracle::Q hn = oracle::l1(oracle::axpy(1, fx2, -1, gn));
        const oracle::Q hn1 = oracle::l1(oracle::axpy(1, fx2, -1, gn1));
        const oracle::Q bound = dc.C * oracle::pow2(-n);
        if (abs(oracle::Q(hn1 - hn)) > bound) ++oracle_fail;
        // ||g_n - g_{n+1}|| at x itself (the corrector gap, not h).
        const oracle::Q step = oracle::l1(oracle::axpy(1, oracle::corrector(fq, x, n), -1, oracle::corrector(fq, x, n + 1)));
        if (step > bound) ++oracle_fail;
        entries += 2;
      }
    }
  }
  const double dt = seconds_since(t0);
  o.require(unchecked == 0, "hypothesis gate skipped checks");
  o.require(library_fail == 0, "library verifier");
  o.require(oracle_fail == 0, "oracle recomputation");
  o.require(dt < 30.0, "runtime");
  o.detail << instances << " rational instances, " << entries << " oracle inequalities, library failures "
           << library_fail << ", oracle failures " << oracle_fail << ", " << dt << " s";
  return o;
}

// ---- 4 and 5 ----------------------------------------------------------------

nlohmann::json quadratic_config(double beta) {
  nlohmann::json doc = load_json("quadratic_beta1.json");
  doc["gauge"]["beta"] = beta;
  doc["stability"]["beta"] = beta;
  return doc;
}

nlohmann::json additive_config(double beta) {
  nlohmann::json doc = load_json(beta == 1.0 ? "additive_beta1.json" : "additive_beta_half.json");
  return doc;
}

Outcome end_to_end(Equation eq) {
  Outcome o;
  const bool additive = eq == Equation::jensen_additive;
  const double delta = 1e-3;
  for (double beta : {0.5, 1.0}) {
    const nlohmann::json doc = additive ? additive_config(beta) : quadratic_config(beta);
    const ExperimentConfig cfg = parse_config(doc);
    const std::string tag = "beta=" + format_number(beta) + ": ";
    o.require(cfg.dimension == 2 && cfg.map && cfg.map->noise_amplitude == delta && cfg.stability &&
                  cfg.stability->beta == beta && cfg.stability->sample_count == 1000 && cfg.stability->n_max == 20,
              tag + "config does not match the required scale");

    const auto t0 = Clock::now();
    const ExperimentResult res = run_experiment(cfg);
    const double dt = seconds_since(t0);
    if (!res.report) {
      o.require(false, tag + "no report, exit " + std::to_string(res.exit_status));
      continue;
    }
    const StabilityReport& r = *res.report;

    // eps from the noise level, checked against the closed form.
    const long double eps_oracle = (additive ? std::pow(2.0L, beta) + 2 : 2 * std::pow(2.0L, beta) + 2) * delta;
    o.require(std::fabs(r.epsilon - static_cast<double>(eps_oracle)) <= 1e-15, tag + "epsilon");
    const long double k_oracle = oracle::stability_K(additive, beta);
    o.require(std::fabs(r.K - static_cast<double>(k_oracle)) <= 1e-9 * static_cast<double>(k_oracle), tag + "K");

    std::size_t within = 0;
    for (const auto& row : r.per_sample) within += row.within ? 1 : 0;
    o.require(r.per_sample.size() == 1000 && within == 1000, tag + std::to_string(within) + "/1000 within");
    o.require(r.premises.ok(), tag + "premise");
    bool chain_ok = true;
    for (const auto& c : r.chain.checks)
      chain_ok = chain_ok && c.pass() && c.checked >= (c.name == "zero_value" ? 1u : 1000u);
    o.require(chain_ok, tag + "chain");
    if (!additive) {
      const InequalityCheck* ev = r.chain.find("evenness");
      const double want = std::pow(2.0, 1.0 - beta) * (std::pow(2.0, -beta) + 1.0) * r.epsilon;
      o.require(ev && ev->pass() && std::fabs(ev->bound - want) <= 1e-12 * want, tag + "evenness inequality");
    }
    o.require(res.exit_status == kExitOk, tag + "exit " + std::to_string(res.exit_status));
    o.require(dt < 60.0, tag + "runtime");
    o.detail << tag << within << "/1000 within, max ratio " << format_number(r.max_ratio) << ", K " << r.K << ", "
             << r.chain.checks.size() << " chain inequalities, " << dt << " s; ";
  }
  return o;
}

// ---- 6 ----------------------------------------------------------------------

// The float64 instance viewed through the exact backend: dyadic inputs go to
// the double implementation unchanged and its outputs come back exactly, so
// the corrector combination itself is carried out without rounding.
EvaluableMap exact_view(const EvaluableMap& f) {
  return EvaluableMap(
      f.domain_dim(), f.codomain_dim(), f.growth_hint(),
      [f](std::span<const double> x) { return f.evaluate<double>(x); },
      [f](std::span<const Rational> x) {
        Vec<double> xd;
        for (const auto& q : x) {
          xd.push_back(q.get_d());
          if (Rational(xd.back()) != q) throw InputError("point is not a double");
        }
        Vec<Rational> y;
        for (double v : f.evaluate<double>(std::span<const double>(xd))) y.push_back(Rational(v));
        return y;
      });
}

// Jensen defect of g_n in exact arithmetic, so rounding cannot masquerade as
// growth; only the final gauge is applied in double when beta < 1.
double exact_defect(const EvaluableMap& f, Equation eq, int n, const Vec<Rational>& x, const Vec<Rational>& y,
                    const Gauge& gauge) {
  const auto g = [&](const Vec<Rational>& p) { return g_n<Rational>(f, std::span<const Rational>(p), n); };
  Vec<Rational> mid(x.size()), half_diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mid[i] = (x[i] + y[i]) / 2;
    half_diff[i] = (x[i] - y[i]) / 2;
  }
  const Tracked<Rational> gx = g(x), gy = g(y), gp = g(mid);
  Tracked<Rational> d;
  if (eq == Equation::jensen_additive) {
    d = combine<Rational>({{Rational(2), &gp}, {Rational(-1), &gx}, {Rational(-1), &gy}});
  } else {
    const Tracked<Rational> gm = g(half_diff);
    d = combine<Rational>({{Rational(2), &gp}, {Rational(2), &gm}, {Rational(-1), &gx}, {Rational(-1), &gy}});
  }
  if (gauge.supports_exact()) return gauge.evaluate(std::span<const Rational>(d.value)).get_d();
  return gauge.evaluate(std::span<const double>(to_doubles<Rational>(std::span<const Rational>(d.value))));
}

Outcome defect_decay() {
  Outcome o;
  const OrthoRelation rel = OrthoRelation::euclidean(2);
  // Dyadic pairs (x, t x^perp), so that halves and 2^n multiples stay doubles.
  oracle::Gen gen(5150);
  std::vector<PointPair<Rational>> pairs;
  std::vector<PointPair<double>> float_pairs;
  while (pairs.size() < 100) {
    const oracle::QVec x = gen.dyadic_point(2);
    const Rational t(gen.integer(-16, 16), 16);
    Vec<Rational> a(x.begin(), x.end()), b{-t * x[1], t * x[0]};
    for (auto& v : b) v.canonicalize();
    if (pairs.size() == 0) a = {0, 0};
    if (pairs.size() == 1) b = {0, 0};
    pairs.emplace_back(a, b);
    float_pairs.emplace_back(to_doubles<Rational>(std::span<const Rational>(a)),
                             to_doubles<Rational>(std::span<const Rational>(b)));
  }
  for (const Equation eq : {Equation::jensen_additive, Equation::jensen_quadratic}) {
    for (double beta : {0.5, 1.0}) {
      const nlohmann::json doc = eq == Equation::jensen_additive ? additive_config(beta) : quadratic_config(beta);
      const ExperimentConfig cfg = parse_config(doc);
      const EvaluableMap f = build_map(*cfg.map, cfg.gauge);
      const EvaluableMap fx = exact_view(f);
      const double eps = cfg.stability->epsilon;
      std::vector<double> defects, float_defects;
      double slack = 0.0;
      for (int n : {5, 10, 15, 20}) {
        double worst = 0.0;
        for (const auto& [x, y] : pairs)
          if (rel(x, y)) worst = std::max(worst, exact_defect(fx, eq, n, x, y, cfg.gauge));
        defects.push_back(worst);

        const VectorFn<double> g = [&](const Vec<double>& x) { return g_n<double>(f, std::span<const double>(x), n); };
        const ConclusionDefect<double> cd = verify_conclusion<double>(g, eq, rel, float_pairs, cfg.gauge);
        float_defects.push_back(cd.max.value);
        slack = cd.max.slack;
      }
      const std::string tag = to_string(eq) + " beta=" + format_number(beta);
      bool monotone = true;
      for (std::size_t i = 1; i < defects.size(); ++i) monotone = monotone && defects[i] <= defects[i - 1];
      o.require(monotone, tag + " not non-increasing");
      const double bound = cauchy_gap(20, beta) * eps + 10.0 * slack;
      o.require(defects.back() <= bound, tag + " n=20 above bound");
      o.require(float_defects.back() <= bound, tag + " float64 n=20 above bound");
      o.detail << tag << ": exact";
      for (double d : defects) o.detail << " " << format_number(d);
      o.detail << ", float64";
      for (double d : float_defects) o.detail << " " << format_number(d);
      o.detail << ", n=20 bound " << format_number(bound) << "; ";
    }
  }
  return o;
}

// ---- 7 ----------------------------------------------------------------------

Outcome corollary_identity() {
  Outcome o;
  double worst = 0.0;
  for (double p : {0.25, 0.5, 0.75, 1.0}) {
    for (bool additive : {true, false}) {
      const Interval kp = additive ? K_add_p(p) : K_quad_p(p);
      const Interval k = additive ? K_add(p) : K_quad(p);
      const double rel = std::fabs(std::pow(kp.midpoint(), p) - k.midpoint()) / k.midpoint();
      worst = std::max(worst, rel);
      o.require(rel <= 1e-9, std::string(additive ? "K_add_p" : "K_quad_p") + "(" + format_number(p) + ")");
    }
  }
  o.detail << "max relative |K_p^p - K| " << worst << "; ";

  const double delta = 1e-3;
  std::size_t compared = 0, differing = 0;
  for (double p : {0.25, 0.5, 0.75}) {
    for (const Equation eq : {Equation::jensen_additive, Equation::jensen_quadratic}) {
      const bool additive = eq == Equation::jensen_additive;
      const Gauge quasi = Gauge::lp_quasi(p);
      MapSpec spec;
      spec.domain_dim = 2;
      spec.noise_amplitude = delta;
      spec.seed = 7;
      if (additive) {
        spec.base = BaseKind::linear;
        spec.codomain_dim = 2;
        spec.linear = {{5, 0}, {1, 3}};
        spec.noise_parity = NoiseParity::odd;
      } else {
        spec.base = BaseKind::quadratic_form;
        spec.codomain_dim = 1;
        spec.forms = {{{2, 1}, {1, 3}}};
        spec.noise_parity = NoiseParity::even;
      }
      const EvaluableMap f = build_map(spec, quasi);
      // ||eta||_p <= delta means ||eta||_p^p <= delta^p.
      const double eps_p = epsilon_from_noise(eq, p, std::pow(delta, p));

      StabilityConfig qc;
      qc.equation = eq;
      qc.beta = p;
      qc.gauge = quasi;
      qc.quasi_corollary = true;
      qc.epsilon = std::pow(eps_p, 1.0 / p);
      qc.sample_count = 200;
      qc.seed = 42;

      StabilityConfig dc = qc;
      dc.gauge = Gauge::beta_sum(p);
      dc.quasi_corollary = false;
      dc.epsilon = std::pow(qc.epsilon, p);

      const StabilityReport rq = run_stability(qc, f);
      const StabilityReport rd = run_stability(dc, f);
      o.require(rq.per_sample.size() == rd.per_sample.size(), "sample counts");
      for (std::size_t i = 0; i < std::min(rq.per_sample.size(), rd.per_sample.size()); ++i) {
        ++compared;
        if (rq.per_sample[i].within != rd.per_sample[i].within) ++differing;
      }
      o.require(rq.verdict_ok() == rd.verdict_ok() && rq.premises.ok() == rd.premises.ok(),
                "overall verdicts p=" + format_number(p));
    }
  }
  o.require(differing == 0, std::to_string(differing) + " differing verdicts");
  o.detail << compared << " per-sample verdicts compared, " << differing << " differ";
  return o;
}

// ---- 8 ----------------------------------------------------------------------

Outcome axiom_suites() {
  Outcome o;
  for (double beta : {0.25, 0.5, 0.75, 1.0}) {
    const Gauge g = Gauge::beta_sum(beta);
    const auto samples = make_fnorm_samples(3, 1000, 17);
    const AxiomReport fn = check_fnorm_axioms(g, samples);
    const auto hs = make_homogeneity_samples(3, 1000, 18);
    const AxiomReport hom = check_beta_homogeneity(g, beta, hs);
    o.require(fn.checks.size() == 6 && fn.all_pass(), "beta-sum(" + format_number(beta) + ") F-norm axioms");
    o.require(hom.all_pass(), "beta-sum(" + format_number(beta) + ") homogeneity");
  }
  const double qc = estimate_quasi_constant(Gauge::lp_quasi(0.5), 2, 100000, 99);
  o.require(qc > 1.9 && qc <= 2.0001, "lp-quasi(0.5) constant " + format_number(qc));
  o.detail << "beta-sum(0.25..1) pass 6 axioms + homogeneity; lp-quasi(0.5) constant " << format_number(qc) << "; ";

  const OrthoRelation euc = OrthoRelation::euclidean(2);
  const RelationSamples rs = make_relation_samples(euc, 1000, 5);
  for (auto sys : {AxiomSystem::sec2_ab, AxiomSystem::sec3_ab_prime, AxiomSystem::fechner_sikorska,
                   AxiomSystem::ratz_123}) {
    const AxiomReport rep = check_relation_axioms(euc, sys, rs);
    o.require(rep.all_pass(), "euclidean vs " + to_string(sys));
  }
  const OrthoRelation tz = OrthoRelation::trivial_zero(2);
  const AxiomReport tzr = check_relation_axioms(tz, AxiomSystem::fechner_sikorska, make_relation_samples(tz, 1000, 5));
  const AxiomCheck* failed = nullptr;
  for (const auto& c : tzr.checks)
    if (!c.pass && c.axiom.find("(2)") != std::string::npos) failed = &c;
  o.require(failed != nullptr && !failed->worst_witness.empty(), "trivial-zero axiom (2) witness");
  if (failed) o.detail << "trivial-zero fails '" << failed->axiom << "' at " << failed->worst_witness;
  return o;
}

// ---- 9 ----------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  const std::string config = (fs::path(ORTHOSTAB_CONFIG_DIR) / "additive_beta1.json").string();
  const fs::path a = scratch_dir() / "run_a", b = scratch_dir() / "run_b";
  const int ca = run_cli("run --config " + config + " --out " + a.string(), scratch_dir() / "run_a.log");
  const int cb = run_cli("run --config " + config + " --out " + b.string(), scratch_dir() / "run_b.log");
  o.require(ca == 0 && cb == 0, "exit statuses " + std::to_string(ca) + ", " + std::to_string(cb));
  const std::string sa = read_file(a / "samples.csv"), sb = read_file(b / "samples.csv");
  o.require(!sa.empty() && sa == sb, "samples.csv differs");
  o.detail << "two CLI runs, samples.csv " << sa.size() << " bytes, identical: " << (sa == sb ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {1, "constants reproduce closed forms", constants_reproduced},
      {2, "fixed points of the corrector", fixed_points},
      {3, "exact lemma oracle", lemma_oracle},
      {4, "additive end-to-end", [] { return end_to_end(Equation::jensen_additive); }},
      {5, "quadratic end-to-end", [] { return end_to_end(Equation::jensen_quadratic); }},
      {6, "conclusion defect decay", defect_decay},
      {7, "corollary identity", corollary_identity},
      {8, "axiom suites", axiom_suites},
      {9, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail.str() << std::endl;
    failures += o.pass ? 0 : 1;
  }
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  std::cout << (9 - failures) << "/9 criteria pass" << std::endl;
  return failures == 0 ? 0 : 1;
}
