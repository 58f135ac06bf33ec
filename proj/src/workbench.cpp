#include "orthostab/workbench.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace orthostab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

const json* section(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end() || it->is_null()) return nullptr;
  if (!it->is_object()) fail(name, "must be an object");
  return &*it;
}

double number(const json& sec, const std::string& where, const char* key, std::optional<double> fallback) {
  auto it = sec.find(key);
  if (it == sec.end() || it->is_null()) {
    if (!fallback) fail(where + "." + key, "required");
    return *fallback;
  }
  if (!it->is_number()) fail(where + "." + key, "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) fail(where + "." + key, "must be finite");
  return v;
}

std::int64_t integer(const json& sec, const std::string& where, const char* key, std::int64_t fallback) {
  auto it = sec.find(key);
  if (it == sec.end() || it->is_null()) return fallback;
  if (!it->is_number_integer()) fail(where + "." + key, "expected an integer");
  return it->get<std::int64_t>();
}

std::uint64_t seed_value(const json& sec, const std::string& where, const char* key, std::uint64_t fallback) {
  auto it = sec.find(key);
  if (it == sec.end() || it->is_null()) return fallback;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer() && it->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(it->get<std::int64_t>());
  fail(where + "." + key, "expected a non-negative integer");
}

std::string text(const json& sec, const std::string& where, const char* key, std::optional<std::string> fallback) {
  auto it = sec.find(key);
  if (it == sec.end() || it->is_null()) {
    if (!fallback) fail(where + "." + key, "required");
    return *fallback;
  }
  if (!it->is_string()) fail(where + "." + key, "expected a string");
  return it->get<std::string>();
}

bool flag(const json& sec, const std::string& where, const char* key, bool fallback) {
  auto it = sec.find(key);
  if (it == sec.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) fail(where + "." + key, "expected true or false");
  return it->get<bool>();
}

Matrix matrix(const json& value, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array of rows");
  Matrix m;
  for (const auto& row : value) {
    if (!row.is_array()) fail(where, "expected an array of rows");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) fail(where, "entries must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

template <class F>
auto prefixed(const std::string& field, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    fail(field, e.what());
  }
}

}  // namespace

Gauge parse_gauge(const json& sec) {
  const std::string kind = text(sec, "gauge", "kind", std::nullopt);
  if (kind == "euclidean") return Gauge::euclidean();
  if (kind == "euclidean-squared") return Gauge::beta_sum(2.0);
  if (kind == "beta-sum") {
    const double beta = number(sec, "gauge", "beta", std::nullopt);
    return prefixed("gauge.beta", [&] { return Gauge::beta_sum(beta); });
  }
  if (kind == "lp-quasi") {
    const double p = number(sec, "gauge", "p", std::nullopt);
    return prefixed("gauge.p", [&] { return Gauge::lp_quasi(p); });
  }
  fail("gauge.kind", "unknown gauge '" + kind + "' (expected euclidean, beta-sum, lp-quasi or euclidean-squared)");
}

ExperimentConfig parse_config(const json& doc, const Overrides& ov) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  ExperimentConfig c;

  if (const json* s = section(doc, "space")) {
    const auto d = integer(*s, "space", "dimension", 2);
    if (d < 1) fail("space.dimension", "must be >= 1");
    c.dimension = static_cast<std::size_t>(d);
    const auto m = integer(*s, "space", "codomain_dimension", d);
    if (m < 1) fail("space.codomain_dimension", "must be >= 1");
    c.codomain_dimension = static_cast<std::size_t>(m);
  } else {
    c.codomain_dimension = c.dimension;
  }

  if (const json* g = section(doc, "gauge")) {
    c.gauge_name = text(*g, "gauge", "kind", std::nullopt);
    c.gauge = parse_gauge(*g);
  } else {
    c.gauge_name = "euclidean";
  }

  const json* st = section(doc, "stability");
  const json* rel = section(doc, "relation");
  if (rel || st) {
    const json empty = json::object();
    const json& r = rel ? *rel : empty;
    const std::string kind = text(r, "relation", "kind", std::string("euclidean"));
    const auto dim = integer(r, "relation", "dimension", static_cast<std::int64_t>(c.dimension));
    if (dim < 2) fail("relation.dimension", "must be >= 2");
    double tol = number(r, "relation", "tolerance", OrthoRelation::kDefaultTolerance);
    if (ov.tol) tol = *ov.tol;
    if (!(tol >= 0.0)) fail("relation.tolerance", "must be >= 0");
    const auto d = static_cast<std::size_t>(dim);
    if (kind == "euclidean")
      c.relation = OrthoRelation::euclidean(d, tol);
    else if (kind == "isosceles")
      c.relation = OrthoRelation::isosceles(d, c.gauge, tol);
    else if (kind == "trivial-zero")
      c.relation = OrthoRelation::trivial_zero(d);
    else
      fail("relation.kind", "unknown relation '" + kind + "' (expected euclidean, isosceles or trivial-zero)");
  }

  ScalarBackend mode = ScalarBackend::float64;
  if (st) mode = prefixed("stability.mode", [&] { return parse_backend(text(*st, "stability", "mode", std::string("float64"))); });
  if (ov.mode) mode = *ov.mode;

  if (const json* m = section(doc, "map")) {
    MapSpec spec;
    spec.domain_dim = c.dimension;
    spec.codomain_dim = c.codomain_dimension;
    spec.base = prefixed("map.base", [&] { return parse_base_kind(text(*m, "map", "base", std::nullopt)); });
    if (spec.base == BaseKind::linear) {
      if (!m->contains("matrix")) fail("map.matrix", "required for a linear base");
      spec.linear = matrix(m->at("matrix"), "map.matrix");
    } else if (spec.base == BaseKind::quadratic_form) {
      if (m->contains("matrices")) {
        if (!m->at("matrices").is_array()) fail("map.matrices", "expected an array of matrices");
        for (const auto& q : m->at("matrices")) spec.forms.push_back(matrix(q, "map.matrices"));
      } else if (m->contains("matrix")) {
        spec.forms.push_back(matrix(m->at("matrix"), "map.matrix"));
      } else {
        fail("map.matrices", "required for a quadratic-form base");
      }
    }
    spec.noise_amplitude = number(*m, "map", "noise_amplitude", 0.0);
    if (spec.noise_amplitude < 0.0) fail("map.noise_amplitude", "must be >= 0");
    spec.noise_parity = prefixed("map.noise_parity",
                                 [&] { return parse_noise_parity(text(*m, "map", "noise_parity", std::string("none"))); });
    spec.seed = seed_value(*m, "map", "seed", 0);
    spec.backend = mode;
    prefixed("map", [&] {
      validate(spec);
      return 0;
    });
    c.map = spec;
  }

  if (st) {
    StabilityConfig s;
    s.equation = prefixed("stability.equation",
                          [&] { return parse_equation(text(*st, "stability", "equation", std::nullopt)); });
    s.beta = number(*st, "stability", "beta", c.gauge.homogeneity());
    if (!(s.beta > 0.0) || s.beta > 1.0) fail("stability.beta", "must lie in (0, 1], got " + format_number(s.beta));
    s.quasi_corollary = flag(*st, "stability", "quasi_corollary", false);
    s.mode = mode;
    const auto count = integer(*st, "stability", "sample_count", 1000);
    if (count < 1) fail("stability.sample_count", "must be >= 1");
    s.sample_count = static_cast<std::size_t>(count);
    const auto n_max = integer(*st, "stability", "n_max", 20);
    if (n_max < 1 || n_max > 500) fail("stability.n_max", "must lie in [1, 500]");
    s.n_max = static_cast<int>(n_max);
    s.seed = ov.seed ? *ov.seed : seed_value(*st, "stability", "seed", 0);
    const auto shift = integer(*st, "stability", "point_scale_log2", 0);
    if (shift < 0 || shift > 16) fail("stability.point_scale_log2", "must lie in [0, 16]");
    s.point_scale_log2 = static_cast<int>(shift);
    const auto threads = integer(*st, "stability", "threads", 0);
    if (threads < 0 || threads > 256) fail("stability.threads", "must lie in [0, 256]");
    s.threads = static_cast<unsigned>(threads);
    s.gauge = c.gauge;
    s.relation = *c.relation;

    if (st->contains("epsilon") && !st->at("epsilon").is_null()) {
      s.epsilon = number(*st, "stability", "epsilon", std::nullopt);
      if (s.epsilon < 0.0) fail("stability.epsilon", "must be >= 0");
      c.epsilon_source = "configured";
    } else {
      if (!c.map) fail("stability.epsilon", "required when there is no map section to derive it from");
      const double delta = c.map->noise_amplitude;
      if (s.quasi_corollary) {
        // Premise under ||.||^p: eps^p = (k 2^p + 2) delta^p.
        const double p = s.beta;
        s.epsilon = std::pow(epsilon_from_noise(s.equation, p, std::pow(delta, p)), 1.0 / p);
      } else {
        s.epsilon = epsilon_from_noise(s.equation, s.beta, delta);
      }
      c.epsilon_source = "derived from noise_amplitude";
    }
    c.stability = s;
  }

  if (const json* a = section(doc, "axioms")) {
    c.axioms.target = text(*a, "axioms", "target", std::string("gauge"));
    if (c.axioms.target != "gauge" && c.axioms.target != "relation")
      fail("axioms.target", "expected gauge or relation");
    c.axioms.system = text(*a, "axioms", "system", std::string("all"));
    if (c.axioms.system != "all")
      prefixed("axioms.system", [&] { return parse_axiom_system(c.axioms.system); });
    const auto count = integer(*a, "axioms", "sample_count", 1000);
    if (count < 1) fail("axioms.sample_count", "must be >= 1");
    c.axioms.sample_count = static_cast<std::size_t>(count);
    c.axioms.seed = ov.seed ? *ov.seed : seed_value(*a, "axioms", "seed", 1);
    if (a->contains("beta")) {
      const double b = number(*a, "axioms", "beta", std::nullopt);
      if (!(b > 0.0)) fail("axioms.beta", "must be > 0");
      c.axioms.beta = b;
    }
  } else if (ov.seed) {
    c.axioms.seed = *ov.seed;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc, overrides);
}

// ---- run -----------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult out;
  auto error_result = [&](int status, const std::string& kind, const std::string& message) {
    out.exit_status = status;
    out.report_json = {{"error", {{"kind", kind}, {"message", message}}}, {"exit_status", status}};
    out.summary = kind + ": " + message + "\nexit status " + std::to_string(status) + "\n";
    return out;
  };
  if (!config.stability) return error_result(kExitConfig, "config error", "stability: section required");
  if (!config.map) return error_result(kExitConfig, "config error", "map: section required");

  StabilityReport report;
  try {
    const EvaluableMap f = build_map(*config.map, config.gauge);
    report = run_stability(*config.stability, f);
  } catch (const ConfigError& e) {
    return error_result(kExitConfig, "config error", e.what());
  } catch (const InputError& e) {
    return error_result(kExitConfig, "config error", e.what());
  } catch (const RangeError& e) {
    return error_result(kExitBound, "guard tripped", e.what());
  } catch (const SamplerError& e) {
    return error_result(kExitBound, "guard tripped", e.what());
  }

  if (!report.premises.ok())
    out.exit_status = kExitPremise;
  else if (!report.verdict_ok())
    out.exit_status = kExitBound;
  else
    out.exit_status = kExitOk;

  out.report_json = to_json(report);
  out.report_json["epsilon_source"] = config.epsilon_source;
  out.report_json["map"] = {{"base", to_string(config.map->base)},
                            {"noise_amplitude", config.map->noise_amplitude},
                            {"noise_parity", to_string(config.map->noise_parity)},
                            {"seed", config.map->seed}};
  out.report_json["exit_status"] = out.exit_status;
  out.samples_csv = samples_csv(report);
  out.summary = summary_text(report) + "epsilon source    " + config.epsilon_source + "\nexit status       " +
                std::to_string(out.exit_status) + "\n";
  out.report = std::move(report);
  return out;
}

int run_experiment(const std::string& config_path, const std::string& out_dir, const Overrides& overrides,
                   std::ostream& out, std::ostream& err) {
  ExperimentResult result;
  try {
    result = run_experiment(load_config(config_path, overrides));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (result.exit_status == kExitConfig && !result.report) {
    err << result.summary;
    return kExitConfig;
  }
  try {
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / "report.json") << result.report_json.dump(2) << '\n';
    std::ofstream(std::filesystem::path(out_dir) / "samples.csv") << result.samples_csv;
    std::ofstream(std::filesystem::path(out_dir) / "summary.txt") << result.summary;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "cannot write artifacts: " << e.what() << '\n';
    return kExitConfig;
  }
  out << result.summary;
  if (result.exit_status == kExitPremise && result.report)
    for (const auto& w : result.report->premises.witnesses) err << "premise violation: " << w << '\n';
  return result.exit_status;
}

// ---- constants -----------------------------------------------------------------

std::vector<ConstantRow> constants_table(const std::vector<double>& betas, const std::vector<double>& ps,
                                         double tol) {
  std::vector<ConstantRow> rows;
  for (double b : betas) {
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("beta: must be > 0, got " + format_number(b));
    for (auto q : {PreciseQuantity::S, PreciseQuantity::K_add, PreciseQuantity::K_quad})
      rows.push_back({to_string(q), b, precise_constant(q, b, tol)});
  }
  for (double p : ps) {
    if (!(p > 0.0) || p > 1.0) throw ConfigError("p: must lie in (0, 1], got " + format_number(p));
    for (auto q : {PreciseQuantity::K_add_p, PreciseQuantity::K_quad_p})
      rows.push_back({to_string(q), p, precise_constant(q, p, tol)});
  }
  return rows;
}

std::string constants_csv(const std::vector<ConstantRow>& rows) {
  std::ostringstream os;
  os << "quantity,parameter,lower,upper,width\n";
  for (const auto& r : rows)
    os << r.quantity << ',' << format_number(r.parameter) << ',' << r.value.lower << ',' << r.value.upper << ','
       << format_number(r.value.width) << '\n';
  return os.str();
}

int constants_command(const std::vector<double>& betas, const std::vector<double>& ps, double tol,
                      std::ostream& out, std::ostream& err) {
  if (!(tol > 0.0)) {
    err << "config error: tol: must be > 0\n";
    return kExitConfig;
  }
  std::vector<ConstantRow> rows;
  try {
    rows = constants_table(betas, ps, tol);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RangeError& e) {
    err << "guard tripped: " << e.what() << '\n';
    return kExitBound;
  }
  out << constants_csv(rows);
  return kExitOk;
}

// ---- axioms --------------------------------------------------------------------

AxiomReport check_axioms(const ExperimentConfig& config, const std::string& target) {
  AxiomReport report;
  const auto& a = config.axioms;
  if (target == "gauge") {
    const Gauge& g = config.gauge;
    const std::size_t dim = config.codomain_dimension;
    const double beta = a.beta.value_or(g.homogeneity());
    if (g.kind() == GaugeKind::lp_quasi) {
      const double estimate = estimate_quasi_constant(g, dim, a.sample_count, a.seed);
      const double analytic = g.quasi_constant();
      AxiomCheck q{"quasi-triangle ||x + y|| <= C (||x|| + ||y||)", estimate <= analytic * (1.0 + kAlgebraicTol), "",
                   estimate, "C = " + format_number(analytic) + ", empirical max ratio " + format_number(estimate)};
      report.checks.push_back(q);
    } else {
      const auto samples = make_fnorm_samples(dim, a.sample_count, a.seed);
      report = check_fnorm_axioms(g, samples);
    }
    const auto hs = make_homogeneity_samples(dim, a.sample_count, a.seed + 1);
    for (auto& c : check_beta_homogeneity(g, beta, hs).checks) report.checks.push_back(std::move(c));
    return report;
  }
  if (target == "relation") {
    if (!config.relation) throw ConfigError("relation: section required");
    const RelationSamples samples = make_relation_samples(*config.relation, a.sample_count, a.seed);
    std::vector<AxiomSystem> systems;
    if (a.system == "all")
      systems = {AxiomSystem::ratz_123, AxiomSystem::fechner_sikorska, AxiomSystem::sec2_ab,
                 AxiomSystem::sec3_ab_prime};
    else
      systems = {parse_axiom_system(a.system)};
    for (auto s : systems)
      for (auto c : check_relation_axioms(*config.relation, s, samples).checks) {
        c.axiom = to_string(s) + " " + c.axiom;
        report.checks.push_back(std::move(c));
      }
    return report;
  }
  throw ConfigError("target: expected gauge or relation, got '" + target + "'");
}

int check_axioms_command(const std::string& config_path, const std::string& target, const std::string& out_dir,
                         const Overrides& overrides, std::ostream& out, std::ostream& err) {
  AxiomReport report;
  std::string chosen;
  try {
    const ExperimentConfig config = load_config(config_path, overrides);
    chosen = target.empty() ? config.axioms.target : target;
    report = check_axioms(config, chosen);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SamplerError& e) {
    err << "guard tripped: " << e.what() << '\n';
    return kExitBound;
  }
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.axiom << "  worst " << format_number(c.worst_value);
    if (!c.worst_witness.empty()) out << "  witness " << c.worst_witness;
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << '\n';
  }
  const int status = report.all_pass() ? kExitOk : kExitBound;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    json j{{"target", chosen}, {"all_pass", report.all_pass()}, {"checks", to_json(report)}, {"exit_status", status}};
    std::ofstream(std::filesystem::path(out_dir) / "axioms.json") << j.dump(2) << '\n';
  }
  return status;
}

}  // namespace orthostab
