#include "dflab/io.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "dflab/error.hpp"

namespace dflab::io {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

void allow_only(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) parse_error(std::string(what) + " must be a JSON object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) parse_error(std::string("unknown key \"") + key + "\" in " + what);
  }
}

const Json& require(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) parse_error(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

template <typename T>
T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("bad value for ") + what + ": " + e.what());
  }
}

double number(const Json& j, const char* what) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    parse_error(std::string("bad number for ") + what + ": \"" + s + "\"");
  }
  if (!j.is_number()) parse_error(std::string("expected a number for ") + what);
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string("expected an array for ") + what);
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json pair_json(const PairWitness& w) { return {{"i", w.i}, {"j", w.j}, {"value", num(w.value)}}; }

Json timed_json(const TimedWitness& w) {
  return {{"t", num(w.t)}, {"i", w.i}, {"j", w.j}, {"value", num(w.value)}};
}

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::Interval: return "interval";
    case DomainKind::Rectangle: return "rectangle";
    case DomainKind::Graph: return "graph";
  }
  return "graph";
}

std::vector<double> conductances(const Domain& d) {
  std::vector<double> out;
  for (const auto& e : d.edges()) out.push_back(e.conductance);
  return out;
}

void check_derived(const Json& j, const char* key, const std::vector<double>& expected) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (numbers(*it, key) != expected) {
    throw Error(ErrorCode::InvalidDomain, std::string("\"") + key + "\" disagrees with the grid parameters");
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

Json to_json(const Domain& d) {
  Json j;
  j["kind"] = kind_name(d.kind());
  switch (d.kind()) {
    case DomainKind::Interval:
      j["n"] = d.size();
      j["length"] = d.grid().lx;
      break;
    case DomainKind::Rectangle:
      j["nx"] = d.grid().nx;
      j["ny"] = d.grid().ny;
      j["lx"] = d.grid().lx;
      j["ly"] = d.grid().ly;
      break;
    case DomainKind::Graph: {
      j["n"] = d.size();
      Json edges = Json::array();
      for (const auto& e : d.edges()) edges.push_back({e.i, e.j});
      j["edges"] = std::move(edges);
      break;
    }
  }
  j["boundary"] = d.boundary();
  j["mass"] = d.mass();
  j["sigma"] = d.sigma();
  j["conductance"] = conductances(d);
  return j;
}

Domain domain_from_json(const Json& j) {
  if (!j.is_object()) parse_error("domain must be a JSON object");
  const auto kind = get<std::string>(require(j, "kind", "domain"), "domain.kind");
  if (kind == "interval") {
    allow_only(j, {"kind", "n", "length", "boundary", "mass", "sigma", "conductance"}, "interval domain");
    Domain d = Domain::interval(get<std::size_t>(require(j, "n", "interval domain"), "n"),
                                number(require(j, "length", "interval domain"), "length"));
    if (j.contains("boundary") && get<std::vector<NodeIndex>>(j["boundary"], "boundary") != d.boundary()) {
      throw Error(ErrorCode::InvalidDomain, "\"boundary\" disagrees with the grid parameters");
    }
    check_derived(j, "mass", d.mass());
    check_derived(j, "sigma", d.sigma());
    check_derived(j, "conductance", conductances(d));
    return d;
  }
  if (kind == "rectangle") {
    allow_only(j, {"kind", "nx", "ny", "lx", "ly", "boundary", "mass", "sigma", "conductance"}, "rectangle domain");
    Domain d = Domain::rectangle(get<std::size_t>(require(j, "nx", "rectangle domain"), "nx"),
                                 get<std::size_t>(require(j, "ny", "rectangle domain"), "ny"),
                                 number(require(j, "lx", "rectangle domain"), "lx"),
                                 number(require(j, "ly", "rectangle domain"), "ly"));
    if (j.contains("boundary") && get<std::vector<NodeIndex>>(j["boundary"], "boundary") != d.boundary()) {
      throw Error(ErrorCode::InvalidDomain, "\"boundary\" disagrees with the grid parameters");
    }
    check_derived(j, "mass", d.mass());
    check_derived(j, "sigma", d.sigma());
    check_derived(j, "conductance", conductances(d));
    return d;
  }
  if (kind == "graph") {
    allow_only(j, {"kind", "n", "edges", "boundary", "mass", "sigma", "conductance"}, "graph domain");
    GraphSpec spec;
    if (j.contains("n")) spec.nodes = get<std::size_t>(j["n"], "n");
    const auto pairs = get<std::vector<std::array<std::size_t, 2>>>(require(j, "edges", "graph domain"), "edges");
    std::vector<double> w(pairs.size(), 1.0);
    if (j.contains("conductance")) w = numbers(j["conductance"], "conductance");
    if (w.size() != pairs.size()) throw Error(ErrorCode::InvalidDomain, "conductance and edges differ in length");
    for (std::size_t e = 0; e < pairs.size(); ++e) spec.edges.push_back({pairs[e][0], pairs[e][1], w[e]});
    spec.boundary = get<std::vector<NodeIndex>>(require(j, "boundary", "graph domain"), "boundary");
    if (j.contains("mass")) spec.mass = numbers(j["mass"], "mass");
    if (j.contains("sigma")) spec.sigma = numbers(j["sigma"], "sigma");
    return Domain::graph(spec);
  }
  parse_error("unknown domain kind \"" + kind + "\"");
}

Json to_json(const FormMatrix& f) {
  return {{"domain", to_json(f.domain())}, {"matrix", matrix_json(f.matrix())}, {"pinned", f.pinned()}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array()) parse_error("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = numbers(j[static_cast<std::size_t>(i)], "matrix row");
    if (static_cast<Eigen::Index>(row.size()) != rows) parse_error("matrix must be square");
    for (Eigen::Index k = 0; k < rows; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

FormMatrix form_from_json(const Json& j) {
  allow_only(j, {"domain", "matrix", "pinned"}, "form");
  auto domain = share(domain_from_json(require(j, "domain", "form")));
  auto m = matrix_from_json(require(j, "matrix", "form"));
  std::vector<NodeIndex> pinned;
  if (j.contains("pinned")) pinned = get<std::vector<NodeIndex>>(j["pinned"], "pinned");
  return FormMatrix(std::move(domain), std::move(m), std::move(pinned));
}

Json to_json(const BoundaryMeasure& mu) {
  Json j = Json::array();
  for (double v : mu.values()) j.push_back(num(v));
  return j;
}

BoundaryMeasure measure_from_json(const Json& j) {
  const auto values = numbers(j, "boundary measure");
  return BoundaryMeasure(values);
}

Json to_json(const BdlParts& parts, const Domain& domain) {
  Json stencil = Json::array();
  for (std::size_t e = 0; e < parts.stencil.size() && e < domain.edges().size(); ++e) {
    stencil.push_back({{"i", domain.edges()[e].i}, {"j", domain.edges()[e].j}, {"J", num(parts.stencil[e])}});
  }
  Json nonlocal = Json::array();
  for (const auto& e : parts.nonlocal) nonlocal.push_back({{"i", e.i}, {"j", e.j}, {"J", num(e.weight)}});
  Json killing = Json::array();
  for (double k : parts.killing) killing.push_back(num(k));
  return {{"stencil", std::move(stencil)},
          {"nonlocal", std::move(nonlocal)},
          {"killing", std::move(killing)},
          {"markovian", parts.markovian},
          {"pinned", parts.pinned}};
}

Json to_json(const LocalityClass& loc) {
  Json j{{"class", loc.stencil_local ? "StencilLocal" : "Nonlocal"}};
  if (loc.witness) j["witness"] = {{"i", loc.witness->i}, {"j", loc.witness->j}, {"J", num(loc.witness->weight)}};
  return j;
}

Json to_json(const PositivityReport& r) {
  Json j{{"verdict", r.algebraic && r.numerical},
         {"algebraic", r.algebraic},
         {"numerical", r.numerical},
         {"agree", r.agree},
         {"times", r.times},
         {"probe_times", r.probe_times},
         {"min_entry", timed_json(r.min_entry)}};
  if (r.algebraic_witness) j["witness"] = pair_json(*r.algebraic_witness);
  return j;
}

Json to_json(const DominationReport& r) {
  return {{"verdict", r.verdict},         {"times", r.times}, {"probe_times", r.probe_times},
          {"worst", timed_json(r.worst)}, {"form_level", r.form_level},
          {"positivity", r.positivity},   {"tolerance", num(r.tolerance)}};
}

Json to_json(const SandwichReport& r) {
  return {{"verdict", r.verdict}, {"lower", to_json(r.lower)}, {"upper", to_json(r.upper)}};
}

Json to_json(const MeasureExtraction& r) {
  Json j{{"verdict", to_string(r.verdict)}};
  if (r.pair) j["witness"] = pair_json(*r.pair);
  if (r.node) j["witness"] = {{"node", *r.node}, {"value", num(r.value)}};
  if (r.verdict == ExtractionVerdict::Success) {
    j["mu"] = to_json(r.mu);
    j["beta"] = Json::array();
    for (double b : r.beta) j["beta"].push_back(num(b));
  }
  return j;
}

Json to_json(const CharacterizationReport& r) {
  return {{"verdict", r.passed()},
          {"forward", r.forward},
          {"reverse", r.reverse},
          {"pinned_match", r.pinned_match},
          {"max_measure_error", num(r.max_measure_error)},
          {"sandwich", to_json(r.sandwich)},
          {"extraction", to_json(r.extraction)}};
}

Json to_json(const LocalityReport& r) {
  Json j{{"verdict", to_string(r.outcome)}, {"markovian", r.markovian}};
  if (r.outcome == LocalityOutcome::NotApplicable) j["failed_premise"] = r.failed_premise;
  if (r.markovian_witness) j["witness"] = pair_json(*r.markovian_witness);
  if (r.markovian) j["domination"] = to_json(r.domination);
  if (r.outcome != LocalityOutcome::NotApplicable) {
    j["certificate"] = {{"pairs_checked", r.pairs_checked},
                        {"max_offstencil", num(r.max_offstencil)},
                        {"tolerance", num(r.tolerance)}};
  }
  if (r.witness) j["witness"] = {{"i", r.witness->i}, {"j", r.witness->j}, {"J", num(r.witness->weight)}};
  return j;
}

Json to_json(const EventualPositivity& r) {
  Json j{{"verdict", r.verdict},
         {"perron_certificate", r.perron_certificate},
         {"ground_eigenvalue", num(r.ground_eigenvalue)},
         {"reason", r.reason}};
  j["t_star"] = r.t_star ? Json(num(*r.t_star)) : Json(nullptr);
  return j;
}

Json to_json(const Aw45Report& r) {
  Json profile = Json::array();
  for (const auto& [t, m] : r.profile) profile.push_back({{"t", num(t)}, {"min_entry", num(m)}});
  return {{"n", r.n},
          {"h", num(r.h)},
          {"B", matrix_json(r.b)},
          {"endpoint_entry", {{"t", num(r.probe_time)}, {"value", num(r.endpoint_entry)}, {"first_order", num(r.first_order)}}},
          {"positivity", to_json(r.positivity)},
          {"profile", std::move(profile)},
          {"eventual_positivity", to_json(r.eventual)},
          {"sandwich", to_json(r.sandwich)},
          {"locality", to_json(r.locality)},
          {"extraction", to_json(r.extraction)},
          {"matches_expected", r.matches_expected()}};
}

Json to_json(const SweepReport& r) {
  Json failures = Json::array();
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) {
    Json entry{{"trial", o.trial}, {"domain", o.domain}, {"status", o.status}, {"stage", o.stage}, {"witness", o.witness}};
    if (r.generator == SweepGenerator::MarkovianRandom) entry["premises_held"] = o.premises_held;
    if (o.status == "fail") failures.push_back({{"trial", o.trial}, {"stage", o.stage}, {"witness", o.witness}});
    outcomes.push_back(std::move(entry));
  }
  Json j{{"seed", r.seed},
         {"trials", r.trials},
         {"generator", to_string(r.generator)},
         {"passes", r.passes},
         {"failures", std::move(failures)},
         {"expected_falsified", r.expected_falsified},
         {"outcomes", std::move(outcomes)}};
  if (r.generator == SweepGenerator::MarkovianRandom) {
    j["premises_held"] = r.premises_held;
    j["theorem_violations"] = r.theorem_violations;
  }
  return j;
}

std::string profile_csv(const std::vector<std::pair<double, double>>& profile) {
  std::string out = "t,min_entry\n";
  for (const auto& [t, m] : profile) out += format_double(t) + "," + format_double(m) + "\n";
  return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "n,h,lambda_k,reference,abs_error,observed_order\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + format_double(r.h) + "," + format_double(r.lambda) + "," +
           format_double(r.reference) + "," + format_double(r.abs_error) + "," +
           (r.observed_order ? format_double(*r.observed_order) : std::string()) + "\n";
  }
  return out;
}

RunConfig config_from_json(const Json& j) {
  allow_only(j, {"domain", "form", "times", "tol", "seed", "out"}, "config");
  RunConfig c;
  c.domain = require(j, "domain", "config");
  const Json& form = require(j, "form", "config");
  allow_only(form, {"kind", "mu", "B"}, "form spec");
  c.form.kind = get<std::string>(require(form, "kind", "form spec"), "form.kind");
  if (form.contains("mu")) c.form.mu = measure_from_json(form["mu"]);
  if (form.contains("B")) c.form.b = matrix_from_json(form["B"]);
  if (j.contains("times")) c.times = numbers(j["times"], "times");
  if (j.contains("tol")) c.tol = number(j["tol"], "tol");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j["seed"], "seed");
  if (j.contains("out")) c.out = get<std::string>(j["out"], "out");
  return c;
}

Json to_json(const RunConfig& c) {
  Json form{{"kind", c.form.kind}};
  if (c.form.mu) form["mu"] = to_json(*c.form.mu);
  if (c.form.b) form["B"] = matrix_json(*c.form.b);
  Json j{{"domain", c.domain}, {"form", std::move(form)}};
  if (c.times) j["times"] = *c.times;
  if (c.tol) j["tol"] = *c.tol;
  if (c.seed) j["seed"] = *c.seed;
  if (c.out) j["out"] = *c.out;
  return j;
}

FormMatrix build_form(const DomainPtr& domain, const FormSpec& spec) {
  if (spec.kind == "neumann") return neumann_form(domain);
  if (spec.kind == "dirichlet") return dirichlet_form(domain);
  if (spec.kind == "robin") {
    if (!spec.mu) parse_error("robin form needs \"mu\"");
    return robin_form(domain, *spec.mu);
  }
  if (spec.kind == "nonlocal-robin") {
    if (!spec.b) parse_error("nonlocal-robin form needs \"B\"");
    return nonlocal_robin_form(domain, BoundaryOperator(*spec.b));
  }
  parse_error("unknown form kind \"" + spec.kind + "\"");
}

FormMatrix build_form(const RunConfig& c) { return build_form(share(domain_from_json(c.domain)), c.form); }

}  // namespace dflab::io
