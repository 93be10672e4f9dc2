// Command-line front end for the dflab C library.
//
// Exit codes: 0 = property verified, 1 = property falsified (the report
// carries a witness), 2 = usage or input error (diagnostic on stderr).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dflab/dflab.h"

namespace {

constexpr int kVerified = 0;
constexpr int kFalsified = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(dflab_status status) {
  if (status != DFLAB_OK) {
    throw InputError(std::string(dflab_status_name(status)) + ": " + dflab_last_error());
  }
}

struct StringDeleter {
  void operator()(char* s) const { dflab_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct FormDeleter {
  void operator()(dflab_form* f) const { dflab_form_free(f); }
};
using OwnedForm = std::unique_ptr<dflab_form, FormDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path || *path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw InputError("cannot write \"" + *path + "\"");
  out << text;
}

nlohmann::json parse_json(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("Parse: " + source + ": " + e.what());
  }
}

// Shared flags. Values given on the command line win over the config file.
struct Globals {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::vector<double> times;
  std::optional<double> tol;

  std::optional<nlohmann::json> config_json;

  void load() {
    if (config) config_json = parse_json(read_file(*config), *config);
  }
  const nlohmann::json* config_field(const char* key) const {
    if (!config_json || !config_json->is_object() || !config_json->contains(key)) return nullptr;
    return &(*config_json)[key];
  }
  std::vector<double> time_grid() const {
    if (!times.empty()) return times;
    if (const auto* t = config_field("times")) {
      try {
        return t->get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("Parse: times: ") + e.what());
      }
    }
    return {};
  }
  double tolerance() const {
    if (tol) return *tol;
    if (const auto* t = config_field("tol"); t && t->is_number()) return t->get<double>();
    return 0.0;
  }
  std::optional<std::string> output() const {
    if (out) return out;
    if (const auto* o = config_field("out"); o && o->is_string()) return o->get<std::string>();
    return std::nullopt;
  }
};

// An input is either a form file ({domain, matrix, pinned}) or a run config.
OwnedForm load_form(const std::string& path) {
  const std::string text = read_file(path);
  const auto j = parse_json(text, path);
  dflab_form* form = nullptr;
  if (j.is_object() && j.contains("matrix")) {
    check(dflab_form_from_json(text.c_str(), &form));
  } else {
    check(dflab_form_from_config(text.c_str(), &form));
  }
  return OwnedForm(form);
}

std::vector<std::string> resolve_inputs(const Globals& g, const std::vector<std::string>& positional,
                                        std::size_t count) {
  std::vector<std::string> inputs;
  if (g.config) inputs.push_back(*g.config);
  inputs.insert(inputs.end(), positional.begin(), positional.end());
  if (inputs.size() != count) {
    throw InputError("expected " + std::to_string(count) + " input file(s), got " + std::to_string(inputs.size()));
  }
  return inputs;
}

int verdict_exit(int verdict) { return verdict ? kVerified : kFalsified; }

int emit_report(const Globals& g, char* raw, int verdict) {
  OwnedString report(raw);
  write_output(g.output(), report.get());
  return verdict_exit(verdict);
}

std::string replace_extension(const std::string& path, const char* ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dflab: finite-dimensional Dirichlet-form laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration or form JSON file");
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--times", g.times, "Comma-separated time grid")->delimiter(',');
  app.add_option("--tol", g.tol, "Relative domination tolerance");

  auto* build = app.add_subcommand("build", "Build a form from a run configuration");

  std::vector<std::string> decompose_inputs;
  auto* decompose = app.add_subcommand("decompose", "Jump/killing decomposition of a form");
  decompose->add_option("input", decompose_inputs, "Form or config file");

  auto* check_cmd = app.add_subcommand("check", "Run a property check");
  check_cmd->require_subcommand(1);
  std::vector<std::string> pos_inputs, dom_inputs, sand_inputs, loc_inputs;
  auto* positivity = check_cmd->add_subcommand("positivity", "Positivity preservation (algebraic and sampled)");
  positivity->add_option("input", pos_inputs, "Form or config file");
  auto* domination = check_cmd->add_subcommand("domination", "Entrywise domination of LOWER by UPPER");
  domination->add_option("inputs", dom_inputs, "LOWER UPPER form or config files");
  auto* sandwich = check_cmd->add_subcommand("sandwich", "Dirichlet <= T(t) <= Neumann");
  sandwich->add_option("input", sand_inputs, "Form or config file");
  auto* locality = check_cmd->add_subcommand("locality", "Locality from Markovianity and Neumann domination");
  locality->add_option("input", loc_inputs, "Form or config file");

  std::vector<std::string> extract_inputs;
  auto* extract = app.add_subcommand("extract-measure", "Recover a boundary measure from a form");
  extract->add_option("input", extract_inputs, "Form or config file");

  std::size_t aw_n = 33;
  std::optional<std::string> aw_csv;
  auto* aw45 = app.add_subcommand("example-aw45", "Two-point nonlocal Robin example with B = [[1,1],[1,1]]");
  aw45->add_option("--n", aw_n, "Interval nodes")->capture_default_str();
  aw45->add_option("--csv", aw_csv, "Min-entry profile CSV (default: report path with .csv)");

  std::size_t trials = 100;
  std::string generator = "planted-measure";
  std::size_t threads = 1;
  std::optional<std::string> sweep_domain;
  auto* sweep = app.add_subcommand("sweep", "Randomized theorem sweep");
  sweep->add_option("--trials", trials)->capture_default_str();
  sweep->add_option("--generator", generator)
      ->check(CLI::IsMember({"planted-measure", "markovian-random", "off-stencil-perturbed"}))
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("--domain", sweep_domain, "Fixed domain JSON (default: random grids)");

  std::string eig_kind = "neumann";
  std::vector<std::size_t> eig_sizes{17, 33, 65, 129};
  std::size_t eig_k = 1;
  double eig_beta = 1.0;
  auto* eig = app.add_subcommand("eig", "Eigenvalue convergence against continuum references");
  eig->add_option("--kind", eig_kind)->check(CLI::IsMember({"neumann", "dirichlet", "robin"}))->capture_default_str();
  eig->add_option("--sizes", eig_sizes)->delimiter(',');
  eig->add_option("--k", eig_k, "Mode index (Neumann counts from 0)")->capture_default_str();
  eig->add_option("--beta", eig_beta, "Robin coefficient")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    g.load();
    const auto grid = g.time_grid();
    const double* tp = grid.empty() ? nullptr : grid.data();
    const double tol = g.tolerance();
    char* report = nullptr;
    int verdict = 0;

    if (*build) {
      if (!g.config) throw InputError("build needs --config");
      const auto form = load_form(*g.config);
      check(dflab_form_to_json(form.get(), &report));
      return emit_report(g, report, 1);
    }
    if (*decompose) {
      const auto form = load_form(resolve_inputs(g, decompose_inputs, 1)[0]);
      check(dflab_form_decompose(form.get(), &report));
      return emit_report(g, report, 1);
    }
    if (*positivity) {
      const auto form = load_form(resolve_inputs(g, pos_inputs, 1)[0]);
      check(dflab_check_positivity(form.get(), tp, grid.size(), &verdict, &report));
      return emit_report(g, report, verdict);
    }
    if (*domination) {
      const auto files = resolve_inputs(g, dom_inputs, 2);
      const auto lower = load_form(files[0]);
      const auto upper = load_form(files[1]);
      check(dflab_check_domination(lower.get(), upper.get(), tp, grid.size(), tol, &verdict, &report));
      return emit_report(g, report, verdict);
    }
    if (*sandwich) {
      const auto form = load_form(resolve_inputs(g, sand_inputs, 1)[0]);
      check(dflab_check_sandwich(form.get(), tp, grid.size(), tol, &verdict, &report));
      return emit_report(g, report, verdict);
    }
    if (*locality) {
      const auto form = load_form(resolve_inputs(g, loc_inputs, 1)[0]);
      check(dflab_check_locality(form.get(), tp, grid.size(), tol, &verdict, &report));
      return emit_report(g, report, verdict);
    }
    if (*extract) {
      const auto form = load_form(resolve_inputs(g, extract_inputs, 1)[0]);
      check(dflab_extract_measure(form.get(), &verdict, &report));
      return emit_report(g, report, verdict);
    }
    if (*aw45) {
      char* csv = nullptr;
      check(dflab_example_aw45(aw_n, tp, grid.size(), &verdict, &report, &csv));
      OwnedString csv_text(csv);
      const auto out = g.output();
      std::optional<std::string> csv_path = aw_csv;
      if (!csv_path && out && *out != "-") csv_path = replace_extension(*out, ".csv");
      if (csv_path) write_output(csv_path, csv_text.get());
      return emit_report(g, report, verdict);
    }
    if (*sweep) {
      std::uint64_t seed = 42;
      if (g.seed) {
        seed = *g.seed;
      } else if (const auto* s = g.config_field("seed"); s && s->is_number_unsigned()) {
        seed = s->get<std::uint64_t>();
      }
      std::string domain_text;
      if (sweep_domain) domain_text = read_file(*sweep_domain);
      check(dflab_sweep(trials, seed, generator.c_str(), sweep_domain ? domain_text.c_str() : nullptr, tp,
                        grid.size(), tol, threads, &verdict, &report));
      return emit_report(g, report, verdict);
    }
    if (*eig) {
      check(dflab_eigen_convergence(eig_kind.c_str(), eig_beta, eig_sizes.data(), eig_sizes.size(), eig_k, &report));
      return emit_report(g, report, 1);
    }
  } catch (const InputError& e) {
    std::cerr << "dflab: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "dflab: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
