#include <cstdlib>
#include <cstring>
#include <span>
#include <string>

#include "dflab/dflab.h"
#include "dflab/error.hpp"
#include "dflab/io.hpp"

struct dflab_domain {
  dflab::DomainPtr ptr;
};

struct dflab_form {
  dflab::FormMatrix form;
};

namespace {

thread_local std::string g_last_error;

dflab_status to_status(dflab::ErrorCode code) {
  switch (code) {
    case dflab::ErrorCode::InvalidDomain: return DFLAB_ERR_INVALID_DOMAIN;
    case dflab::ErrorCode::EmptyInterior: return DFLAB_ERR_EMPTY_INTERIOR;
    case dflab::ErrorCode::InvalidMeasure: return DFLAB_ERR_INVALID_MEASURE;
    case dflab::ErrorCode::AsymmetricForm: return DFLAB_ERR_ASYMMETRIC_FORM;
    case dflab::ErrorCode::DomainMismatch: return DFLAB_ERR_DOMAIN_MISMATCH;
    case dflab::ErrorCode::InvalidTime: return DFLAB_ERR_INVALID_TIME;
    case dflab::ErrorCode::InvalidArgument: return DFLAB_ERR_INVALID_ARGUMENT;
    case dflab::ErrorCode::Parse: return DFLAB_ERR_PARSE;
    case dflab::ErrorCode::Internal: return DFLAB_ERR_INTERNAL;
  }
  return DFLAB_ERR_INTERNAL;
}

template <typename F>
dflab_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return DFLAB_OK;
  } catch (const dflab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DFLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DFLAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DFLAB_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw dflab::Error(dflab::ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const dflab::io::Json& j) {
  if (out) *out = dup(j.dump(2) + "\n");
}

std::span<const double> span_of(const double* p, std::size_t n) {
  require(p != nullptr || n == 0, "null array");
  return {p, n};
}

std::vector<double> times_or_default(const double* times, std::size_t n) {
  if (times == nullptr || n == 0) return dflab::default_time_grid();
  return {times, times + n};
}

double tol_or_default(double rel_tol) { return rel_tol > 0.0 ? rel_tol : dflab::kDominationTolerance; }

void copy_matrix(const Eigen::MatrixXd& m, double* out, std::size_t capacity) {
  require(out != nullptr, "null output buffer");
  require(capacity >= static_cast<std::size_t>(m.size()), "output buffer too small");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  }
}

dflab_form* wrap(dflab::FormMatrix f) { return new dflab_form{std::move(f)}; }

}  // namespace

extern "C" {

const char* dflab_version(void) { return "1.0.0"; }

const char* dflab_status_name(dflab_status status) {
  switch (status) {
    case DFLAB_OK: return "OK";
    case DFLAB_ERR_INVALID_DOMAIN: return "InvalidDomain";
    case DFLAB_ERR_EMPTY_INTERIOR: return "EmptyInterior";
    case DFLAB_ERR_INVALID_MEASURE: return "InvalidMeasure";
    case DFLAB_ERR_ASYMMETRIC_FORM: return "AsymmetricForm";
    case DFLAB_ERR_DOMAIN_MISMATCH: return "DomainMismatch";
    case DFLAB_ERR_INVALID_TIME: return "InvalidTime";
    case DFLAB_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case DFLAB_ERR_PARSE: return "Parse";
    case DFLAB_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* dflab_last_error(void) { return g_last_error.c_str(); }

void dflab_string_free(char* s) { std::free(s); }

dflab_status dflab_domain_interval(size_t n, double length, dflab_domain** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new dflab_domain{dflab::share(dflab::Domain::interval(n, length))};
  });
}

dflab_status dflab_domain_rectangle(size_t nx, size_t ny, double lx, double ly, dflab_domain** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new dflab_domain{dflab::share(dflab::Domain::rectangle(nx, ny, lx, ly))};
  });
}

dflab_status dflab_domain_graph(size_t num_nodes, const size_t* edges, const double* conductance, size_t num_edges,
                                const size_t* boundary, size_t num_boundary, const double* mass, const double* sigma,
                                dflab_domain** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(edges != nullptr || num_edges == 0, "null edge array");
    require(boundary != nullptr || num_boundary == 0, "null boundary array");
    dflab::GraphSpec spec;
    spec.nodes = num_nodes;
    for (size_t e = 0; e < num_edges; ++e) {
      spec.edges.push_back({edges[2 * e], edges[2 * e + 1], conductance ? conductance[e] : 1.0});
    }
    spec.boundary.assign(boundary, boundary + num_boundary);
    if (mass) spec.mass.assign(mass, mass + num_nodes);
    if (sigma) spec.sigma.assign(sigma, sigma + num_boundary);
    *out = new dflab_domain{dflab::share(dflab::Domain::graph(spec))};
  });
}

dflab_status dflab_domain_from_json(const char* json, dflab_domain** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new dflab_domain{dflab::share(dflab::io::domain_from_json(dflab::io::parse(json)))};
  });
}

dflab_status dflab_domain_to_json(const dflab_domain* domain, char** out) {
  return guarded([&] {
    require(domain != nullptr && out != nullptr, "null argument");
    emit(out, dflab::io::to_json(*domain->ptr));
  });
}

size_t dflab_domain_node_count(const dflab_domain* domain) { return domain ? domain->ptr->size() : 0; }

size_t dflab_domain_boundary_count(const dflab_domain* domain) {
  return domain ? domain->ptr->boundary().size() : 0;
}

void dflab_domain_free(dflab_domain* domain) { delete domain; }

dflab_status dflab_form_neumann(const dflab_domain* domain, dflab_form** out) {
  return guarded([&] {
    require(domain != nullptr && out != nullptr, "null argument");
    *out = wrap(dflab::neumann_form(domain->ptr));
  });
}

dflab_status dflab_form_dirichlet(const dflab_domain* domain, dflab_form** out) {
  return guarded([&] {
    require(domain != nullptr && out != nullptr, "null argument");
    *out = wrap(dflab::dirichlet_form(domain->ptr));
  });
}

dflab_status dflab_form_robin(const dflab_domain* domain, const double* mu, size_t len, dflab_form** out) {
  return guarded([&] {
    require(domain != nullptr && out != nullptr, "null argument");
    const auto values = span_of(mu, len);
    *out = wrap(dflab::robin_form(domain->ptr, dflab::BoundaryMeasure({values.begin(), values.end()})));
  });
}

dflab_status dflab_form_nonlocal_robin(const dflab_domain* domain, const double* b, size_t dim, dflab_form** out) {
  return guarded([&] {
    require(domain != nullptr && out != nullptr, "null argument");
    require(b != nullptr || dim == 0, "null matrix");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (size_t i = 0; i < dim; ++i) {
      for (size_t j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b[i * dim + j];
    }
    *out = wrap(dflab::nonlocal_robin_form(domain->ptr, dflab::BoundaryOperator(std::move(m))));
  });
}

dflab_status dflab_form_from_config(const char* config_json, dflab_form** out) {
  return guarded([&] {
    require(config_json != nullptr && out != nullptr, "null argument");
    *out = wrap(dflab::io::build_form(dflab::io::config_from_json(dflab::io::parse(config_json))));
  });
}

dflab_status dflab_form_from_json(const char* json, dflab_form** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = wrap(dflab::io::form_from_json(dflab::io::parse(json)));
  });
}

dflab_status dflab_form_to_json(const dflab_form* form, char** out) {
  return guarded([&] {
    require(form != nullptr && out != nullptr, "null argument");
    emit(out, dflab::io::to_json(form->form));
  });
}

size_t dflab_form_size(const dflab_form* form) { return form ? form->form.size() : 0; }

dflab_status dflab_form_matrix(const dflab_form* form, double* out, size_t capacity) {
  return guarded([&] {
    require(form != nullptr, "null form");
    copy_matrix(form->form.matrix(), out, capacity);
  });
}

int dflab_form_same_domain(const dflab_form* a, const dflab_form* b) {
  return a && b && a->form.domain() == b->form.domain() ? 1 : 0;
}

void dflab_form_free(dflab_form* form) { delete form; }

dflab_status dflab_form_is_markovian(const dflab_form* form, int* verdict, size_t* wi, size_t* wj, double* value) {
  return guarded([&] {
    require(form != nullptr && verdict != nullptr, "null argument");
    const auto v = dflab::is_markovian(form->form);
    *verdict = v.holds ? 1 : 0;
    if (v.witness) {
      if (wi) *wi = v.witness->i;
      if (wj) *wj = v.witness->j;
      if (value) *value = v.witness->value;
    }
  });
}

dflab_status dflab_form_cross_energy(const dflab_form* form, const double* u, size_t len, double* out) {
  return guarded([&] {
    require(form != nullptr && out != nullptr, "null argument");
    *out = dflab::cross_form_energy(form->form, span_of(u, len));
  });
}

dflab_status dflab_form_decompose(const dflab_form* form, char** report_json) {
  return guarded([&] {
    require(form != nullptr, "null form");
    emit(report_json, dflab::io::to_json(dflab::bdl_decompose(form->form), form->form.domain()));
  });
}

dflab_status dflab_form_classify_locality(const dflab_form* form, int* stencil_local, char** report_json) {
  return guarded([&] {
    require(form != nullptr, "null form");
    const auto loc = dflab::classify_locality(form->form);
    if (stencil_local) *stencil_local = loc.stencil_local ? 1 : 0;
    emit(report_json, dflab::io::to_json(loc));
  });
}

dflab_status dflab_expm(const dflab_form* form, double t, double* out, size_t capacity) {
  return guarded([&] {
    require(form != nullptr, "null form");
    copy_matrix(dflab::expm(form->form, t).s, out, capacity);
  });
}

dflab_status dflab_check_positivity(const dflab_form* form, const double* times, size_t num_times, int* verdict,
                                    char** report_json) {
  return guarded([&] {
    require(form != nullptr && verdict != nullptr, "null argument");
    const auto grid = times_or_default(times, num_times);
    const auto r = dflab::is_positivity_preserving(form->form, grid);
    if (!r.agree) {
      throw dflab::Error(dflab::ErrorCode::Internal, "algebraic and numerical positivity verdicts disagree");
    }
    *verdict = r.algebraic ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_check_domination(const dflab_form* lower, const dflab_form* upper, const double* times,
                                    size_t num_times, double rel_tol, int* verdict, char** report_json) {
  return guarded([&] {
    require(lower != nullptr && upper != nullptr && verdict != nullptr, "null argument");
    const auto grid = times_or_default(times, num_times);
    const auto r = dflab::dominates(lower->form, upper->form, grid, tol_or_default(rel_tol));
    *verdict = r.verdict ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_eventually_positive(const dflab_form* form, double t_max, double bisection_tol, int* verdict,
                                       char** report_json) {
  return guarded([&] {
    require(form != nullptr && verdict != nullptr, "null argument");
    const auto r = dflab::eventually_positive(form->form, t_max, bisection_tol > 0.0 ? bisection_tol : 1e-6);
    *verdict = r.verdict ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_min_entry_profile(const dflab_form* form, const double* times, size_t num_times, char** csv) {
  return guarded([&] {
    require(form != nullptr && csv != nullptr, "null argument");
    const auto grid = times_or_default(times, num_times);
    *csv = dup(dflab::io::profile_csv(dflab::min_entry_profile(form->form, grid)));
  });
}

dflab_status dflab_check_sandwich(const dflab_form* form, const double* times, size_t num_times, double rel_tol,
                                  int* verdict, char** report_json) {
  return guarded([&] {
    require(form != nullptr && verdict != nullptr, "null argument");
    const auto grid = times_or_default(times, num_times);
    const auto r = dflab::check_sandwich(form->form, grid, tol_or_default(rel_tol));
    *verdict = r.verdict ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_check_locality(const dflab_form* form, const double* times, size_t num_times, double rel_tol,
                                  int* verdict, char** report_json) {
  return guarded([&] {
    require(form != nullptr && verdict != nullptr, "null argument");
    const auto grid = times_or_default(times, num_times);
    const auto r = dflab::locality_from_domination(form->form, grid, tol_or_default(rel_tol));
    *verdict = r.outcome == dflab::LocalityOutcome::Local ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_extract_measure(const dflab_form* form, int* verdict, char** report_json) {
  return guarded([&] {
    require(form != nullptr && verdict != nullptr, "null argument");
    const auto r = dflab::extract_boundary_measure(form->form);
    *verdict = r.verdict == dflab::ExtractionVerdict::Success ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_example_aw45(size_t n, const double* times, size_t num_times, int* verdict, char** report_json,
                                char** profile_csv) {
  return guarded([&] {
    require(verdict != nullptr, "null argument");
    const auto grid = times_or_default(times, num_times);
    const auto r = dflab::example_aw45(n, grid);
    *verdict = r.matches_expected() ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
    if (profile_csv) *profile_csv = dup(dflab::io::profile_csv(r.profile));
  });
}

dflab_status dflab_sweep(size_t trials, uint64_t seed, const char* generator, const char* domain_json,
                         const double* times, size_t num_times, double rel_tol, size_t threads, int* verdict,
                         char** report_json) {
  return guarded([&] {
    require(generator != nullptr && verdict != nullptr, "null argument");
    dflab::SweepOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    const auto g = dflab::parse_generator(generator);
    require(g.has_value(), "unknown sweep generator");
    opt.generator = *g;
    if (domain_json) opt.domain = dflab::share(dflab::io::domain_from_json(dflab::io::parse(domain_json)));
    if (times && num_times > 0) opt.times.assign(times, times + num_times);
    opt.rel_tol = tol_or_default(rel_tol);
    opt.threads = threads;
    const auto r = dflab::sweep_random(opt);
    *verdict = r.failures().empty() ? 1 : 0;
    emit(report_json, dflab::io::to_json(r));
  });
}

dflab_status dflab_eigen_convergence(const char* kind, double beta, const size_t* sizes, size_t num_sizes, size_t k,
                                     char** csv) {
  return guarded([&] {
    require(kind != nullptr && csv != nullptr && (sizes != nullptr || num_sizes == 0), "null argument");
    const std::string name(kind);
    dflab::BoundaryKind bk;
    if (name == "neumann") {
      bk = dflab::BoundaryKind::Neumann;
    } else if (name == "dirichlet") {
      bk = dflab::BoundaryKind::Dirichlet;
    } else if (name == "robin") {
      bk = dflab::BoundaryKind::Robin;
    } else {
      throw dflab::Error(dflab::ErrorCode::InvalidArgument, "unknown boundary kind \"" + name + "\"");
    }
    const std::vector<std::size_t> grid(sizes, sizes + num_sizes);
    *csv = dup(dflab::io::convergence_csv(dflab::eigen_convergence(bk, grid, k, beta)));
  });
}

dflab_status dflab_robin_root(double beta, size_t k, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = dflab::robin_root(beta, k);
  });
}

}  // extern "C"
