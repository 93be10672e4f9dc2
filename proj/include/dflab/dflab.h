/*
 * dflab: finite-dimensional Dirichlet-form laboratory, C interface.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a dflab_status; on
 * failure dflab_last_error() holds a message for the calling thread.
 * Structured results (reports, forms, domains) travel as JSON text in
 * strings allocated by the library and released with dflab_string_free.
 *
 * Boolean outputs use int: 1 = property verified, 0 = falsified.
 */
#ifndef DFLAB_DFLAB_H
#define DFLAB_DFLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DFLAB_BUILD)
#    define DFLAB_API __declspec(dllexport)
#  else
#    define DFLAB_API __declspec(dllimport)
#  endif
#else
#  define DFLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dflab_status {
  DFLAB_OK = 0,
  DFLAB_ERR_INVALID_DOMAIN = 1,
  DFLAB_ERR_EMPTY_INTERIOR = 2,
  DFLAB_ERR_INVALID_MEASURE = 3,
  DFLAB_ERR_ASYMMETRIC_FORM = 4,
  DFLAB_ERR_DOMAIN_MISMATCH = 5,
  DFLAB_ERR_INVALID_TIME = 6,
  DFLAB_ERR_INVALID_ARGUMENT = 7,
  DFLAB_ERR_PARSE = 8,
  DFLAB_ERR_INTERNAL = 9
} dflab_status;

typedef struct dflab_domain dflab_domain;
typedef struct dflab_form dflab_form;

DFLAB_API const char* dflab_version(void);
DFLAB_API const char* dflab_status_name(dflab_status status);
/* Message of the last failed call on this thread ("" if none). */
DFLAB_API const char* dflab_last_error(void);
DFLAB_API void dflab_string_free(char* s);

/* ---- domains ---------------------------------------------------------- */

DFLAB_API dflab_status dflab_domain_interval(size_t n, double length, dflab_domain** out);
DFLAB_API dflab_status dflab_domain_rectangle(size_t nx, size_t ny, double lx, double ly, dflab_domain** out);
/* edges: 2*num_edges node indices; conductance/mass/sigma may be NULL (all ones). */
DFLAB_API dflab_status dflab_domain_graph(size_t num_nodes, const size_t* edges, const double* conductance,
                                          size_t num_edges, const size_t* boundary, size_t num_boundary,
                                          const double* mass, const double* sigma, dflab_domain** out);
DFLAB_API dflab_status dflab_domain_from_json(const char* json, dflab_domain** out);
DFLAB_API dflab_status dflab_domain_to_json(const dflab_domain* domain, char** out);
DFLAB_API size_t dflab_domain_node_count(const dflab_domain* domain);
DFLAB_API size_t dflab_domain_boundary_count(const dflab_domain* domain);
DFLAB_API void dflab_domain_free(dflab_domain* domain);

/* ---- forms ------------------------------------------------------------ */

DFLAB_API dflab_status dflab_form_neumann(const dflab_domain* domain, dflab_form** out);
DFLAB_API dflab_status dflab_form_dirichlet(const dflab_domain* domain, dflab_form** out);
/* mu has one entry per boundary node (boundary order); INFINITY pins the node. */
DFLAB_API dflab_status dflab_form_robin(const dflab_domain* domain, const double* mu, size_t len, dflab_form** out);
/* b is a row-major dim x dim matrix indexed by boundary position. */
DFLAB_API dflab_status dflab_form_nonlocal_robin(const dflab_domain* domain, const double* b, size_t dim,
                                                 dflab_form** out);
/* Builds the form described by a run configuration ({domain, form, ...}). */
DFLAB_API dflab_status dflab_form_from_config(const char* config_json, dflab_form** out);
DFLAB_API dflab_status dflab_form_from_json(const char* json, dflab_form** out);
DFLAB_API dflab_status dflab_form_to_json(const dflab_form* form, char** out);
DFLAB_API size_t dflab_form_size(const dflab_form* form);
/* Copies A row-major into out (capacity >= size*size). */
DFLAB_API dflab_status dflab_form_matrix(const dflab_form* form, double* out, size_t capacity);
/* Nonzero if both forms live on identical domains. */
DFLAB_API int dflab_form_same_domain(const dflab_form* a, const dflab_form* b);
DFLAB_API void dflab_form_free(dflab_form* form);

/* ---- form-level checks ------------------------------------------------ */

DFLAB_API dflab_status dflab_form_is_markovian(const dflab_form* form, int* verdict, size_t* wi, size_t* wj,
                                               double* value);
DFLAB_API dflab_status dflab_form_cross_energy(const dflab_form* form, const double* u, size_t len, double* out);
DFLAB_API dflab_status dflab_form_decompose(const dflab_form* form, char** report_json);
DFLAB_API dflab_status dflab_form_classify_locality(const dflab_form* form, int* stencil_local, char** report_json);

/* ---- semigroup -------------------------------------------------------- */

/* Copies e^{-tL} row-major into out (capacity >= size*size). */
DFLAB_API dflab_status dflab_expm(const dflab_form* form, double t, double* out, size_t capacity);
DFLAB_API dflab_status dflab_check_positivity(const dflab_form* form, const double* times, size_t num_times,
                                              int* verdict, char** report_json);
/* rel_tol <= 0 selects the default 1e-10. */
DFLAB_API dflab_status dflab_check_domination(const dflab_form* lower, const dflab_form* upper, const double* times,
                                              size_t num_times, double rel_tol, int* verdict, char** report_json);
DFLAB_API dflab_status dflab_eventually_positive(const dflab_form* form, double t_max, double bisection_tol,
                                                 int* verdict, char** report_json);
DFLAB_API dflab_status dflab_min_entry_profile(const dflab_form* form, const double* times, size_t num_times,
                                               char** csv);

/* ---- theorem harnesses ------------------------------------------------ */

DFLAB_API dflab_status dflab_check_sandwich(const dflab_form* form, const double* times, size_t num_times,
                                            double rel_tol, int* verdict, char** report_json);
/* verdict = 1 iff the form is certified local; a theorem violation reports 0. */
DFLAB_API dflab_status dflab_check_locality(const dflab_form* form, const double* times, size_t num_times,
                                            double rel_tol, int* verdict, char** report_json);
/* verdict = 1 iff the extraction succeeded. */
DFLAB_API dflab_status dflab_extract_measure(const dflab_form* form, int* verdict, char** report_json);
/* verdict = 1 iff all verdicts match the expected ones for B = [[1,1],[1,1]]. */
DFLAB_API dflab_status dflab_example_aw45(size_t n, const double* times, size_t num_times, int* verdict,
                                          char** report_json, char** profile_csv);
/* generator: "planted-measure" | "markovian-random" | "off-stencil-perturbed".
   domain_json may be NULL for random 1D/2D grids; threads = 0 uses all cores.
   verdict = 1 iff no trial failed. */
DFLAB_API dflab_status dflab_sweep(size_t trials, uint64_t seed, const char* generator, const char* domain_json,
                                   const double* times, size_t num_times, double rel_tol, size_t threads,
                                   int* verdict, char** report_json);
/* kind: "neumann" | "dirichlet" | "robin". */
DFLAB_API dflab_status dflab_eigen_convergence(const char* kind, double beta, const size_t* sizes, size_t num_sizes,
                                               size_t k, char** csv);
DFLAB_API dflab_status dflab_robin_root(double beta, size_t k, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DFLAB_DFLAB_H */
