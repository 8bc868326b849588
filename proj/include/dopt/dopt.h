#ifndef DOPT_DOPT_H
#define DOPT_DOPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DOPT_API __declspec(dllexport)
#else
#define DOPT_API __attribute__((visibility("default")))
#endif

/* Status codes. Nonzero values mirror the library's error categories. */
typedef enum dopt_status {
  DOPT_OK = 0,
  DOPT_ERR_INVALID_INDEX = 1,
  DOPT_ERR_MODE_VIOLATION = 2,
  DOPT_ERR_DIMENSION = 3,
  DOPT_ERR_SINGULAR_GRAM = 4,
  DOPT_ERR_INVALID_ORDER = 5,
  DOPT_ERR_DEGENERATE_NODES = 6,
  DOPT_ERR_INFEASIBLE_RANK = 7,
  DOPT_ERR_NOT_RATIONALIZED = 8,
  DOPT_ERR_UNREACHABLE_CONDITION = 9,
  DOPT_ERR_INVALID_PARAMS = 10,
  DOPT_ERR_TOO_LARGE = 11,
  DOPT_ERR_PARSE = 12,
  DOPT_ERR_IO = 13,
  DOPT_ERR_NULL_ARGUMENT = 100,
  DOPT_ERR_INTERNAL = 101
} dopt_status;

typedef enum dopt_mode { DOPT_WITHOUT_REPS = 0, DOPT_WITH_REPS = 1 } dopt_mode;

typedef enum dopt_scheme {
  DOPT_SAMPLE_PROPORTIONAL = 0,
  DOPT_DERAND_PROPORTIONAL = 1,
  DOPT_SAMPLE_ASYMPTOTIC = 2,
  DOPT_DERAND_ASYMPTOTIC = 3,
  DOPT_SAMPLE_REPETITIONS = 4,
  DOPT_DERAND_REPETITIONS = 5
} dopt_scheme;

typedef struct dopt_instance dopt_instance;
typedef struct dopt_relaxation dopt_relaxation;

/* Message for the last failing call on this thread; "" after a success. */
DOPT_API const char* dopt_last_error(void);
DOPT_API const char* dopt_status_name(dopt_status status);
/* Frees strings returned through char** out-parameters. */
DOPT_API void dopt_string_free(char* s);

/* vectors: n rows of m doubles, row-major. */
DOPT_API dopt_status dopt_instance_create(const double* vectors, size_t n, size_t m, size_t k,
                                          dopt_mode mode, dopt_instance** out);
DOPT_API dopt_status dopt_instance_from_json(const char* text, dopt_instance** out);
DOPT_API dopt_status dopt_instance_load(const char* path, dopt_instance** out);
DOPT_API dopt_status dopt_instance_to_json(const dopt_instance* inst, char** out);
DOPT_API void dopt_instance_free(dopt_instance* inst);
DOPT_API dopt_status dopt_instance_shape(const dopt_instance* inst, size_t* n, size_t* m,
                                         size_t* k, dopt_mode* mode);

/* family: "gaussian", "correlated" or "duplicated-basis". */
DOPT_API dopt_status dopt_generate(size_t m, size_t n, size_t k, dopt_mode mode,
                                   const char* family, uint64_t seed, dopt_instance** out);

DOPT_API dopt_status dopt_objective(const dopt_instance* inst, const size_t* members,
                                    size_t count, double* value);
DOPT_API dopt_status dopt_objective_weights(const dopt_instance* inst, const double* x,
                                            size_t len, double* value);

/* max_iters == 0 or rel_tol <= 0 selects the defaults (2000, 1e-7). */
DOPT_API dopt_status dopt_relax(const dopt_instance* inst, size_t max_iters, double rel_tol,
                                dopt_relaxation** out);
DOPT_API void dopt_relaxation_free(dopt_relaxation* relax);
/* weights must hold n doubles. */
DOPT_API dopt_status dopt_relaxation_result(const dopt_relaxation* relax, double* weights,
                                            double* value, int* converged, double* gap);

/* Rounds a relaxation with one scheme. members must hold k entries. eps is used
 * by the asymptotic schemes; seed by the samplers. */
DOPT_API dopt_status dopt_round(const dopt_instance* inst, const dopt_relaxation* relax,
                                dopt_scheme scheme, double eps, uint64_t seed, size_t* members,
                                double* value);

/* Full RunReport as JSON. schemes: comma-separated names such as
 * "derand-proportional,sample-proportional"; NULL or "" runs every scheme that
 * fits the instance mode. */
typedef struct dopt_solve_options {
  const char* schemes;
  double eps;
  size_t trials;
  uint64_t seed;
  double rel_tol;
  size_t max_iters;
} dopt_solve_options;

DOPT_API void dopt_solve_options_default(dopt_solve_options* opts);
DOPT_API dopt_status dopt_solve(const dopt_instance* inst, const dopt_solve_options* opts,
                                char** report_json);

typedef struct dopt_verify_options {
  size_t max_n;
  size_t max_m;
  size_t max_k;
  size_t num_instances;
  uint64_t seed;
  int corrupt_h;
} dopt_verify_options;

DOPT_API void dopt_verify_options_default(dopt_verify_options* opts);
/* passed is set to 1 when every check held. summary_json and table may be NULL. */
DOPT_API dopt_status dopt_verify(const dopt_verify_options* opts, int* passed,
                                 char** summary_json, char** table);

#ifdef __cplusplus
}
#endif

#endif
