#ifndef LTBM_H
#define LTBM_H

/* C interface. A run handle owns one validated configuration; commands
   executed on it keep their records and summary until the next command. */

#include <stdint.h>

#if defined(_WIN32)
#define LTBM_API __declspec(dllexport)
#else
#define LTBM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltbm_status {
  LTBM_OK = 0,
  LTBM_ERR_SYNTAX = 1,
  LTBM_ERR_UNKNOWN_SYMBOL,
  LTBM_ERR_DOMAIN,
  LTBM_ERR_SIGNATURE,
  LTBM_ERR_SINGULAR_METRIC,
  LTBM_ERR_INVALID_DIMENSION_PARAM,
  LTBM_ERR_LEFT_CHART,
  LTBM_ERR_STEP_FAILURE,
  LTBM_ERR_NO_CONVERGENCE,
  LTBM_ERR_AMBIGUOUS_GEODESIC,
  LTBM_ERR_CONJUGATE_POINTS,
  LTBM_ERR_SINGULAR_M,
  LTBM_ERR_EIGEN_FAILURE,
  LTBM_ERR_EMPTY_REGION,
  LTBM_ERR_NON_TIMELIKE_PAIR,
  LTBM_ERR_GRID_TOO_COARSE,
  LTBM_ERR_PRECONDITION_FAILED,
  LTBM_ERR_INVARIANT_FAILURE,
  LTBM_ERR_CONTAINMENT_FAILURE,
  LTBM_ERR_DUALIZABILITY_UNVERIFIED,
  LTBM_ERR_TOO_MANY_ATOMS,
  LTBM_ERR_CONFIG,
  LTBM_ERR_INVALID_ARGUMENT,
  LTBM_ERR_UNKNOWN_COMMAND = 64,
  LTBM_ERR_INTERNAL = 99
} ltbm_status;

typedef struct ltbm_run ltbm_run;

LTBM_API const char* ltbm_version(void);
LTBM_API const char* ltbm_status_name(ltbm_status status);
/* Message of the last failure on the calling thread; empty after success. */
LTBM_API const char* ltbm_last_error(void);

LTBM_API ltbm_status ltbm_run_load(const char* path, ltbm_run** out);
LTBM_API ltbm_status ltbm_run_parse(const char* text, ltbm_run** out);
LTBM_API void ltbm_run_free(ltbm_run* run);

LTBM_API ltbm_status ltbm_run_set_seed(ltbm_run* run, uint64_t seed);
LTBM_API ltbm_status ltbm_run_set_threads(ltbm_run* run, int threads);
LTBM_API int ltbm_run_dim(const ltbm_run* run);

/* Runs one command. `exit_status` receives the CLI exit status (0, 1, 2 for
   counterexample outcomes, 3 for module errors, 64 for unknown commands).
   Returns LTBM_OK when the command completed, else the module error. */
LTBM_API ltbm_status ltbm_run_command(ltbm_run* run, const char* command, int* exit_status);
LTBM_API const char* ltbm_run_records(const ltbm_run* run);
LTBM_API const char* ltbm_run_summary(const ltbm_run* run);

/* Direct evaluations at a point; `x` and `v` hold ltbm_run_dim values. */
LTBM_API ltbm_status ltbm_bakry_emery_ricci(const ltbm_run* run, const double* x, const double* v, double* out);
/* `is_minus_infinity` is set when y is not in the causal future of x. */
LTBM_API ltbm_status ltbm_time_separation(const ltbm_run* run, const double* x, const double* y, double* out,
                                          int* is_minus_infinity);

#ifdef __cplusplus
}
#endif

#endif
