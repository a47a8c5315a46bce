/* C interface to the qsid library. All functions are thread-safe on
 * distinct handles; handles are immutable after creation. */
#ifndef QSID_QSID_H
#define QSID_QSID_H

#include <stddef.h>
#include <stdint.h>

#if defined(QSID_BUILDING)
#define QSID_API __attribute__((visibility("default")))
#else
#define QSID_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsid_status {
  QSID_OK = 0,
  QSID_ERR_INVALID_ARGUMENT = 1,
  QSID_ERR_DIMENSION = 2,
  QSID_ERR_VALIDATION = 3,
  QSID_ERR_NUMERICAL = 4,
  QSID_ERR_IO = 5,
  QSID_ERR_SCHEMA = 6,
  QSID_ERR_INTERNAL = 99
} qsid_status;

typedef struct qsid_series qsid_series;
typedef struct qsid_model qsid_model;

/* Message of the last failed call on this thread ("" if none). */
QSID_API const char* qsid_last_error(void);
QSID_API const char* qsid_version(void);
QSID_API void qsid_string_free(char* s);

/* ---- time series ---------------------------------------------------- */

typedef struct qsid_generate_options {
  size_t n;
  size_t num_jumps;
  size_t steps; /* N: the series holds N + 1 states */
  double dt;
  double jump_scale;
  double noise_weight;
  uint64_t seed;
} qsid_generate_options;

QSID_API void qsid_generate_options_default(qsid_generate_options* opts);

/* Draws a random Lindblad model and initial state, propagates exactly and
 * mixes in noise. Either output may be NULL. */
QSID_API qsid_status qsid_series_generate(const qsid_generate_options* opts, qsid_series** exact_out,
                                          qsid_series** noisy_out);
QSID_API qsid_status qsid_series_read(const char* path, qsid_series** out);
QSID_API qsid_status qsid_series_write(const qsid_series* s, const char* path);
QSID_API void qsid_series_free(qsid_series* s);

/* Any output pointer may be NULL. */
QSID_API qsid_status qsid_series_info(const qsid_series* s, size_t* dim, size_t* steps, double* dt);
/* Writes state `index` as 2*dim*dim doubles: row-major, re/im interleaved. */
QSID_API qsid_status qsid_series_state(const qsid_series* s, size_t index, double* out, size_t out_len);
QSID_API qsid_status qsid_min_fidelity(const qsid_series* exact, const qsid_series* sid, double* out);

/* ---- identification ------------------------------------------------- */

typedef struct qsid_identify_options {
  const char* method; /* "kraus", "pade", "trapezoid" or "simpson" */
  size_t num_ops;     /* 0: 4 Kraus operators or 1 jump operator */
  double g_tol;
  size_t max_iter;
  size_t hops;
  double step_size;
  double temperature;
  uint64_t seed;
  double penalty_weight;
  double completeness_target;
  size_t max_penalty_rounds;
} qsid_identify_options;

QSID_API void qsid_identify_options_default(qsid_identify_options* opts);
QSID_API qsid_status qsid_identify(const qsid_series* data, const qsid_identify_options* opts, qsid_model** out);
QSID_API qsid_status qsid_model_read(const char* path, qsid_model** out);
QSID_API qsid_status qsid_model_write(const qsid_model* m, const char* path);
QSID_API void qsid_model_free(qsid_model* m);

/* completeness_residual is NaN for Lindblad models. Outputs may be NULL. */
QSID_API qsid_status qsid_model_info(const qsid_model* m, int* converged, double* best_value, double* grad_norm,
                                     double* completeness_residual);
/* Serialized model document; release with qsid_string_free. */
QSID_API qsid_status qsid_model_to_json(const qsid_model* m, char** out);

/* Propagates rho0 of `initial` for dt and steps taken from `initial`.
 * Returns QSID_ERR_NUMERICAL when the identified model is non-physical. */
QSID_API qsid_status qsid_model_repropagate(const qsid_model* m, const qsid_series* initial, qsid_series** out);

/* ---- experiments ---------------------------------------------------- */

/* Runs a sweep described by a JSON config and writes one record per line to
 * records_path. summary_csv_out (may be NULL) receives the per-cell table. */
QSID_API qsid_status qsid_experiment_run(const char* config_json, const char* records_path,
                                         char** summary_csv_out);
QSID_API qsid_status qsid_report(const char* records_path, const char* csv_path, char** summary_csv_out);

#ifdef __cplusplus
}
#endif

#endif /* QSID_QSID_H */
