/* Copyright 2026 The qtompc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTOMPC_QTOMPC_H
#define QTOMPC_QTOMPC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QT_API __declspec(dllexport)
#else
#define QT_API __attribute__((visibility("default")))
#endif

typedef enum qt_status {
    QT_OK = 0,
    QT_ERR_INVALID_ARGUMENT = 1,
    QT_ERR_NUMERIC = 2,
    QT_ERR_SOLVER_FAILURE = 3,
    QT_ERR_HYPOTHESIS_VIOLATED = 4,
    QT_ERR_DEGENERATE_MEASUREMENT = 5,
    QT_ERR_CONFIG = 6,
    QT_ERR_IO = 7,
    QT_ERR_PARTIAL_FAILURE = 8,
    QT_ERR_INTERNAL = 9
} qt_status;

/* Opaque handles. */
typedef struct qt_config qt_config;
typedef struct qt_result qt_result;

/* Message for the last non-OK status returned on this thread. Never NULL. */
QT_API const char *qt_last_error(void);
QT_API const char *qt_status_name(qt_status status);

/* Configuration with default values. */
QT_API qt_status qt_config_new(qt_config **out);
QT_API void qt_config_free(qt_config *cfg);
/* Replaces cfg with the document at path; keys not present keep defaults. */
QT_API qt_status qt_config_load(qt_config *cfg, const char *path);
QT_API qt_status qt_config_parse(qt_config *cfg, const char *text);
QT_API qt_status qt_config_set(qt_config *cfg, const char *key, const char *value);
/* Copies the value's text into buf (NUL-terminated, truncated to len). The
   untruncated length is stored in needed if non-NULL. */
QT_API qt_status qt_config_get(const qt_config *cfg, const char *key, char *buf, size_t len, size_t *needed);
QT_API qt_status qt_config_validate(const qt_config *cfg);
/* 16 hex digits plus NUL; buf must hold 17 bytes. */
QT_API qt_status qt_config_hash(const qt_config *cfg, char *buf, size_t len);

/* Runs the configured experiment. Trials that stop on a solver failure are
   counted by qt_result_failed_trials; the call itself still returns QT_OK. */
QT_API qt_status qt_experiment_run(const qt_config *cfg, qt_result **out);
QT_API void qt_result_free(qt_result *res);
/* Writes steps.csv, trials.csv, series.csv and summary.json into dir. */
QT_API qt_status qt_result_write(const qt_result *res, const char *dir);
/* metric: "e_track", "infidelity" or "final_fidelity";
   stat: "mean", "median", "iqr", "stderr" or "n". */
QT_API qt_status qt_result_metric(const qt_result *res, const char *metric, const char *stat, double *out);
QT_API qt_status qt_result_trials(const qt_result *res, int *trials, int *failed_trials);
/* 1 if the per-step success frequencies respect the success floor. */
QT_API qt_status qt_result_bound_check(const qt_result *res, int *pass, double *floor);

/* 3x3 comparison grid (plus the no-uncertainty row) written under out_dir.
   Returns QT_ERR_PARTIAL_FAILURE if any trial in any cell failed. */
QT_API qt_status qt_compare(const qt_config *cfg, const char *out_dir);
/* Rate grid and arrival-probability check; pass receives 1 when every
   arrival row meets its bound. */
QT_API qt_status qt_bounds_report(const qt_config *cfg, const char *out_dir, int *pass);
/* Nominal receding-horizon study; first_lstar receives the time-optimal step
   count of the first solve. */
QT_API qt_status qt_lstar_study(const qt_config *cfg, const char *out_dir, int *first_lstar);

/* Scalar bounds. */
QT_API qt_status qt_success_bound(double bound, double ts, double *out);
QT_API qt_status qt_failure_probabilities(double c, int horizon, int n, double *out);
QT_API qt_status qt_p_tar_lower_bound(double c, int horizon, int n, double *out);
QT_API qt_status qt_convergence_rate(double c, int horizon, int *case_id, double *eta);

#ifdef __cplusplus
}
#endif

#endif
