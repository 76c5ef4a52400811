/*
 * Copyright 2026 The qtompc Authors
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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qtompc/qtompc.h"

static int failures = 0;

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s (last error: %s)\n", __FILE__, __LINE__, #cond, \
                    qt_last_error());                                 \
            ++failures;                                               \
        }                                                             \
    } while (0)

int main(void) {
    qt_config *cfg = NULL;
    qt_result *res = NULL;
    char buf[64];
    size_t needed = 0;
    double v = 0.0, fp[4];
    int pass = 0, trials = 0, failed = 0, case_id = 0, lstar = 0;
    char dir[512];

    CHECK(qt_config_new(&cfg) == QT_OK);
    CHECK(qt_config_get(cfg, "horizon", buf, sizeof buf, &needed) == QT_OK);
    CHECK(strcmp(buf, "10") == 0);
    CHECK(qt_config_set(cfg, "no_such_key", "1") == QT_ERR_CONFIG);
    CHECK(strstr(qt_last_error(), "no_such_key") != NULL);
    CHECK(qt_config_parse(cfg, "trials = 3\nsteps = 20\nthreads = 1\n") == QT_OK);
    CHECK(qt_config_set(cfg, "uncertainty", "none") == QT_OK);
    CHECK(qt_config_validate(cfg) == QT_OK);
    CHECK(qt_config_get(cfg, "trials", buf, 1, &needed) == QT_OK);
    CHECK(needed == 1);
    CHECK(qt_config_hash(cfg, buf, sizeof buf) == QT_OK);
    CHECK(strlen(buf) == 16);
    CHECK(qt_config_load(cfg, "/nonexistent/path.cfg") == QT_ERR_IO);
    CHECK(qt_config_new(NULL) == QT_ERR_INVALID_ARGUMENT);

    CHECK(qt_experiment_run(cfg, &res) == QT_OK);
    CHECK(qt_result_trials(res, &trials, &failed) == QT_OK);
    CHECK(trials == 3 && failed == 0);
    CHECK(qt_result_metric(res, "e_track", "mean", &v) == QT_OK);
    CHECK(v == 0.0);
    CHECK(qt_result_metric(res, "infidelity", "n", &v) == QT_OK);
    CHECK(v == 3.0);
    CHECK(qt_result_metric(res, "bogus", "mean", &v) == QT_ERR_INVALID_ARGUMENT);
    CHECK(qt_result_bound_check(res, &pass, &v) == QT_OK);
    CHECK(pass == 1);
    snprintf(dir, sizeof dir, "%s/qtompc_c_api", getenv("TMPDIR") ? getenv("TMPDIR") : "/tmp");
    CHECK(qt_result_write(res, dir) == QT_OK);
    qt_result_free(res);

    CHECK(qt_lstar_study(cfg, dir, &lstar) == QT_OK);
    CHECK(lstar == 3);

    CHECK(qt_success_bound(0.0, 1.0, &v) == QT_OK && v == 1.0);
    CHECK(qt_success_bound(2.0, 1.0, &v) == QT_ERR_HYPOTHESIS_VIOLATED);
    CHECK(qt_failure_probabilities(0.75, 2, 3, fp) == QT_OK);
    CHECK(fp[0] == 1.0 && fp[1] == 0.4375 && fp[2] == 0.296875);
    CHECK(qt_p_tar_lower_bound(0.75, 2, 3, &v) == QT_OK && fabs(v - 0.703125) < 1e-15);
    CHECK(qt_convergence_rate(0.5, 3, &case_id, &v) == QT_OK && case_id == 1 && v == 0.9375);
    CHECK(strcmp(qt_status_name(QT_ERR_SOLVER_FAILURE), "solver-failure") == 0);

    qt_config_free(cfg);
    if (failures) {
        fprintf(stderr, "%d check(s) failed\n", failures);
        return 1;
    }
    printf("c api ok\n");
    return 0;
}
