// Copyright 2026 The qtompc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtompc/qtompc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qtompc/bounds.hpp"
#include "qtompc/config.hpp"
#include "qtompc/error.hpp"
#include "qtompc/harness.hpp"

struct qt_config {
    qtompc::ExperimentConfig cfg;
};

struct qt_result {
    qtompc::ExperimentResult res;
};

namespace {

thread_local std::string g_last_error;

qt_status fail(qt_status s, const std::string &msg) {
    g_last_error = msg;
    return s;
}

/// Runs fn, mapping exceptions to status codes.
template <typename Fn>
qt_status guarded(Fn &&fn) noexcept {
    try {
        return fn();
    } catch (const qtompc::Error &e) {
        return fail(static_cast<qt_status>(e.code()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(QT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(QT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QT_ERR_INTERNAL, "unknown exception");
    }
}

#define QT_REQUIRE(cond, what) \
    if (!(cond)) return fail(QT_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char *qt_last_error(void) { return g_last_error.c_str(); }

const char *qt_status_name(qt_status status) {
    return qtompc::error_code_name(static_cast<qtompc::ErrorCode>(status));
}

qt_status qt_config_new(qt_config **out) {
    return guarded([&] {
        QT_REQUIRE(out, "out is NULL");
        *out = new qt_config{};
        return QT_OK;
    });
}

void qt_config_free(qt_config *cfg) { delete cfg; }

qt_status qt_config_load(qt_config *cfg, const char *path) {
    return guarded([&] {
        QT_REQUIRE(cfg && path, "cfg or path is NULL");
        cfg->cfg = qtompc::load_config(path);
        return QT_OK;
    });
}

qt_status qt_config_parse(qt_config *cfg, const char *text) {
    return guarded([&] {
        QT_REQUIRE(cfg && text, "cfg or text is NULL");
        cfg->cfg = qtompc::parse_config(text);
        return QT_OK;
    });
}

qt_status qt_config_set(qt_config *cfg, const char *key, const char *value) {
    return guarded([&] {
        QT_REQUIRE(cfg && key && value, "cfg, key or value is NULL");
        cfg->cfg.set(key, value);
        return QT_OK;
    });
}

qt_status qt_config_get(const qt_config *cfg, const char *key, char *buf, size_t len, size_t *needed) {
    return guarded([&] {
        QT_REQUIRE(cfg && key, "cfg or key is NULL");
        QT_REQUIRE(buf || len == 0, "buf is NULL");
        const std::string v = cfg->cfg.get(key);
        if (needed) *needed = v.size();
        if (len > 0) {
            const size_t n = std::min(len - 1, v.size());
            std::memcpy(buf, v.data(), n);
            buf[n] = '\0';
        }
        return QT_OK;
    });
}

qt_status qt_config_validate(const qt_config *cfg) {
    return guarded([&] {
        QT_REQUIRE(cfg, "cfg is NULL");
        cfg->cfg.validate();
        return QT_OK;
    });
}

qt_status qt_config_hash(const qt_config *cfg, char *buf, size_t len) {
    return guarded([&] {
        QT_REQUIRE(cfg && buf, "cfg or buf is NULL");
        const std::string h = cfg->cfg.hash();
        QT_REQUIRE(len > h.size(), "buffer too small for the hash");
        std::memcpy(buf, h.c_str(), h.size() + 1);
        return QT_OK;
    });
}

qt_status qt_experiment_run(const qt_config *cfg, qt_result **out) {
    return guarded([&] {
        QT_REQUIRE(cfg && out, "cfg or out is NULL");
        *out = nullptr;
        auto *r = new qt_result{qtompc::run_experiment(cfg->cfg)};
        *out = r;
        return QT_OK;
    });
}

void qt_result_free(qt_result *res) { delete res; }

qt_status qt_result_write(const qt_result *res, const char *dir) {
    return guarded([&] {
        QT_REQUIRE(res && dir, "res or dir is NULL");
        qtompc::write_experiment(res->res, dir);
        return QT_OK;
    });
}

qt_status qt_result_metric(const qt_result *res, const char *metric, const char *stat, double *out) {
    return guarded([&] {
        QT_REQUIRE(res && metric && stat && out, "NULL argument");
        const std::string m(metric), s(stat);
        const qtompc::SummaryStats *st = nullptr;
        if (m == "e_track") st = &res->res.e_track;
        if (m == "infidelity") st = &res->res.infidelity;
        if (m == "final_fidelity") st = &res->res.final_fidelity;
        QT_REQUIRE(st, "unknown metric '" + m + "'");
        if (s == "mean") *out = st->mean;
        else if (s == "median") *out = st->median;
        else if (s == "iqr") *out = st->iqr;
        else if (s == "stderr") *out = st->stderr_mean;
        else if (s == "n") *out = st->n;
        else return fail(QT_ERR_INVALID_ARGUMENT, "unknown statistic '" + s + "'");
        return QT_OK;
    });
}

qt_status qt_result_trials(const qt_result *res, int *trials, int *failed_trials) {
    return guarded([&] {
        QT_REQUIRE(res, "res is NULL");
        if (trials) *trials = int(res->res.trials.size());
        if (failed_trials) *failed_trials = res->res.failed_trials;
        return QT_OK;
    });
}

qt_status qt_result_bound_check(const qt_result *res, int *pass, double *floor) {
    return guarded([&] {
        QT_REQUIRE(res, "res is NULL");
        if (pass) *pass = res->res.bound_check.pass ? 1 : 0;
        if (floor) *floor = res->res.bound_check.floor;
        return QT_OK;
    });
}

qt_status qt_compare(const qt_config *cfg, const char *out_dir) {
    return guarded([&] {
        QT_REQUIRE(cfg && out_dir, "cfg or out_dir is NULL");
        const auto table = qtompc::compare_tables(cfg->cfg, out_dir);
        for (const auto &c : table.cells) {
            if (c.failed_trials > 0) return fail(QT_ERR_PARTIAL_FAILURE, "some trials stopped on a solver failure");
        }
        return QT_OK;
    });
}

qt_status qt_bounds_report(const qt_config *cfg, const char *out_dir, int *pass) {
    return guarded([&] {
        QT_REQUIRE(cfg && out_dir, "cfg or out_dir is NULL");
        const bool ok = qtompc::emit_bounds_report(cfg->cfg, out_dir);
        if (pass) *pass = ok ? 1 : 0;
        return QT_OK;
    });
}

qt_status qt_lstar_study(const qt_config *cfg, const char *out_dir, int *first_lstar) {
    return guarded([&] {
        QT_REQUIRE(cfg && out_dir, "cfg or out_dir is NULL");
        const auto rec = qtompc::lstar_study(cfg->cfg, out_dir);
        if (first_lstar) *first_lstar = rec.steps.empty() ? -1 : rec.steps.front().lstar;
        return QT_OK;
    });
}

qt_status qt_success_bound(double bound, double ts, double *out) {
    return guarded([&] {
        QT_REQUIRE(out, "out is NULL");
        *out = qtompc::success_bound(bound, ts);
        return QT_OK;
    });
}

qt_status qt_failure_probabilities(double c, int horizon, int n, double *out) {
    return guarded([&] {
        QT_REQUIRE(out, "out is NULL");
        const auto f = qtompc::failure_probabilities(c, horizon, n);
        std::copy(f.begin(), f.end(), out);
        return QT_OK;
    });
}

qt_status qt_p_tar_lower_bound(double c, int horizon, int n, double *out) {
    return guarded([&] {
        QT_REQUIRE(out, "out is NULL");
        *out = qtompc::p_tar_lower_bound(c, horizon, n);
        return QT_OK;
    });
}

qt_status qt_convergence_rate(double c, int horizon, int *case_id, double *eta) {
    return guarded([&] {
        QT_REQUIRE(case_id && eta, "NULL argument");
        const auto r = qtompc::convergence_rate(c, horizon);
        *case_id = r.case_id;
        *eta = r.eta;
        return QT_OK;
    });
}

}  // extern "C"
