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

// Command-line front end over the C API.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qtompc/qtompc.h"

namespace {

int report(qt_status s) {
    if (s != QT_OK) std::fprintf(stderr, "qtompc: %s: %s\n", qt_status_name(s), qt_last_error());
    return int(s);
}

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out;
    std::string algorithm;
    std::string uncertainty;
};

qt_status build_config(const Overrides &o, qt_config **out) {
    qt_config *cfg = nullptr;
    qt_status s = qt_config_new(&cfg);
    if (s != QT_OK) return s;
    auto set = [&](const char *k, const std::string &v) {
        if (s == QT_OK) s = qt_config_set(cfg, k, v.c_str());
    };
    if (!o.config.empty()) s = qt_config_load(cfg, o.config.c_str());
    if (o.seed) set("seed", std::to_string(*o.seed));
    if (o.trials) set("trials", std::to_string(*o.trials));
    if (!o.out.empty()) set("out_dir", o.out);
    if (!o.algorithm.empty()) set("algorithm", o.algorithm);
    if (!o.uncertainty.empty()) set("uncertainty", o.uncertainty);
    if (s == QT_OK) s = qt_config_validate(cfg);
    if (s != QT_OK) {
        qt_config_free(cfg);
        return s;
    }
    *out = cfg;
    return QT_OK;
}

std::string out_dir(const qt_config *cfg) {
    char buf[4096];
    qt_config_get(cfg, "out_dir", buf, sizeof buf, nullptr);
    return buf;
}

int cmd_run(const qt_config *cfg) {
    qt_result *res = nullptr;
    qt_status s = qt_experiment_run(cfg, &res);
    if (s != QT_OK) return report(s);
    const std::string dir = out_dir(cfg);
    s = qt_result_write(res, dir.c_str());
    if (s != QT_OK) {
        qt_result_free(res);
        return report(s);
    }
    int trials = 0, failed = 0, pass = 0;
    double floor = 0.0;
    qt_result_trials(res, &trials, &failed);
    qt_result_bound_check(res, &pass, &floor);
    char hash[32] = "";
    qt_config_hash(cfg, hash, sizeof hash);
    std::printf("config %s, trials %d (failed %d)\n", hash, trials, failed);
    for (const char *m : {"e_track", "infidelity"}) {
        double mean = 0, median = 0, iqr = 0, se = 0;
        qt_result_metric(res, m, "mean", &mean);
        qt_result_metric(res, m, "median", &median);
        qt_result_metric(res, m, "iqr", &iqr);
        qt_result_metric(res, m, "stderr", &se);
        std::printf("%-10s mean %.6g  median %.6g  iqr %.6g  stderr %.3g\n", m, mean, median, iqr, se);
    }
    std::printf("success floor check: %s\n", pass ? "pass" : "FAIL");
    std::printf("wrote %s\n", dir.c_str());
    qt_result_free(res);
    if (failed > 0) {
        std::fprintf(stderr, "qtompc: %d trial(s) stopped on a solver failure\n", failed);
        return QT_ERR_PARTIAL_FAILURE;
    }
    return 0;
}

int cmd_compare(const qt_config *cfg) {
    const std::string dir = out_dir(cfg);
    qt_status s = qt_compare(cfg, dir.c_str());
    if (s != QT_OK && s != QT_ERR_PARTIAL_FAILURE) return report(s);
    std::ifstream f(dir + "/compare.txt");
    std::cout << f.rdbuf();
    return report(s);
}

int cmd_bounds(const qt_config *cfg) {
    const std::string dir = out_dir(cfg);
    int pass = 0;
    qt_status s = qt_bounds_report(cfg, dir.c_str(), &pass);
    if (s != QT_OK) return report(s);
    std::printf("arrival bound check: %s\nwrote %s\n", pass ? "pass" : "FAIL", dir.c_str());
    return 0;
}

int cmd_lstar(const qt_config *cfg) {
    const std::string dir = out_dir(cfg);
    int lstar = -1;
    qt_status s = qt_lstar_study(cfg, dir.c_str(), &lstar);
    if (s != QT_OK) return report(s);
    std::printf("lstar at k = 0: %d\nwrote %s/lstar.csv\n", lstar, dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qtompc: time-optimal MPC with measurement feedback for a qubit"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--trials", o.trials, "number of Monte Carlo trials")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "output directory");
    app.add_option("--algorithm", o.algorithm, "qtompc, tompc or grape")
        ->check(CLI::IsMember({"qtompc", "tompc", "grape"}));
    app.add_option("--uncertainty", o.uncertainty, "none, periodic, uniform or gaussian")
        ->check(CLI::IsMember({"none", "periodic", "uniform", "gaussian"}));

    auto *run = app.add_subcommand("run", "run one experiment");
    auto *compare = app.add_subcommand("compare", "algorithm x uncertainty comparison grid");
    auto *bounds = app.add_subcommand("bounds", "convergence-rate grid and arrival-probability check");
    auto *lstar = app.add_subcommand("lstar", "nominal receding-horizon study");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        // --help and friends exit 0; usage errors share the config-error code.
        return app.exit(e) == 0 ? 0 : int(QT_ERR_CONFIG);
    }

    qt_config *cfg = nullptr;
    if (qt_status s = build_config(o, &cfg); s != QT_OK) return report(s);
    int rc = 0;
    if (*run) rc = cmd_run(cfg);
    else if (*compare) rc = cmd_compare(cfg);
    else if (*bounds) rc = cmd_bounds(cfg);
    else if (*lstar) rc = cmd_lstar(cfg);
    qt_config_free(cfg);
    return rc;
}
