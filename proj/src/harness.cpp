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

#include "qtompc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "qtompc/bounds.hpp"
#include "qtompc/error.hpp"
#include "qtompc/grape.hpp"
#include "qtompc/qmpc.hpp"

namespace qtompc {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const fs::path &path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    return f;
}

void close_out(std::ofstream &f, const fs::path &path) {
    f.close();
    if (!f) throw IoError("write to '" + path.string() + "' failed");
}

ordered_json stats_json(const SummaryStats &s) {
    ordered_json j;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["iqr"] = s.iqr;
    j["stderr"] = s.stderr_mean;
    j["n"] = s.n;
    return j;
}

/// Runs fn(i) for i in [0, n) on a pool of workers.
template <typename Fn>
void parallel_for(int n, int threads, Fn &&fn) {
    int workers = threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto &t : pool) t.join();
}

void finalize(ExperimentResult &res) {
    const auto &cfg = res.config;
    const int n = int(res.trials.size());
    std::vector<double> et, inf, ff;
    for (const auto &t : res.trials) {
        et.push_back(t.e_track);
        inf.push_back(t.infidelity);
        ff.push_back(1.0 - t.infidelity);
        if (t.record.truncated) ++res.failed_trials;
    }
    res.e_track = summarize(et);
    res.infidelity = summarize(inf);
    res.final_fidelity = summarize(ff);

    res.series.clear();
    for (int k = 0; k < cfg.steps; ++k) {
        StepSeries s;
        s.k = k;
        std::vector<double> fid, ec;
        int success = 0, measured = 0, at = 0, reached = 0;
        for (const auto &t : res.trials) {
            if (k >= int(t.record.steps.size())) continue;
            const auto &st = t.record.steps[k];
            fid.push_back(st.fid_target);
            ec.push_back(st.etrack_cum);
            s.min_p_success = std::min(s.min_p_success, st.p_success);
            if (st.outcome != Outcome::none) {
                ++measured;
                if (st.outcome == Outcome::success) ++success;
            }
            if (st.fid_target >= kAtTargetFidelity) ++at;
            if (t.first_reach >= 0 && t.first_reach <= k) ++reached;
        }
        s.fid_target = summarize(fid);
        s.etrack_cum = summarize(ec);
        const int m = int(fid.size());
        s.success_frequency = measured > 0 ? double(success) / measured : 1.0;
        s.at_target = m > 0 ? double(at) / m : 0.0;
        s.reached = m > 0 ? double(reached) / m : 0.0;
        res.series.push_back(s);
    }

    BoundCheck &bc = res.bound_check;
    const double eff = cfg.uncertainty == UncertaintyKind::none ? 0.0 : cfg.uncertainty_bound * std::sqrt(2.0);
    if (eff * cfg.ts < std::numbers::pi / 2.0) {
        bc.applicable = true;
        bc.floor = success_bound(eff, cfg.ts);
        bc.worst_margin = std::numeric_limits<double>::infinity();
        for (const auto &s : res.series) {
            const double p = s.success_frequency;
            const double sigma = std::sqrt(std::max(0.0, p * (1.0 - p)) / std::max(1, n));
            bc.worst_margin = std::min(bc.worst_margin, p - (bc.floor - 3.0 * sigma));
        }
        bc.pass = bc.worst_margin >= 0.0;
    } else {
        bc.applicable = false;
        bc.floor = std::numeric_limits<double>::quiet_NaN();
        bc.pass = true;
        res.warnings.push_back("effective uncertainty bound times ts is not below pi/2; success floor not checked");
    }
}

std::string cell_dir_name(UncertaintyKind u, Algorithm a) {
    return std::string(uncertainty_kind_name(u)) + "_" + algorithm_name(a);
}

}  // namespace

double quantile_sorted(const std::vector<double> &sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * double(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - double(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    s.n = int(values.size());
    if (values.empty()) {
        s.mean = s.median = s.iqr = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / double(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stderr_mean = std::sqrt(ss / double(s.n - 1)) / std::sqrt(double(s.n));
    }
    std::sort(values.begin(), values.end());
    s.median = quantile_sorted(values, 0.5);
    s.iqr = quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
    config.validate();
    ExperimentResult res;
    res.config = config;
    const QubitState s0 = parse_state(config.initial_state);
    const OcpSpec spec = config.ocp_spec();
    const NominalModel model = config.model();

    // Open-loop baselines compute their control sequence once.
    ControlSequence open_loop;
    std::unique_ptr<OcpSolver> solver;
    if (config.algorithm != Algorithm::grape) {
        solver = std::make_unique<OcpSolver>(spec, config.solver_params());
    }
    if (config.algorithm == Algorithm::tompc) {
        RunRecord nominal = tompc_closed_loop(*solver, s0, config.steps);
        for (const auto &st : nominal.steps) open_loop.push_back(st.control);
    } else if (config.algorithm == Algorithm::grape) {
        GrapeResult g = grape_optimize(model, s0, spec.target, config.grape_params());
        if (!g.converged) {
            res.warnings.push_back("GRAPE stopped on the iteration cap; nominal fidelity " + num(g.fidelity));
        }
        open_loop = std::move(g.controls);
    }

    res.trials.resize(static_cast<std::size_t>(config.trials));
    parallel_for(config.trials, config.threads, [&](int i) {
        TrialResult &t = res.trials[i];
        t.trial = i;
        t.seed = split_seed(config.seed, std::uint64_t(i));
        const RngStream stream(t.seed);
        const UncertaintyModel unc = config.uncertainty_model(stream);
        if (config.algorithm == Algorithm::qtompc) {
            t.record = qmpc_run(*solver, unc, s0, config.steps, stream);
        } else {
            t.record = grape_replay(open_loop, model, unc, s0, spec.target, stream);
        }
        t.record.seed = t.seed;
        t.record.config_hash = config.hash();
        t.e_track = e_track(t.record);
        t.infidelity = infidelity(t.record);
        for (const auto &st : t.record.steps) {
            if (st.fid_target >= kAtTargetFidelity) {
                t.first_reach = st.k;
                break;
            }
        }
    });
    for (const auto &t : res.trials) {
        if (!t.record.warning.empty()) {
            res.warnings.push_back(t.record.warning);
            break;
        }
    }
    finalize(res);
    return res;
}

void write_experiment(const ExperimentResult &res, const std::string &dir) {
    ensure_dir(dir);
    const fs::path root(dir);
    const double ts = res.config.ts;

    {
        const auto path = root / "steps.csv";
        auto f = open_out(path);
        f << "trial,k,t_ns,ux,uy,uz,p_success,outcome,fid_target,etrack_cum\n";
        for (const auto &t : res.trials) {
            for (const auto &st : t.record.steps) {
                f << t.trial << ',' << st.k << ',' << num(double(st.k + 1) * ts) << ',' << num(st.control.x) << ','
                  << num(st.control.y) << ',' << num(st.control.z) << ',' << num(st.p_success) << ','
                  << outcome_name(st.outcome) << ',' << num(st.fid_target) << ',' << num(st.etrack_cum) << '\n';
            }
        }
        close_out(f, path);
    }
    {
        const auto path = root / "trials.csv";
        auto f = open_out(path);
        f << "trial,seed,e_track,infidelity,final_fid,failures,first_reach_k,truncated\n";
        for (const auto &t : res.trials) {
            int failures = 0;
            for (const auto &st : t.record.steps) failures += st.outcome == Outcome::failure;
            f << t.trial << ',' << t.seed << ',' << num(t.e_track) << ',' << num(t.infidelity) << ','
              << num(1.0 - t.infidelity) << ',' << failures << ',' << t.first_reach << ','
              << (t.record.truncated ? 1 : 0) << '\n';
        }
        close_out(f, path);
    }
    {
        const auto path = root / "series.csv";
        auto f = open_out(path);
        f << "k,t_ns,fid_mean,fid_median,fid_q1,fid_q3,fid_iqr,fid_stderr,n,etrack_mean,etrack_median,"
             "etrack_iqr,success_frequency,min_p_success,at_target,reached\n";
        for (const auto &s : res.series) {
            std::vector<double> fid;
            for (const auto &t : res.trials) {
                if (s.k < int(t.record.steps.size())) fid.push_back(t.record.steps[s.k].fid_target);
            }
            std::sort(fid.begin(), fid.end());
            f << s.k << ',' << num(double(s.k + 1) * ts) << ',' << num(s.fid_target.mean) << ','
              << num(s.fid_target.median) << ',' << num(quantile_sorted(fid, 0.25)) << ','
              << num(quantile_sorted(fid, 0.75)) << ',' << num(s.fid_target.iqr) << ','
              << num(s.fid_target.stderr_mean) << ',' << s.fid_target.n << ',' << num(s.etrack_cum.mean) << ','
              << num(s.etrack_cum.median) << ',' << num(s.etrack_cum.iqr) << ',' << num(s.success_frequency) << ','
              << num(s.min_p_success) << ',' << num(s.at_target) << ',' << num(s.reached) << '\n';
        }
        close_out(f, path);
    }
    {
        ordered_json j;
        j["config_hash"] = res.config.hash();
        j["algorithm"] = algorithm_name(res.config.algorithm);
        j["uncertainty"] = uncertainty_kind_name(res.config.uncertainty);
        j["seed"] = res.config.seed;
        j["trials"] = int(res.trials.size());
        j["failed_trials"] = res.failed_trials;
        j["notes"] = {
            {"e_track", "sum over steps of the squared trace distance between prediction and post state"},
            {"infidelity", "1 - |<target|final post-measurement state>|^2"},
        };
        j["metrics"]["e_track"] = stats_json(res.e_track);
        j["metrics"]["infidelity"] = stats_json(res.infidelity);
        j["metrics"]["final_fidelity"] = stats_json(res.final_fidelity);
        ordered_json series = ordered_json::array();
        for (const auto &s : res.series) {
            ordered_json row = stats_json(s.fid_target);
            row["k"] = s.k;
            series.push_back(row);
        }
        j["metrics"]["fidelity_series"] = series;
        ordered_json bc;
        bc["applicable"] = res.bound_check.applicable;
        if (res.bound_check.applicable) {
            bc["floor"] = res.bound_check.floor;
            bc["worst_margin"] = res.bound_check.worst_margin;
        }
        bc["pass"] = res.bound_check.pass;
        j["bound_check"] = bc;
        j["warnings"] = res.warnings;
        j["config"] = ordered_json::object();
        // out_dir and threads do not affect results and stay out of the file.
        for (const auto &k : ExperimentConfig::keys()) {
            if (k != "out_dir" && k != "threads") j["config"][k] = res.config.get(k);
        }

        const auto path = root / "summary.json";
        auto f = open_out(path);
        f << j.dump(2) << '\n';
        close_out(f, path);
    }
}

const CompareCell &CompareTable::at(UncertaintyKind u, Algorithm a) const {
    for (const auto &c : cells) {
        if (c.uncertainty == u && c.algorithm == a) return c;
    }
    throw InvalidArgument("no such comparison cell");
}

const std::vector<UncertaintyKind> &compare_rows() {
    static const std::vector<UncertaintyKind> rows = {UncertaintyKind::periodic, UncertaintyKind::uniform,
                                                      UncertaintyKind::truncated_gaussian, UncertaintyKind::none};
    return rows;
}

const std::vector<Algorithm> &compare_columns() {
    static const std::vector<Algorithm> cols = {Algorithm::qtompc, Algorithm::tompc, Algorithm::grape};
    return cols;
}

CompareTable compare_tables(const ExperimentConfig &base, const std::string &out_dir,
                            std::vector<ExperimentResult> *results) {
    base.validate();
    ensure_dir(out_dir);
    CompareTable table;
    for (UncertaintyKind u : compare_rows()) {
        for (Algorithm a : compare_columns()) {
            ExperimentConfig cfg = base;
            cfg.uncertainty = u;
            cfg.algorithm = a;
            ExperimentResult r = run_experiment(cfg);
            write_experiment(r, (fs::path(out_dir) / cell_dir_name(u, a)).string());
            table.cells.push_back({u, a, r.e_track, r.infidelity, r.failed_trials});
            if (results) results->push_back(std::move(r));
        }
    }

    const fs::path root(out_dir);
    {
        const auto path = root / "compare.csv";
        auto f = open_out(path);
        f << "uncertainty,algorithm,e_track_mean,e_track_stderr,infidelity_mean,infidelity_stderr,n,failed\n";
        for (const auto &c : table.cells) {
            f << uncertainty_kind_name(c.uncertainty) << ',' << algorithm_name(c.algorithm) << ','
              << num(c.e_track.mean) << ',' << num(c.e_track.stderr_mean) << ',' << num(c.infidelity.mean) << ','
              << num(c.infidelity.stderr_mean) << ',' << c.e_track.n << ',' << c.failed_trials << '\n';
        }
        close_out(f, path);
    }
    {
        ordered_json j;
        j["seed"] = base.seed;
        j["trials"] = base.trials;
        for (const char *metric : {"e_track", "infidelity"}) {
            for (UncertaintyKind u : compare_rows()) {
                for (Algorithm a : compare_columns()) {
                    const auto &c = table.at(u, a);
                    const auto &s = std::string(metric) == "e_track" ? c.e_track : c.infidelity;
                    j[metric][uncertainty_kind_name(u)][algorithm_name(a)] = stats_json(s);
                }
            }
        }
        const auto path = root / "compare.json";
        auto f = open_out(path);
        f << j.dump(2) << '\n';
        close_out(f, path);
    }
    {
        const auto path = root / "compare.txt";
        auto f = open_out(path);
        char line[160];
        for (const char *metric : {"e_track", "infidelity"}) {
            std::snprintf(line, sizeof line, "%-12s %12s %12s %12s\n", metric, "qtompc", "tompc", "grape");
            f << line;
            for (UncertaintyKind u : compare_rows()) {
                double v[3];
                for (int i = 0; i < 3; ++i) {
                    const auto &c = table.at(u, compare_columns()[i]);
                    v[i] = std::string(metric) == "e_track" ? c.e_track.mean : c.infidelity.mean;
                }
                std::snprintf(line, sizeof line, "%-12s %12.4g %12.4g %12.4g\n", uncertainty_kind_name(u), v[0], v[1],
                              v[2]);
                f << line;
            }
            f << '\n';
        }
        close_out(f, path);
    }
    return table;
}

bool emit_bounds_report(const ExperimentConfig &config, const std::string &out_dir) {
    config.validate();
    ensure_dir(out_dir);
    const fs::path root(out_dir);
    ordered_json report;

    // Rate grid: a few horizons against a spread of per-step success
    // probabilities, including each horizon's knee L/(L+1), the configured
    // floor, and c = 1 (alpha = 0).
    const double eff = config.uncertainty_bound * std::sqrt(2.0);
    const double c_cfg = success_bound(eff, config.ts);
    {
        const auto path = root / "rates.csv";
        auto f = open_out(path);
        f << "L,c,alpha,case,eta,max_root_modulus,enclosed\n";
        ordered_json rows = ordered_json::array();
        for (int L : {1, 2, 3, 5, 10, 15}) {
            std::vector<double> cs = {0.25, 0.5, double(L) / (L + 1.0), 0.9, 0.99, c_cfg, 1.0};
            if (L == config.horizon) cs.push_back(c_cfg);
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            for (double c : cs) {
                const ConvergenceRate r = convergence_rate(c, L);
                const double m = max_root_modulus_excluding_c(c, L);
                const double alpha = (1.0 - c) * std::pow(c, L);
                const bool ok = m <= r.eta + 1e-9;
                f << L << ',' << num(c) << ',' << num(alpha) << ',' << r.case_id << ',' << num(r.eta) << ','
                  << num(m) << ',' << (ok ? 1 : 0) << '\n';
                rows.push_back({{"L", L}, {"c", c}, {"alpha", alpha}, {"case", r.case_id}, {"eta", r.eta},
                                {"max_root_modulus", m}, {"enclosed", ok}});
            }
        }
        close_out(f, path);
        report["rates"] = rows;
    }

    ExperimentConfig cfg = config;
    cfg.algorithm = Algorithm::qtompc;
    ExperimentResult res = run_experiment(cfg);
    write_experiment(res, (root / "experiment").string());

    bool all_ok = true;
    {
        const auto path = root / "arrival.csv";
        auto f = open_out(path);
        f << "N,p_tar_bound,at_target,reached,sigma,pass\n";
        const int n = int(res.trials.size());
        for (const auto &s : res.series) {
            const int N = s.k + 1;
            const double bound = p_tar_lower_bound(c_cfg, config.horizon, N);
            const double p = s.at_target;
            const double sigma = std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
            const bool ok = p >= bound - 3.0 * sigma;
            all_ok = all_ok && ok;
            f << N << ',' << num(bound) << ',' << num(p) << ',' << num(s.reached) << ',' << num(sigma) << ','
              << (ok ? 1 : 0) << '\n';
        }
        close_out(f, path);
    }
    report["success_floor"] = c_cfg;
    report["effective_bound"] = eff;
    report["horizon"] = config.horizon;
    report["trials"] = config.trials;
    report["arrival_pass"] = all_ok;
    {
        const auto path = root / "bounds.json";
        auto f = open_out(path);
        f << report.dump(2) << '\n';
        close_out(f, path);
    }
    return all_ok;
}

RunRecord lstar_study(const ExperimentConfig &config, const std::string &out_dir) {
    config.validate();
    ensure_dir(out_dir);
    OcpSolver solver(config.ocp_spec(), config.solver_params());
    RunRecord rec = tompc_closed_loop(solver, parse_state(config.initial_state), config.steps);
    const auto path = fs::path(out_dir) / "lstar.csv";
    auto f = open_out(path);
    f << "k,t_ns,ux,uy,uz,fid_target,lstar\n";
    for (const auto &st : rec.steps) {
        f << st.k << ',' << num(double(st.k + 1) * config.ts) << ',' << num(st.control.x) << ','
          << num(st.control.y) << ',' << num(st.control.z) << ',' << num(st.fid_target) << ',' << st.lstar << '\n';
    }
    close_out(f, path);
    return rec;
}

}  // namespace qtompc
