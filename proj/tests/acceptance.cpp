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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Usage: acceptance [scratch-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qtompc/bounds.hpp"
#include "qtompc/harness.hpp"
#include "qtompc/ocp.hpp"

using namespace qtompc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failed = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int id, bool ok, const std::string &detail) {
    std::printf("criterion %d: %s (%s)\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
}

template <class... Args>
std::string fmt(const char *f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Runs fn and reports a thrown exception as a failure of criterion id.
void guarded(int id, const std::function<void()> &fn) {
    try {
        fn();
    } catch (const std::exception &e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void propagator_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> w(-3.0, 3.0), t(0.0, 2.0);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = w(rng), y = w(rng), z = w(rng), ts = t(rng);
        const Propagator u = pauli_exponential({x, y, z}, ts);
        worst = std::max(worst, oracle::max_entry_diff(u, oracle::expm_eig(x, y, z, ts)));
    }
    const double dt = seconds_since(t0);
    report(1, worst <= 1e-10 && dt < 1.0, fmt("max entry error %.3g, %.3f s", worst, dt));
}

void success_floor() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.01, 3.0);
    std::normal_distribution<double> n;
    NominalModel m;
    m.r = 0.0;
    m.control_axes = AxisSet::parse("xyz");
    const auto t0 = Clock::now();
    double worst_fid = INFINITY, worst_h = INFINITY;
    for (int i = 0; i < 100000; ++i) {
        const CoeffVector v{u(rng), u(rng), u(rng)};
        CoeffVector d{u(rng), u(rng), u(rng)};
        m.ts = t(rng);
        const double lim = 0.999 * std::numbers::pi / 2 / m.ts;
        if (d.norm() >= lim) d = d * (lim * std::abs(u(rng)) / d.norm());
        const QubitState s = QubitState::normalized(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
        const double f = fidelity_sq(nominal_step(m, v, s), uncertain_step(m, v, d, s));
        worst_fid = std::min(worst_fid, f - success_bound(d.norm(), m.ts));
        worst_h = std::min(worst_h, h_function(v, d, m.ts));
    }
    const double dt = seconds_since(t0);
    report(2, worst_fid >= -1e-10 && worst_h >= -1e-12 && dt < 10.0,
           fmt("min fidelity margin %.3g, min h %.3g, %.2f s", worst_fid, worst_h, dt));
}

void time_optimal() {
    const auto t0 = Clock::now();
    OcpSpec spec;
    const OcpSolution sol = solve_ocp(spec, QubitState::zero(), SolverParams{});
    double tail = 0.0;
    if (sol.lstar != kUnreachable) {
        for (std::size_t l = sol.lstar; l < sol.predicted.states.size(); ++l)
            tail = std::max(tail, trace_distance(sol.predicted.states[l], spec.target));
    }
    const auto grid = oracle::grid_lstar(spec.model.r, spec.bound, spec.model.ts, 21, 5);
    const double dt = seconds_since(t0);
    const bool ok = sol.lstar != kUnreachable && sol.lstar == grid.lstar && tail <= 1e-4 && dt < 120.0;
    report(3, ok, fmt("lstar %d, grid oracle %d, tail distance %.3g, %.2f s", sol.lstar == kUnreachable ? -1 : sol.lstar,
                      grid.lstar, tail, dt));
}

void run_enumeration() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double c : {0.25, 0.5, 0.75, 0.9975}) {
        for (int L = 1; L <= 5; ++L) {
            const auto f = failure_probabilities(c, L, 14);
            for (int N = 1; N <= 14; ++N) worst = std::max(worst, std::abs(f[N - 1] - oracle::no_run_probability(c, L, N)));
        }
    }
    const double dt = seconds_since(t0);
    report(4, worst <= 1e-12 && dt < 30.0, fmt("max error %.3g, %.2f s", worst, dt));
}

void rate_enclosure() {
    const auto t0 = Clock::now();
    double worst = -INFINITY;
    bool case3 = true;
    for (int L = 1; L <= 15; ++L) {
        for (int i = 1; i <= 99; ++i) {
            const double c = i / 100.0;
            worst = std::max(worst, max_root_modulus_excluding_c(c, L) - convergence_rate(c, L).eta);
        }
        const double knee = double(L) / (L + 1);
        const auto r = convergence_rate(knee, L);
        case3 = case3 && r.case_id == 3 && r.eta == knee;
    }
    const double dt = seconds_since(t0);
    report(5, worst <= 1e-9 && case3 && dt < 10.0,
           fmt("worst modulus - eta %.3g, case 3 exact %s, %.2f s", worst, case3 ? "yes" : "no", dt));
}

struct MonteCarlo {
    CompareTable table;
    std::vector<ExperimentResult> results;
};

MonteCarlo monte_carlo(const fs::path &dir) {
    ExperimentConfig base;
    base.trials = 300;
    base.seed = 42;
    MonteCarlo mc;
    mc.table = compare_tables(base, dir.string(), &mc.results);
    return mc;
}

void table_ordering(const MonteCarlo &mc, double dt) {
    bool ok = dt < 1200.0;
    std::string detail;
    for (UncertaintyKind u : {UncertaintyKind::periodic, UncertaintyKind::uniform, UncertaintyKind::truncated_gaussian}) {
        const auto &q = mc.table.at(u, Algorithm::qtompc);
        const auto &t = mc.table.at(u, Algorithm::tompc);
        const auto &g = mc.table.at(u, Algorithm::grape);
        auto lo = [](const SummaryStats &s) { return s.mean - 3.0 * s.stderr_mean; };
        auto hi = [](const SummaryStats &s) { return s.mean + 3.0 * s.stderr_mean; };
        const bool cell = lo(q.infidelity) <= 0.05 && hi(t.infidelity) >= 5.0 * lo(q.infidelity) &&
                          hi(g.infidelity) >= 5.0 * lo(q.infidelity) && lo(q.e_track) <= 0.5 &&
                          hi(t.e_track) > 2.0 && hi(g.e_track) > 2.0 && q.failed_trials == 0;
        ok = ok && cell;
        detail += fmt("%s inf %.3g/%.3g/%.3g E %.3g/%.3g/%.3g; ", uncertainty_kind_name(u), q.infidelity.mean,
                      t.infidelity.mean, g.infidelity.mean, q.e_track.mean, t.e_track.mean, g.e_track.mean);
    }
    detail += fmt("%.1f s", dt);
    report(6, ok, detail);
}

void arrival_bound(const MonteCarlo &mc) {
    const ExperimentResult *run = nullptr;
    for (const auto &r : mc.results)
        if (r.config.uncertainty == UncertaintyKind::uniform && r.config.algorithm == Algorithm::qtompc) run = &r;
    if (!run) {
        report(7, false, "uniform qTOMPC run missing");
        return;
    }
    const double c = success_bound(run->config.uncertainty_model(RngStream()).effective_norm_bound(), run->config.ts);
    const int n = int(run->trials.size());
    double worst = INFINITY;
    int worst_n = 0;
    for (const auto &s : run->series) {
        const int N = s.k + 1;
        const double bound = p_tar_lower_bound(c, run->config.horizon, N);
        const double sigma = std::sqrt(s.at_target * (1.0 - s.at_target) / n);
        const double margin = s.at_target - (bound - 3.0 * sigma);
        if (margin < worst) {
            worst = margin;
            worst_n = N;
        }
    }
    report(7, worst >= 0.0, fmt("worst margin %.4g at N = %d over %zu steps", worst, worst_n, run->series.size()));
}

void determinism(const fs::path &a, const fs::path &b) {
    int files = 0, differing = 0;
    for (const auto &entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        ++files;
        const fs::path other = b / fs::relative(entry.path(), a);
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            ++differing;
            std::printf("  differs: %s\n", fs::relative(entry.path(), a).c_str());
        }
    }
    report(8, files > 0 && differing == 0, fmt("%d CSV files compared, %d differ", files, differing));
}

}  // namespace

int main(int argc, char **argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "qtompc_acceptance";
    fs::remove_all(root);

    guarded(1, propagator_oracle);
    guarded(2, success_floor);
    guarded(3, time_optimal);
    guarded(4, run_enumeration);
    guarded(5, rate_enclosure);

    MonteCarlo first;
    bool have_first = false;
    guarded(6, [&] {
        const auto t0 = Clock::now();
        first = monte_carlo(root / "run1");
        have_first = true;
        table_ordering(first, seconds_since(t0));
    });
    if (have_first) {
        guarded(7, [&] { arrival_bound(first); });
    } else {
        report(7, false, "Monte Carlo run did not complete");
    }
    guarded(8, [&] {
        if (!have_first) throw std::runtime_error("first Monte Carlo run did not complete");
        monte_carlo(root / "run2");
        determinism(root / "run1", root / "run2");
    });

    std::printf("%d of 8 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
