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

#ifndef QTOMPC_HARNESS_HPP
#define QTOMPC_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qtompc/config.hpp"
#include "qtompc/record.hpp"

namespace qtompc {

struct SummaryStats {
    double mean = 0.0;
    double median = 0.0;
    /// Q3 - Q1 with linearly interpolated quartiles.
    double iqr = 0.0;
    /// Sample standard deviation over sqrt(n); 0 for n < 2.
    double stderr_mean = 0.0;
    int n = 0;
};

/// Quantile q of sorted values, interpolating linearly between order
/// statistics.
double quantile_sorted(const std::vector<double> &sorted, double q);
SummaryStats summarize(std::vector<double> values);

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    RunRecord record;
    double e_track = 0.0;
    double infidelity = 0.0;
    /// First step index k whose post state has fidelity >= 1 - 1e-3 with
    /// the target, or -1.
    int first_reach = -1;
};

/// Per-step cross-trial aggregates.
struct StepSeries {
    int k = 0;
    SummaryStats fid_target;
    SummaryStats etrack_cum;
    /// Fraction of trials whose measurement at step k succeeded (1 for
    /// runs without measurement).
    double success_frequency = 1.0;
    /// Smallest success probability seen at step k.
    double min_p_success = 1.0;
    /// Fraction of trials with fidelity >= 1 - 1e-3 at step k.
    double at_target = 0.0;
    /// Fraction of trials that have had fidelity >= 1 - 1e-3 at some
    /// step <= k.
    double reached = 0.0;
};

struct BoundCheck {
    /// cos^2(effective bound * ts), or NaN when the hypothesis fails.
    double floor = 1.0;
    bool applicable = false;
    /// Worst over steps of success_frequency - (floor - 3 sigma).
    double worst_margin = 0.0;
    bool pass = true;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    std::vector<StepSeries> series;
    SummaryStats e_track;
    SummaryStats infidelity;
    SummaryStats final_fidelity;
    BoundCheck bound_check;
    int failed_trials = 0;
    /// Non-fatal diagnostics (GRAPE non-convergence, violated hypotheses).
    std::vector<std::string> warnings;
};

/// Fidelity threshold used for "at target".
inline constexpr double kAtTargetFidelity = 1.0 - 1e-3;

/// Runs config.trials seeded trials of the configured algorithm. Trial i uses
/// seed split_seed(config.seed, i); results are in trial order.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Writes steps.csv, trials.csv, series.csv and summary.json into dir
/// (created if missing).
void write_experiment(const ExperimentResult &result, const std::string &dir);

struct CompareCell {
    UncertaintyKind uncertainty = UncertaintyKind::none;
    Algorithm algorithm = Algorithm::qtompc;
    SummaryStats e_track;
    SummaryStats infidelity;
    int failed_trials = 0;
};

struct CompareTable {
    std::vector<CompareCell> cells;

    const CompareCell &at(UncertaintyKind u, Algorithm a) const;
};

/// Row order of the comparison grid.
const std::vector<UncertaintyKind> &compare_rows();
const std::vector<Algorithm> &compare_columns();

/// Runs every (uncertainty, algorithm) cell of the grid from base, writing
/// each cell's experiment under out_dir/<uncertainty>_<algorithm>/ and the
/// tables as compare.csv, compare.json and compare.txt. The "none" row is
/// appended after the three uncertainty rows.
CompareTable compare_tables(const ExperimentConfig &base, const std::string &out_dir,
                            std::vector<ExperimentResult> *results = nullptr);

/// Convergence-rate grid plus a probability-of-arrival comparison for the
/// configured experiment (run as qtompc). Writes rates.csv, arrival.csv and
/// bounds.json; returns true when every arrival row meets its bound.
bool emit_bounds_report(const ExperimentConfig &config, const std::string &out_dir);

/// Nominal receding-horizon run from the configured initial state, logging
/// the per-step fidelity and time-optimal step count to lstar.csv.
RunRecord lstar_study(const ExperimentConfig &config, const std::string &out_dir);

}  // namespace qtompc

#endif
