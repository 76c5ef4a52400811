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

#ifndef QTOMPC_CONFIG_HPP
#define QTOMPC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qtompc/dynamics.hpp"
#include "qtompc/grape.hpp"
#include "qtompc/ocp.hpp"

namespace qtompc {

enum class Algorithm { qtompc, tompc, grape };

const char *algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string &text);

/// Parses "0", "1", "+", "-", "+i", "-i".
QubitState parse_state(const std::string &text);

/// Everything one experiment needs. Frequencies in rad/ns, times in ns.
struct ExperimentConfig {
    Algorithm algorithm = Algorithm::qtompc;

    double r = 0.05;
    double ts = 1.0;
    std::string control_axes = "xy";

    int horizon = 10;
    double theta = 1.9;
    double control_bound = 0.5;
    double terminal_tol = 1e-4;

    UncertaintyKind uncertainty = UncertaintyKind::uniform;
    double uncertainty_bound = 0.05;
    /// Pre-truncation standard deviation; negative means bound / 2.
    double gaussian_stddev = -1.0;
    double omega_min = kPeriodicOmegaMin;
    double omega_max = kPeriodicOmegaMax;

    std::string initial_state = "0";
    std::string target_state = "1";

    int steps = 100;
    int trials = 300;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    /// Worker threads; 0 uses the hardware concurrency.
    int threads = 0;

    int solver_restarts = 4;
    int solver_max_iterations = 300;
    std::uint64_t solver_seed = 7;

    int grape_max_iterations = 500;
    int grape_restarts = 5;
    std::uint64_t grape_seed = 11;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    NominalModel model() const;
    OcpSpec ocp_spec() const;
    SolverParams solver_params() const;
    GrapeParams grape_params() const;
    /// The uncertainty model for one trial; periodic parameters are drawn
    /// from the given stream.
    UncertaintyModel uncertainty_model(const RngStream &trial_stream) const;

    /// Sets one key from its text form. Throws ConfigError on unknown keys
    /// or unparsable values.
    void set(const std::string &key, const std::string &value);
    /// Text form of one key.
    std::string get(const std::string &key) const;

    /// All keys in document order.
    static const std::vector<std::string> &keys();

    /// key = value document with every key, parseable by parse_config.
    std::string to_text() const;
    /// 16 hex digits of FNV-1a over to_text(), excluding out_dir and threads
    /// (neither affects results).
    std::string hash() const;
};

/// key = value lines; '#' starts a comment; blank lines are ignored.
/// Missing keys keep their defaults. Unknown or repeated keys are errors.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

}  // namespace qtompc

#endif
