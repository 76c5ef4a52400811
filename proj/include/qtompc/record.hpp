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

#ifndef QTOMPC_RECORD_HPP
#define QTOMPC_RECORD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qtompc/qubit.hpp"

namespace qtompc {

/// none: no measurement was made (nominal or open-loop runs).
enum class Outcome { success, failure, none };

const char *outcome_name(Outcome o);

/// One step k of a run.
struct StepRecord {
    int k = 0;
    /// Control applied over [k ts, (k+1) ts].
    CoeffVector control{};
    /// Nominal one-step prediction psi_{1|k}.
    QubitState predicted{};
    /// Plant state psi_{k+1} before any measurement.
    QubitState plant{};
    /// |<predicted|plant>|^2, the probability of the success outcome.
    double p_success = 1.0;
    Outcome outcome = Outcome::none;
    /// State carried into step k+1 (post-measurement state for closed loops).
    QubitState post{};
    /// |<target|post>|^2.
    double fid_target = 0.0;
    /// Running sum of D(predicted, post)^2 through this step.
    double etrack_cum = 0.0;
    /// Time-optimal step count of the OCP solved at this step, or -1 when the
    /// run did not solve one.
    int lstar = -1;
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::string config_hash;
    QubitState initial{};
    QubitState target = QubitState::one();
    std::vector<StepRecord> steps;
    /// Set when the run stopped early on a solver failure.
    bool truncated = false;
    std::string error;
    /// Non-fatal diagnostics, e.g. a violated robustness hypothesis.
    std::string warning;

    /// State after the last step (the initial state if no step ran).
    const QubitState &final_state() const { return steps.empty() ? initial : steps.back().post; }
};

}  // namespace qtompc

#endif
