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

#ifndef QTOMPC_QMPC_HPP
#define QTOMPC_QMPC_HPP

#include "qtompc/dynamics.hpp"
#include "qtompc/ocp.hpp"
#include "qtompc/record.hpp"

namespace qtompc {

struct MeasurementOutcome {
    bool success = true;
    /// Probability of the success outcome, |<reference|plant>|^2.
    double probability = 1.0;
    QubitState post_state{};
};

/// Binary projective measurement {|ref><ref|, I - |ref><ref|} on plant.
/// draw is a uniform variate in [0, 1); the outcome is success iff
/// draw < p. The failure post-state is the normalized projection onto the
/// orthogonal complement of ref. Throws DegenerateMeasurement when failure is
/// drawn but p > 1 - 1e-12.
MeasurementOutcome povm_measure(const QubitState &reference, const QubitState &plant, double draw);

/// Same, drawing the variate from rng.
MeasurementOutcome povm_measure(const QubitState &reference, const QubitState &plant, std::mt19937_64 &rng);

/// Closed-loop run with measurement feedback for total_steps steps. At each
/// step: solve from the current state (warm start: shifted previous plan),
/// apply the first control to the plant under a sampled uncertainty, measure
/// against the nominal one-step prediction, continue from the
/// post-measurement state.
///
/// Uncertainty for step k comes from stream.child(0), measurement variates
/// from stream.child(1). A solver failure stops the run and returns the
/// partial record with truncated set. A violated success-floor hypothesis
/// (ts * effective bound >= pi/2) only sets warning.
RunRecord qmpc_run(const OcpSolver &solver, const UncertaintyModel &unc, const QubitState &s0, int total_steps,
                   const RngStream &stream);

/// Sum over steps of D(predicted, post)^2.
double e_track(const RunRecord &record);

/// 1 - |<target|final>|^2 for the final post-measurement state.
double infidelity(const RunRecord &record);

}  // namespace qtompc

#endif
