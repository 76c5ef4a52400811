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

#ifndef QTOMPC_GRAPE_HPP
#define QTOMPC_GRAPE_HPP

#include <cstdint>
#include <vector>

#include "qtompc/dynamics.hpp"
#include "qtompc/ocp.hpp"
#include "qtompc/record.hpp"

namespace qtompc {

struct GrapeParams {
    int steps = 100;
    double bound = 0.5;
    int max_iterations = 500;
    double initial_step = 0.1;
    /// Stop once the projected-gradient infinity norm falls below this.
    double tolerance = 1e-9;
    int restarts = 5;
    double fd_step = 1e-6;
    std::uint64_t seed = 11;

    void validate() const;
};

struct GrapeResult {
    ControlSequence controls;
    /// Nominal |<target|U_N...U_1 s0>|^2.
    double fidelity = 0.0;
    int iterations = 0;
    /// False when the best restart stopped on the iteration cap.
    bool converged = false;
};

/// Terminal transfer fidelity of controls on the nominal model.
double grape_fidelity(const NominalModel &model, const QubitState &s0, const QubitState &target,
                      const ControlSequence &controls);

/// Central-difference gradient of grape_fidelity with respect to the active
/// control components, packed step-major.
std::vector<double> grape_gradient(const NominalModel &model, const QubitState &s0, const QubitState &target,
                                   const ControlSequence &controls, double h);

/// Projected gradient ascent with backtracking from params.restarts random
/// starts in [-B/10, B/10]. Deterministic in params.seed.
GrapeResult grape_optimize(const NominalModel &model, const QubitState &s0, const QubitState &target,
                           const GrapeParams &params);

/// Open-loop replay of fixed controls on the uncertain plant. Each step logs
/// the nominal-path state as the prediction and the plant state as the
/// post state, so e_track measures the plant's deviation from the nominal
/// path. Uncertainty for step k comes from stream.child(0).
RunRecord grape_replay(const ControlSequence &controls, const NominalModel &model, const UncertaintyModel &unc,
                       const QubitState &s0, const QubitState &target, const RngStream &stream);

}  // namespace qtompc

#endif
