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

#ifndef QTOMPC_OCP_HPP
#define QTOMPC_OCP_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qtompc/dynamics.hpp"
#include "qtompc/error.hpp"
#include "qtompc/qubit.hpp"
#include "qtompc/record.hpp"

namespace qtompc {

using ControlSequence = std::vector<CoeffVector>;

/// Finite-horizon problem: minimize sum_{l<L} theta^l * D(psi_l, target)
/// subject to the nominal dynamics, |u_l| <= B componentwise, and
/// psi_L = target.
struct OcpSpec {
    int horizon = 10;
    double theta = 1.9;
    double bound = 0.5;
    NominalModel model{};
    QubitState target = QubitState::one();

    void validate() const;
};

struct SolverParams {
    /// Random starting points in addition to the warm start (if any).
    int restarts = 4;
    /// Inner projected-gradient iterations per penalty round.
    int max_iterations = 300;
    double initial_step = 0.05;
    /// Trace-distance tolerance on the terminal constraint.
    double terminal_tol = 1e-4;
    double penalty_init = 1.0;
    double penalty_growth = 2.0;
    int max_penalty_rounds = 10;
    /// Central-difference step, rad/ns.
    double fd_step = 1e-6;
    std::uint64_t seed = 7;

    void validate() const;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

struct OcpSolution {
    ControlSequence controls;
    double cost = 0.0;
    Trajectory predicted;
    /// First l with D(predicted_l, target) <= terminal_tol, or kUnreachable.
    int lstar = kUnreachable;
    double terminal_violation = 0.0;
};

class SolverFailure : public Error {
   public:
    SolverFailure(const std::string &what, OcpSolution best)
        : Error(ErrorCode::solver_failure, what), best_(std::move(best)) {}
    const OcpSolution &best() const { return best_; }

   private:
    OcpSolution best_;
};

/// sum_{l=0}^{L-1} theta^l * D(psi_l, target) along the nominal rollout.
double cost_jl(const OcpSpec &spec, const QubitState &s0, const ControlSequence &u);

/// Validates u against the horizon, bound, and control axes.
void check_feasible(const OcpSpec &spec, const ControlSequence &u);

/// Fills cost, trajectory, lstar and terminal violation for given controls.
OcpSolution evaluate_solution(const OcpSpec &spec, const QubitState &s0, ControlSequence u, double terminal_tol);

/// Multi-start projected gradient with an augmented-Lagrangian terminal
/// constraint. Deterministic in (spec, canonical s0, params, warm_start).
/// Throws SolverFailure (carrying the best candidate) when no start meets
/// terminal_tol.
OcpSolution solve_ocp(const OcpSpec &spec, const QubitState &s0, const SolverParams &params,
                      const ControlSequence *warm_start = nullptr);

/// Receding-horizon shift: drop the first control, append a zero.
ControlSequence shift_controls(const ControlSequence &u);

/// solve_ocp with a thread-safe memo keyed on the bit pattern of the
/// canonical initial state and the warm start. Since solve_ocp is pure, a hit
/// returns exactly what a fresh solve would.
class OcpSolver {
   public:
    OcpSolver(OcpSpec spec, SolverParams params);

    const OcpSpec &spec() const { return spec_; }
    const SolverParams &params() const { return params_; }

    OcpSolution solve(const QubitState &s0, const ControlSequence *warm_start = nullptr) const;

    std::size_t cache_hits() const;
    std::size_t cache_size() const;

   private:
    struct Entry {
        ControlSequence controls;
        bool feasible = true;
    };
    using Key = std::vector<std::uint64_t>;

    OcpSpec spec_;
    SolverParams params_;
    mutable std::mutex mu_;
    mutable std::map<Key, Entry> memo_;
    mutable std::size_t hits_ = 0;
};

/// Nominal receding-horizon loop (no plant, no measurement): apply u*_0
/// through nominal_step and re-solve from the prediction, warm-starting from
/// the shifted plan. Records the per-step OCP lstar.
RunRecord tompc_closed_loop(const OcpSolver &solver, const QubitState &s0, int total_steps);

}  // namespace qtompc

#endif
