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

#include "qtompc/qmpc.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qtompc {

const char *outcome_name(Outcome o) {
    switch (o) {
        case Outcome::success:
            return "success";
        case Outcome::failure:
            return "failure";
        case Outcome::none:
            return "none";
    }
    return "unknown";
}

MeasurementOutcome povm_measure(const QubitState &reference, const QubitState &plant, double draw) {
    if (!(draw >= 0.0 && draw < 1.0)) throw InvalidArgument("measurement variate must lie in [0, 1)");
    MeasurementOutcome out;
    const cplx ov = inner(reference, plant);
    out.probability = std::min(1.0, std::norm(ov));
    if (draw < out.probability) {
        out.success = true;
        out.post_state = reference;
        return out;
    }
    if (out.probability > 1.0 - 1e-12) {
        throw DegenerateMeasurement("failure outcome drawn with success probability within 1e-12 of 1");
    }
    out.success = false;
    // (I - |ref><ref|) |plant>
    out.post_state = QubitState::normalized(plant[0] - ov * reference[0], plant[1] - ov * reference[1]);
    return out;
}

MeasurementOutcome povm_measure(const QubitState &reference, const QubitState &plant, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return povm_measure(reference, plant, u(rng));
}

RunRecord qmpc_run(const OcpSolver &solver, const UncertaintyModel &unc, const QubitState &s0, int total_steps,
                   const RngStream &stream) {
    if (total_steps < 1) throw InvalidArgument("total steps must be at least 1");
    unc.validate();
    const OcpSpec &spec = solver.spec();
    const NominalModel &model = spec.model;

    RunRecord rec;
    rec.initial = s0;
    rec.target = spec.target;
    if (unc.effective_norm_bound() * model.ts >= std::numbers::pi / 2.0) {
        std::ostringstream msg;
        msg << "ts * effective uncertainty bound = " << unc.effective_norm_bound() * model.ts
            << " >= pi/2; the per-step success floor does not hold";
        rec.warning = msg.str();
    }

    const RngStream noise = stream.child(0);
    const RngStream meas = stream.child(1);
    QubitState s = s0;
    ControlSequence warm;
    double etrack = 0.0;
    for (int k = 0; k < total_steps; ++k) {
        OcpSolution sol;
        try {
            sol = solver.solve(s, warm.empty() ? nullptr : &warm);
        } catch (const SolverFailure &e) {
            rec.truncated = true;
            rec.error = e.what();
            return rec;
        }
        StepRecord st;
        st.k = k;
        st.control = sol.controls.front();
        st.lstar = sol.lstar;
        st.predicted = nominal_step(model, st.control, s);
        const CoeffVector delta = sample_uncertainty(unc, k, model.ts, noise);
        st.plant = uncertain_step(model, st.control, delta, s);

        auto rng = meas.at(std::uint64_t(k));
        MeasurementOutcome m;
        try {
            m = povm_measure(st.predicted, st.plant, rng);
        } catch (const DegenerateMeasurement &) {
            m.success = true;
            m.probability = std::min(1.0, fidelity_sq(st.predicted, st.plant));
            m.post_state = st.predicted;
        }
        st.p_success = m.probability;
        st.outcome = m.success ? Outcome::success : Outcome::failure;
        st.post = m.post_state;
        const double d = trace_distance(st.predicted, st.post);
        etrack += d * d;
        st.etrack_cum = etrack;
        st.fid_target = fidelity_sq(st.post, spec.target);
        rec.steps.push_back(st);

        s = st.post;
        warm = shift_controls(sol.controls);
    }
    return rec;
}

double e_track(const RunRecord &record) {
    double e = 0.0;
    for (const auto &st : record.steps) {
        const double d = trace_distance(st.predicted, st.post);
        e += d * d;
    }
    return e;
}

double infidelity(const RunRecord &record) { return 1.0 - fidelity_sq(record.final_state(), record.target); }

}  // namespace qtompc
