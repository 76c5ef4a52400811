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

#include "qtompc/grape.hpp"

#include <algorithm>
#include <cmath>

namespace qtompc {

namespace {

std::vector<int> active_axes(const AxisSet &a) {
    std::vector<int> axes;
    for (int i = 0; i < 3; ++i) {
        if (a.contains(i)) axes.push_back(i);
    }
    return axes;
}

double &component(CoeffVector &v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

/// Forward states psi_0..psi_N and co-states chi_j = U_{j+1}^dag ... U_N^dag
/// target, so that the fidelity with step j replaced by V is
/// |<chi_{j+1}| V |psi_j>|^2.
struct Sweep {
    std::vector<QubitState> forward;
    std::vector<QubitState> backward;

    Sweep(const NominalModel &model, const QubitState &s0, const QubitState &target, const ControlSequence &u) {
        const std::size_t n = u.size();
        std::vector<Propagator> props;
        props.reserve(n);
        for (const auto &c : u) props.push_back(pauli_exponential(model.generator(c), model.ts));
        forward.reserve(n + 1);
        forward.push_back(s0);
        for (const auto &p : props) forward.push_back(apply(p, forward.back()));
        backward.assign(n + 1, target);
        for (std::size_t j = n; j-- > 0;) backward[j] = apply(props[j].adjoint(), backward[j + 1]);
    }
};

double replaced_fidelity(const NominalModel &model, const Sweep &sw, std::size_t j, const CoeffVector &c) {
    QubitState s = apply(pauli_exponential(model.generator(c), model.ts), sw.forward[j]);
    return std::norm(inner(sw.backward[j + 1], s));
}

std::vector<double> gradient_impl(const NominalModel &model, const QubitState &s0, const QubitState &target,
                                  const ControlSequence &u, const std::vector<int> &axes, double h) {
    Sweep sw(model, s0, target, u);
    std::vector<double> g(u.size() * axes.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        for (std::size_t i = 0; i < axes.size(); ++i) {
            CoeffVector c = u[j];
            double &x = component(c, axes[i]);
            const double x0 = x;
            x = x0 + h;
            double fp = replaced_fidelity(model, sw, j, c);
            x = x0 - h;
            double fm = replaced_fidelity(model, sw, j, c);
            g[j * axes.size() + i] = (fp - fm) / (2.0 * h);
        }
    }
    return g;
}

}  // namespace

void GrapeParams::validate() const {
    if (steps < 1) throw InvalidArgument("GRAPE needs at least one step");
    if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidArgument("GRAPE bound must be positive");
    if (max_iterations < 0) throw InvalidArgument("max_iterations must be nonnegative");
    if (!(initial_step > 0.0)) throw InvalidArgument("initial_step must be positive");
    if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
    if (restarts < 1) throw InvalidArgument("GRAPE needs at least one restart");
    if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
}

double grape_fidelity(const NominalModel &model, const QubitState &s0, const QubitState &target,
                      const ControlSequence &controls) {
    QubitState s = s0;
    for (const auto &c : controls) s = nominal_step(model, c, s);
    return fidelity_sq(s, target);
}

std::vector<double> grape_gradient(const NominalModel &model, const QubitState &s0, const QubitState &target,
                                   const ControlSequence &controls, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    return gradient_impl(model, s0, target, controls, active_axes(model.control_axes), h);
}

GrapeResult grape_optimize(const NominalModel &model, const QubitState &s0, const QubitState &target,
                           const GrapeParams &params) {
    model.validate();
    params.validate();
    const auto axes = active_axes(model.control_axes);
    const std::size_t na = axes.size();
    const double b = params.bound;
    auto project = [b](double v) { return std::clamp(v, -b, b); };

    auto unpack = [&](const std::vector<double> &x) {
        ControlSequence u(x.size() / na);
        for (std::size_t k = 0; k < x.size(); ++k) component(u[k / na], axes[k % na]) = x[k];
        return u;
    };

    GrapeResult best;
    bool have_best = false;
    const RngStream stream(params.seed);
    for (int r = 0; r < params.restarts; ++r) {
        auto rng = stream.at(std::uint64_t(r));
        std::uniform_real_distribution<double> init(-b / 10.0, b / 10.0);
        std::vector<double> x(static_cast<std::size_t>(params.steps) * na);
        for (auto &v : x) v = init(rng);

        ControlSequence u = unpack(x);
        double f = grape_fidelity(model, s0, target, u);
        std::vector<double> g = gradient_impl(model, s0, target, u, axes, params.fd_step);
        double alpha = params.initial_step;
        bool converged = false;
        int it = 0;
        std::vector<double> x_new(x.size()), g_new;
        for (; it < params.max_iterations; ++it) {
            double pg = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) pg = std::max(pg, std::abs(project(x[i] + g[i]) - x[i]));
            if (pg < params.tolerance) {
                converged = true;
                break;
            }
            // Backtrack until the fidelity does not decrease.
            bool accepted = false;
            double f_new = f;
            double t = alpha;
            for (int ls = 0; ls < 50; ++ls) {
                for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = project(x[i] + t * g[i]);
                f_new = grape_fidelity(model, s0, target, unpack(x_new));
                if (f_new >= f) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) {
                converged = true;
                break;
            }
            g_new = gradient_impl(model, s0, target, unpack(x_new), axes, params.fd_step);
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double s = x_new[i] - x[i];
                ss += s * s;
                sy -= s * (g_new[i] - g[i]);
            }
            alpha = sy > 0.0 ? std::clamp(ss / sy, 1e-8, 1e4) : params.initial_step;
            x.swap(x_new);
            g.swap(g_new);
            f = f_new;
        }
        if (!have_best || f > best.fidelity) {
            best.controls = unpack(x);
            best.fidelity = f;
            best.iterations = it;
            best.converged = converged;
            have_best = true;
        }
    }
    return best;
}

RunRecord grape_replay(const ControlSequence &controls, const NominalModel &model, const UncertaintyModel &unc,
                       const QubitState &s0, const QubitState &target, const RngStream &stream) {
    model.validate();
    unc.validate();
    RunRecord rec;
    rec.initial = s0;
    rec.target = target;
    const RngStream noise = stream.child(0);
    QubitState nominal = s0;
    QubitState plant = s0;
    double etrack = 0.0;
    for (std::size_t k = 0; k < controls.size(); ++k) {
        StepRecord st;
        st.k = int(k);
        st.control = controls[k];
        const CoeffVector delta = sample_uncertainty(unc, int(k), model.ts, noise);
        nominal = nominal_step(model, st.control, nominal);
        plant = uncertain_step(model, st.control, delta, plant);
        st.predicted = nominal;
        st.plant = plant;
        st.p_success = fidelity_sq(nominal, plant);
        st.outcome = Outcome::none;
        st.post = plant;
        const double d = trace_distance(nominal, plant);
        etrack += d * d;
        st.etrack_cum = etrack;
        st.fid_target = fidelity_sq(plant, target);
        rec.steps.push_back(st);
    }
    return rec;
}

}  // namespace qtompc
