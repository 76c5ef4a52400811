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

#include "qtompc/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <sstream>

namespace qtompc {

namespace {

constexpr double kTieTol = 1e-9;

std::vector<int> active_axes(const AxisSet &a) {
    std::vector<int> axes;
    for (int i = 0; i < 3; ++i) {
        if (a.contains(i)) axes.push_back(i);
    }
    return axes;
}

double &component(CoeffVector &v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

double energy(const ControlSequence &u) {
    double e = 0.0;
    for (const auto &c : u) e += c.norm_sq();
    return e;
}

struct Amp {
    cplx a0;
    cplx a1;
};

inline Amp mul(const Propagator &u, const Amp &s) {
    return {u(0, 0) * s.a0 + u(0, 1) * s.a1, u(1, 0) * s.a0 + u(1, 1) * s.a1};
}

/// Objective over the first m controls (packed x[l * na + i] = u_l[axes[i]]),
/// with c = <target_perp|psi_m> the terminal residual. c = 0 exactly when
/// psi_m equals the target up to phase, and unlike the trace distance it is
/// smooth there.
///   reach mode: |c|^2
///   cost mode:  sum_{l<m} theta^l D(psi_l) + Re(conj(lambda) c) + rho/2 |c|^2
class HeadObjective {
   public:
    enum class Mode { reach, cost };

    HeadObjective(const OcpSpec &spec, const QubitState &s0, int m, Mode mode)
        : spec_(spec), axes_(active_axes(spec.model.control_axes)), m_(m), mode_(mode), s0_{s0[0], s0[1]},
          t_{spec.target[0], spec.target[1]}, perp_{-std::conj(spec.target[1]), std::conj(spec.target[0])} {
        weights_.resize(static_cast<std::size_t>(m));
        double w = 1.0;
        for (auto &x : weights_) {
            x = w;
            w *= spec.theta;
        }
    }

    int dim() const { return m_ * int(axes_.size()); }
    int axes_per_step() const { return int(axes_.size()); }

    cplx lambda{0.0, 0.0};
    double rho = 1.0;

    Propagator step_propagator(const double *xl) const {
        CoeffVector v{0.0, 0.0, spec_.model.r};
        for (int i = 0; i < axes_per_step(); ++i) component(v, axes_[i]) += xl[i];
        return pauli_exponential(v, spec_.model.ts);
    }

    double distance(const Amp &s) const {
        cplx ov = std::conj(t_.a0) * s.a0 + std::conj(t_.a1) * s.a1;
        return std::sqrt(std::max(0.0, 1.0 - std::norm(ov)));
    }

    cplx residual(const Amp &s) const { return std::conj(perp_.a0) * s.a0 + std::conj(perp_.a1) * s.a1; }

    double terminal_term(const Amp &s) const {
        cplx c = residual(s);
        if (mode_ == Mode::reach) return std::norm(c);
        return lambda.real() * c.real() + lambda.imag() * c.imag() + 0.5 * rho * std::norm(c);
    }

    double stage_term(int l, const Amp &s) const { return mode_ == Mode::cost ? weights_[l] * distance(s) : 0.0; }

    Amp terminal_state(const std::vector<double> &x) const {
        const int na = axes_per_step();
        Amp s = s0_;
        for (int l = 0; l < m_; ++l) s = mul(step_propagator(&x[l * na]), s);
        return s;
    }

    double value(const std::vector<double> &x) const {
        const int na = axes_per_step();
        Amp s = s0_;
        double f = 0.0;
        for (int l = 0; l < m_; ++l) {
            f += stage_term(l, s);
            s = mul(step_propagator(&x[l * na]), s);
        }
        return f + terminal_term(s);
    }

    /// Central differences. Perturbing u_j leaves psi_0..psi_j and their
    /// terms untouched, so only the suffix is re-propagated, reusing the base
    /// propagators past step j.
    double value_and_gradient(const std::vector<double> &x, std::vector<double> &g, double h) const {
        const int na = axes_per_step();
        props_.resize(static_cast<std::size_t>(m_));
        states_.resize(static_cast<std::size_t>(m_) + 1);
        prefix_.resize(static_cast<std::size_t>(m_));
        states_[0] = s0_;
        double acc = 0.0;
        for (int l = 0; l < m_; ++l) {
            acc += stage_term(l, states_[l]);
            prefix_[l] = acc;
            props_[l] = step_propagator(&x[l * na]);
            states_[l + 1] = mul(props_[l], states_[l]);
        }
        const double f = acc + terminal_term(states_[m_]);

        g.assign(static_cast<std::size_t>(dim()), 0.0);
        double xl[3];
        for (int j = 0; j < m_; ++j) {
            for (int i = 0; i < na; ++i) {
                std::copy(x.begin() + j * na, x.begin() + (j + 1) * na, xl);
                xl[i] = x[j * na + i] + h;
                double fp = suffix(j, mul(step_propagator(xl), states_[j]));
                xl[i] = x[j * na + i] - h;
                double fm = suffix(j, mul(step_propagator(xl), states_[j]));
                g[j * na + i] = (fp - fm) / (2.0 * h);
            }
        }
        return f;
    }

   private:
    /// Terms l > j given psi_{j+1}; the prefix through l = j is unchanged.
    double suffix(int j, Amp s) const {
        double f = prefix_[j];
        for (int l = j + 1; l < m_; ++l) {
            f += stage_term(l, s);
            s = mul(props_[l], s);
        }
        return f + terminal_term(s);
    }

    const OcpSpec &spec_;
    std::vector<int> axes_;
    int m_;
    Mode mode_;
    Amp s0_;
    Amp t_;
    Amp perp_;
    std::vector<double> weights_;
    mutable std::vector<Propagator> props_;
    mutable std::vector<Amp> states_;
    mutable std::vector<double> prefix_;
};

/// Spectral projected gradient (Barzilai-Borwein step, nonmonotone Armijo
/// search) on the box [-bound, bound]^n.
void spg_minimize(const HeadObjective &obj, std::vector<double> &x, double bound, int max_iter, double initial_step,
                  double fd_step) {
    const std::size_t n = x.size();
    auto project = [bound](double v) { return std::clamp(v, -bound, bound); };
    for (auto &v : x) v = project(v);

    constexpr int kMemory = 8;
    constexpr double kArmijo = 1e-4;
    constexpr double kMinStep = 1e-12;
    constexpr double kMaxStep = 1e4;

    std::vector<double> g, g_new, d(n), x_new(n);
    double f = obj.value_and_gradient(x, g, fd_step);
    std::deque<double> history{f};
    double alpha = initial_step;

    for (int it = 0; it < max_iter; ++it) {
        double dmax = 0.0, gd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = project(x[i] - alpha * g[i]) - x[i];
            dmax = std::max(dmax, std::abs(d[i]));
            gd += g[i] * d[i];
        }
        if (dmax < 1e-13 || gd >= 0.0) break;

        const double f_ref = *std::max_element(history.begin(), history.end());
        double t = 1.0;
        double f_new = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = project(x[i] + t * d[i]);
            f_new = obj.value(x_new);
            if (f_new <= f_ref + kArmijo * t * gd) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        obj.value_and_gradient(x_new, g_new, fd_step);
        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = x_new[i] - x[i];
            ss += s * s;
            sy += s * (g_new[i] - g[i]);
        }
        alpha = sy > 0.0 ? std::clamp(ss / sy, kMinStep, kMaxStep) : kMaxStep;
        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        history.push_back(f);
        if (history.size() > kMemory) history.pop_front();
    }
}

struct Candidate {
    ControlSequence controls;
    double cost = 0.0;
    double violation = 0.0;
    double energy = 0.0;
};

bool better(const Candidate &a, const Candidate &b, double tol) {
    bool fa = a.violation <= tol, fb = b.violation <= tol;
    if (fa != fb) return fa;
    if (!fa) return a.violation < b.violation;
    if (std::abs(a.cost - b.cost) <= kTieTol) return a.energy < b.energy;
    return a.cost < b.cost;
}

class Packing {
   public:
    explicit Packing(const OcpSpec &spec) : axes_(active_axes(spec.model.control_axes)), horizon_(spec.horizon) {}

    int na() const { return int(axes_.size()); }

    /// Controls past the packed prefix are zero.
    ControlSequence unpack(const std::vector<double> &x) const {
        ControlSequence u(static_cast<std::size_t>(horizon_));
        for (std::size_t k = 0; k < x.size(); ++k) component(u[k / na()], axes_[k % na()]) = x[k];
        return u;
    }

    std::vector<double> pack(const ControlSequence &u, int m) const {
        std::vector<double> x(static_cast<std::size_t>(m * na()), 0.0);
        for (int l = 0; l < m && l < int(u.size()); ++l) {
            CoeffVector c = u[l];
            for (int i = 0; i < na(); ++i) x[l * na() + i] = component(c, axes_[i]);
        }
        return x;
    }

   private:
    std::vector<int> axes_;
    int horizon_;
};

Candidate make_candidate(const OcpSpec &spec, const QubitState &s0, ControlSequence u, double tol) {
    Candidate c;
    auto sol = evaluate_solution(spec, s0, std::move(u), tol);
    c.cost = sol.cost;
    c.violation = sol.terminal_violation;
    c.energy = energy(sol.controls);
    c.controls = std::move(sol.controls);
    return c;
}

/// Augmented-Lagrangian rounds on the cost-mode objective with psi_m pinned
/// to the target. Penalty doubles each round until |c| <= tol.
std::vector<double> constrained_head_solve(const OcpSpec &spec, const QubitState &s0, const SolverParams &params,
                                           int m, std::vector<double> x) {
    HeadObjective obj(spec, s0, m, HeadObjective::Mode::cost);
    obj.rho = params.penalty_init;
    for (int round = 0; round < params.max_penalty_rounds; ++round) {
        spg_minimize(obj, x, spec.bound, params.max_iterations, params.initial_step, params.fd_step);
        cplx c = obj.residual(obj.terminal_state(x));
        if (std::abs(c) <= params.terminal_tol * 1e-2) break;
        obj.lambda += obj.rho * c;
        obj.rho *= params.penalty_growth;
    }
    return x;
}

}  // namespace

void OcpSpec::validate() const {
    if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
    if (!(theta > 1.0) || !std::isfinite(theta)) throw InvalidArgument("theta must exceed 1");
    if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidArgument("control bound must be positive");
    model.validate();
}

void SolverParams::validate() const {
    if (restarts < 0) throw InvalidArgument("restarts must be nonnegative");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
    if (!(terminal_tol > 0.0)) throw InvalidArgument("terminal tolerance must be positive");
    if (!(penalty_init > 0.0) || !(penalty_growth >= 1.0)) throw InvalidArgument("bad penalty schedule");
    if (max_penalty_rounds < 1) throw InvalidArgument("max_penalty_rounds must be positive");
    if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
    if (!(initial_step > 0.0)) throw InvalidArgument("initial_step must be positive");
}

void check_feasible(const OcpSpec &spec, const ControlSequence &u) {
    if (int(u.size()) != spec.horizon) {
        throw InvalidArgument("control sequence length does not match the horizon");
    }
    const auto &axes = spec.model.control_axes;
    for (const auto &c : u) {
        if (!c.is_finite()) throw InvalidArgument("control is not finite");
        if ((!axes.x && c.x != 0.0) || (!axes.y && c.y != 0.0) || (!axes.z && c.z != 0.0)) {
            throw InvalidArgument("control uses an inactive axis");
        }
        if (std::abs(c.x) > spec.bound || std::abs(c.y) > spec.bound || std::abs(c.z) > spec.bound) {
            throw InvalidArgument("control exceeds the amplitude bound");
        }
    }
}

double cost_jl(const OcpSpec &spec, const QubitState &s0, const ControlSequence &u) {
    spec.validate();
    check_feasible(spec, u);
    double cost = 0.0;
    double w = 1.0;
    QubitState s = s0;
    for (int l = 0; l < spec.horizon; ++l) {
        cost += w * trace_distance(s, spec.target);
        s = nominal_step(spec.model, u[l], s);
        w *= spec.theta;
    }
    return cost;
}

OcpSolution evaluate_solution(const OcpSpec &spec, const QubitState &s0, ControlSequence u, double terminal_tol) {
    OcpSolution sol;
    sol.cost = cost_jl(spec, s0, u);
    sol.predicted = propagate_nominal(spec.model, s0, u);
    sol.controls = std::move(u);
    sol.terminal_violation = trace_distance(sol.predicted.states.back(), spec.target);
    for (std::size_t l = 0; l < sol.predicted.states.size(); ++l) {
        if (trace_distance(sol.predicted.states[l], spec.target) <= terminal_tol) {
            sol.lstar = int(l);
            break;
        }
    }
    return sol;
}

ControlSequence shift_controls(const ControlSequence &u) {
    if (u.empty()) return u;
    ControlSequence out(u.begin() + 1, u.end());
    out.push_back(CoeffVector{});
    return out;
}

OcpSolution solve_ocp(const OcpSpec &spec, const QubitState &s0, const SolverParams &params,
                      const ControlSequence *warm_start) {
    spec.validate();
    params.validate();
    if (warm_start) check_feasible(spec, *warm_start);
    const QubitState start = s0.canonical();
    const double tol = params.terminal_tol;
    const int L = spec.horizon;

    // Fixed point: already at the target and holding it with zero controls.
    if (trace_distance(start, spec.target) <= tol) {
        auto zero = evaluate_solution(spec, s0, ControlSequence(static_cast<std::size_t>(L)), tol);
        bool holds = true;
        for (const auto &s : zero.predicted.states) holds = holds && trace_distance(s, spec.target) <= tol;
        if (holds) return zero;
    }

    const Packing packing(spec);
    const RngStream stream(params.seed);
    // Starts for m steps drawn from child stream `tag` (m unless noted).
    auto random_start = [&](int m, int r, int tag) {
        auto rng = stream.child(std::uint64_t(tag)).at(std::uint64_t(r));
        std::uniform_real_distribution<double> dist(-spec.bound, spec.bound);
        std::vector<double> x(static_cast<std::size_t>(m * packing.na()));
        for (auto &v : x) v = dist(rng);
        return x;
    };

    // Phase 1: smallest m at which psi_m can be steered onto the target
    // (time-optimal reachability). Every start that reaches seeds phase 2.
    const double reach_tol = 0.1 * tol;
    int hit = 0;
    std::vector<std::vector<double>> seeds;
    for (int m = 1; m <= L && seeds.empty(); ++m) {
        HeadObjective reach(spec, start, m, HeadObjective::Mode::reach);
        std::vector<std::vector<double>> inits;
        if (warm_start) inits.push_back(packing.pack(*warm_start, m));
        for (int r = 0; r < params.restarts; ++r) inits.push_back(random_start(m, r, m));
        for (auto &x : inits) {
            spg_minimize(reach, x, spec.bound, params.max_iterations, params.initial_step, params.fd_step);
            if (std::sqrt(reach.value(x)) <= reach_tol) seeds.push_back(std::move(x));
        }
        hit = m;
    }

    std::optional<Candidate> best;
    auto consider = [&](ControlSequence u) {
        Candidate c = make_candidate(spec, start, std::move(u), tol);
        if (!best || better(c, *best, tol)) best = std::move(c);
    };

    // Phase 2: for each first-hit step m >= hit, minimize the stage cost with
    // psi_m pinned to the target and zero controls afterwards. m = L is the
    // unrestricted problem.
    for (const auto &seed : seeds) {
        for (int m = hit; m <= L; ++m) {
            auto x0 = packing.pack(packing.unpack(seed), m);
            consider(packing.unpack(constrained_head_solve(spec, start, params, m, std::move(x0))));
        }
    }
    if (seeds.empty()) {
        for (int r = 0; r < std::max(1, params.restarts); ++r) {
            consider(packing.unpack(constrained_head_solve(spec, start, params, L, random_start(L, r, L + 1))));
        }
    }

    OcpSolution sol = evaluate_solution(spec, s0, best->controls, tol);
    if (best->violation > tol) {
        std::ostringstream msg;
        msg << "solve_ocp: terminal violation " << best->violation << " exceeds tolerance " << tol;
        throw SolverFailure(msg.str(), std::move(sol));
    }
    return sol;
}

OcpSolver::OcpSolver(OcpSpec spec, SolverParams params) : spec_(std::move(spec)), params_(params) {
    spec_.validate();
    params_.validate();
}

OcpSolution OcpSolver::solve(const QubitState &s0, const ControlSequence *warm_start) const {
    Key key;
    auto push = [&key](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        key.push_back(bits);
    };
    QubitState c = s0.canonical();
    push(c[0].real());
    push(c[0].imag());
    push(c[1].real());
    push(c[1].imag());
    if (warm_start) {
        key.push_back(1);
        for (const auto &u : *warm_start) {
            push(u.x);
            push(u.y);
            push(u.z);
        }
    }
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            ++hits_;
            auto sol = evaluate_solution(spec_, s0, it->second.controls, params_.terminal_tol);
            if (!it->second.feasible) throw SolverFailure("solve_ocp: cached infeasible solve", std::move(sol));
            return sol;
        }
    }
    Entry entry;
    OcpSolution sol;
    try {
        sol = solve_ocp(spec_, s0, params_, warm_start);
        entry.controls = sol.controls;
    } catch (const SolverFailure &e) {
        entry.controls = e.best().controls;
        entry.feasible = false;
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(std::move(key), std::move(entry));
        throw;
    }
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(std::move(key), std::move(entry));
    return sol;
}

std::size_t OcpSolver::cache_hits() const {
    std::lock_guard<std::mutex> lock(mu_);
    return hits_;
}

std::size_t OcpSolver::cache_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
}

RunRecord tompc_closed_loop(const OcpSolver &solver, const QubitState &s0, int total_steps) {
    if (total_steps < 1) throw InvalidArgument("total steps must be at least 1");
    const OcpSpec &spec = solver.spec();
    RunRecord rec;
    rec.initial = s0;
    rec.target = spec.target;
    QubitState s = s0;
    ControlSequence warm;
    double etrack = 0.0;
    for (int k = 0; k < total_steps; ++k) {
        OcpSolution sol = solver.solve(s, warm.empty() ? nullptr : &warm);
        StepRecord st;
        st.k = k;
        st.control = sol.controls.front();
        st.predicted = nominal_step(spec.model, st.control, s);
        st.plant = st.predicted;
        st.p_success = 1.0;
        st.outcome = Outcome::none;
        st.post = st.predicted;
        st.fid_target = fidelity_sq(st.post, spec.target);
        st.etrack_cum = etrack;
        st.lstar = sol.lstar;
        rec.steps.push_back(st);
        s = st.post;
        warm = shift_controls(sol.controls);
    }
    return rec;
}

}  // namespace qtompc
