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

#include "qtompc/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qtompc/error.hpp"

namespace qtompc {

AxisSet AxisSet::parse(const std::string &text) {
    AxisSet a{false, false, false};
    for (char c : text) {
        switch (c) {
            case 'x':
                a.x = true;
                break;
            case 'y':
                a.y = true;
                break;
            case 'z':
                a.z = true;
                break;
            default:
                throw InvalidArgument("unknown control axis '" + std::string(1, c) + "'");
        }
    }
    if (a.count() == 0) {
        throw InvalidArgument("control axis set is empty");
    }
    return a;
}

std::string AxisSet::str() const {
    std::string s;
    if (x) s += 'x';
    if (y) s += 'y';
    if (z) s += 'z';
    return s;
}

void NominalModel::validate() const {
    if (!std::isfinite(r)) {
        throw InvalidArgument("drift r must be finite");
    }
    if (!(ts > 0.0) || !std::isfinite(ts)) {
        throw InvalidArgument("sample time must be positive");
    }
    if (control_axes.count() == 0) {
        throw InvalidArgument("control axis set is empty");
    }
}

CoeffVector NominalModel::generator(const CoeffVector &u) const {
    if ((!control_axes.x && u.x != 0.0) || (!control_axes.y && u.y != 0.0) || (!control_axes.z && u.z != 0.0)) {
        throw InvalidArgument("control uses an axis outside the model's control axes");
    }
    return {u.x, u.y, u.z + r};
}

QubitState nominal_step(const NominalModel &m, const CoeffVector &u, const QubitState &s) {
    return apply(pauli_exponential(m.generator(u), m.ts), s);
}

QubitState uncertain_step(const NominalModel &m, const CoeffVector &u, const CoeffVector &delta, const QubitState &s) {
    return apply(pauli_exponential(m.generator(u) + delta, m.ts), s);
}

Trajectory propagate_nominal(const NominalModel &m, const QubitState &s0, const std::vector<CoeffVector> &controls) {
    Trajectory t;
    t.controls = controls;
    t.states.reserve(controls.size() + 1);
    t.states.push_back(s0);
    for (const auto &u : controls) {
        t.states.push_back(nominal_step(m, u, t.states.back()));
    }
    return t;
}

double trajectory_consistency_error(const NominalModel &m, const Trajectory &t) {
    if (t.states.size() != t.controls.size() + 1) {
        throw InvalidArgument("trajectory must hold one more state than controls");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < t.controls.size(); ++i) {
        worst = std::max(worst, trace_distance(nominal_step(m, t.controls[i], t.states[i]), t.states[i + 1]));
    }
    return worst;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

const char *uncertainty_kind_name(UncertaintyKind kind) {
    switch (kind) {
        case UncertaintyKind::none:
            return "none";
        case UncertaintyKind::periodic:
            return "periodic";
        case UncertaintyKind::uniform:
            return "uniform";
        case UncertaintyKind::truncated_gaussian:
            return "gaussian";
    }
    return "unknown";
}

UncertaintyKind parse_uncertainty_kind(const std::string &text) {
    if (text == "none") return UncertaintyKind::none;
    if (text == "periodic") return UncertaintyKind::periodic;
    if (text == "uniform") return UncertaintyKind::uniform;
    if (text == "gaussian" || text == "truncated-gaussian") return UncertaintyKind::truncated_gaussian;
    throw InvalidArgument("unknown uncertainty kind '" + text + "'");
}

UncertaintyModel UncertaintyModel::make_periodic(double bound, const PeriodicParams &p) {
    UncertaintyModel m;
    m.kind = UncertaintyKind::periodic;
    m.bound = bound;
    m.periodic = p;
    m.validate();
    return m;
}

UncertaintyModel UncertaintyModel::make_uniform(double bound) {
    UncertaintyModel m;
    m.kind = UncertaintyKind::uniform;
    m.bound = bound;
    m.validate();
    return m;
}

UncertaintyModel UncertaintyModel::make_truncated_gaussian(double bound, double stddev) {
    UncertaintyModel m;
    m.kind = UncertaintyKind::truncated_gaussian;
    m.bound = bound;
    m.stddev = stddev < 0.0 ? bound / 2.0 : stddev;
    m.validate();
    return m;
}

void UncertaintyModel::validate() const {
    if (!(bound >= 0.0) || !std::isfinite(bound)) {
        throw InvalidArgument("uncertainty bound must be finite and nonnegative");
    }
    if (kind == UncertaintyKind::truncated_gaussian && !(stddev > 0.0 || bound == 0.0)) {
        throw InvalidArgument("truncated gaussian needs a positive standard deviation");
    }
    if (kind == UncertaintyKind::periodic) {
        const auto &p = periodic;
        if (!std::isfinite(p.omega_x) || !std::isfinite(p.omega_y) || !std::isfinite(p.phase_x) ||
            !std::isfinite(p.phase_y)) {
            throw InvalidArgument("periodic uncertainty parameters must be finite");
        }
    }
}

double UncertaintyModel::effective_norm_bound() const {
    return kind == UncertaintyKind::none ? 0.0 : bound * std::sqrt(2.0);
}

PeriodicParams draw_periodic_params(std::mt19937_64 &rng, double omega_min, double omega_max) {
    std::uniform_real_distribution<double> freq(omega_min, omega_max);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    PeriodicParams p;
    p.omega_x = freq(rng);
    p.omega_y = freq(rng);
    p.phase_x = phase(rng);
    p.phase_y = phase(rng);
    return p;
}

CoeffVector sample_uncertainty(const UncertaintyModel &model, int k, double ts, const RngStream &stream) {
    if (k < 0) {
        throw InvalidArgument("step index must be nonnegative");
    }
    const double b = model.bound;
    switch (model.kind) {
        case UncertaintyKind::none:
            return {};
        case UncertaintyKind::periodic: {
            const auto &p = model.periodic;
            double t = double(k) * ts;
            return {b * std::cos(p.omega_x * t + p.phase_x), b * std::sin(p.omega_y * t + p.phase_y), 0.0};
        }
        case UncertaintyKind::uniform: {
            if (b == 0.0) return {};
            auto rng = stream.at(std::uint64_t(k));
            std::uniform_real_distribution<double> dist(-b, b);
            double dx = dist(rng);
            double dy = dist(rng);
            return {dx, dy, 0.0};
        }
        case UncertaintyKind::truncated_gaussian: {
            if (b == 0.0) return {};
            auto rng = stream.at(std::uint64_t(k));
            std::normal_distribution<double> dist(0.0, model.stddev);
            auto draw = [&] {
                for (;;) {
                    double v = dist(rng);
                    if (std::abs(v) <= b) return v;
                }
            };
            double dx = draw();
            double dy = draw();
            return {dx, dy, 0.0};
        }
    }
    return {};
}

}  // namespace qtompc
