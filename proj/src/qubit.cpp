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

#include "qtompc/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtompc/error.hpp"

namespace qtompc {

namespace {

constexpr double kRenormalizeDrift = 1e-12;
constexpr double kMaxNormDrift = 1e-8;
constexpr double kSmallAngle = 1e-14;
constexpr double kPhaseEpsilon = 1e-12;

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

double CoeffVector::norm() const { return std::sqrt(norm_sq()); }

bool CoeffVector::is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

double dot(const CoeffVector &a, const CoeffVector &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

CoeffVector cross(const CoeffVector &a, const CoeffVector &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double BlochVector::norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

QubitState::QubitState(cplx a0, cplx a1) : amp_{a0, a1} {
    if (!finite(a0) || !finite(a1)) {
        throw InvalidArgument("qubit amplitudes must be finite");
    }
    double n2 = std::norm(a0) + std::norm(a1);
    double drift = std::abs(std::sqrt(n2) - 1.0);
    if (drift > kMaxNormDrift) {
        std::ostringstream msg;
        msg << "state norm drifted by " << drift << " (limit " << kMaxNormDrift << ")";
        throw NumericError(msg.str());
    }
    if (drift > kRenormalizeDrift) {
        double inv = 1.0 / std::sqrt(n2);
        amp_[0] *= inv;
        amp_[1] *= inv;
    }
}

QubitState QubitState::normalized(cplx a0, cplx a1) {
    if (!finite(a0) || !finite(a1)) {
        throw InvalidArgument("qubit amplitudes must be finite");
    }
    double n = std::sqrt(std::norm(a0) + std::norm(a1));
    if (n < 1e-300) {
        throw InvalidArgument("cannot normalize the zero vector");
    }
    return QubitState(a0 / n, a1 / n);
}

QubitState QubitState::plus() {
    double h = 1.0 / std::sqrt(2.0);
    return QubitState(cplx(h), cplx(h));
}

QubitState QubitState::canonical() const {
    int lead = std::abs(amp_[0]) > kPhaseEpsilon ? 0 : 1;
    cplx phase = std::conj(amp_[lead]) / std::abs(amp_[lead]);
    cplx a0 = amp_[0] * phase;
    cplx a1 = amp_[1] * phase;
    // Pin the leading component exactly on the real axis.
    if (lead == 0) {
        a0 = cplx(std::abs(amp_[0]), 0.0);
    } else {
        a1 = cplx(std::abs(amp_[1]), 0.0);
    }
    return QubitState(a0, a1);
}

Propagator Propagator::operator*(const Propagator &o) const {
    return {m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
            m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]};
}

Propagator Propagator::adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

double Propagator::unitarity_error() const {
    Propagator p = adjoint() * *this;
    return std::max({std::abs(p(0, 0) - 1.0), std::abs(p(0, 1)), std::abs(p(1, 0)), std::abs(p(1, 1) - 1.0)});
}

Propagator pauli_exponential(const CoeffVector &w, double ts) {
    if (!w.is_finite() || !std::isfinite(ts)) {
        throw InvalidArgument("pauli_exponential: non-finite input");
    }
    if (ts < 0.0) {
        throw InvalidArgument("pauli_exponential: negative duration");
    }
    double mag = w.norm();
    double angle = mag * ts;
    if (angle < kSmallAngle) {
        return Propagator::identity();
    }
    double c = std::cos(angle);
    double s = std::sin(angle) / mag;
    // -i s (w.sigma) with sigma_x = [[0,1],[1,0]], sigma_y = [[0,-i],[i,0]], sigma_z = diag(1,-1).
    return {cplx(c, -s * w.z), cplx(-s * w.y, -s * w.x), cplx(s * w.y, -s * w.x), cplx(c, s * w.z)};
}

QubitState apply(const Propagator &u, const QubitState &s) {
    return QubitState(u(0, 0) * s[0] + u(0, 1) * s[1], u(1, 0) * s[0] + u(1, 1) * s[1]);
}

cplx inner(const QubitState &a, const QubitState &b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

double fidelity_sq(const QubitState &a, const QubitState &b) { return std::min(1.0, std::norm(inner(a, b))); }

double trace_distance(const QubitState &a, const QubitState &b) {
    if (std::norm(inner(a, b)) > 1.0 + 1e-12) {
        throw NumericError("trace_distance: overlap exceeds one");
    }
    // |<a_perp|b>| equals sqrt(1 - |<a|b>|^2) for unit states and stays
    // accurate near a = b, where the subtraction would lose half the digits.
    return std::min(1.0, std::abs(a[0] * b[1] - a[1] * b[0]));
}

BlochVector state_to_bloch(const QubitState &s) {
    cplx off = std::conj(s[0]) * s[1];
    return {2.0 * off.real(), 2.0 * off.imag(), std::norm(s[0]) - std::norm(s[1])};
}

QubitState bloch_to_state(const BlochVector &n) {
    if (!std::isfinite(n.x1) || !std::isfinite(n.x2) || !std::isfinite(n.x3)) {
        throw InvalidArgument("bloch_to_state: non-finite input");
    }
    double len = n.norm();
    if (std::abs(len - 1.0) > kMaxNormDrift) {
        throw InvalidArgument("bloch_to_state: not a pure-state Bloch vector");
    }
    double x1 = n.x1 / len, x2 = n.x2 / len, x3 = n.x3 / len;
    double a0 = std::sqrt(std::max(0.0, (1.0 + x3) / 2.0));
    if (a0 < 1e-12) {
        return QubitState::one();
    }
    return QubitState::normalized(cplx(a0), cplx(x1, x2) / (2.0 * a0));
}

}  // namespace qtompc
