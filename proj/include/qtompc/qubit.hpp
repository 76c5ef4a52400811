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

#ifndef QTOMPC_QUBIT_HPP
#define QTOMPC_QUBIT_HPP

#include <array>
#include <complex>

namespace qtompc {

using cplx = std::complex<double>;

/// Coefficients of a generator w.x*sx + w.y*sy + w.z*sz, in rad/ns.
struct CoeffVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    double norm_sq() const { return x * x + y * y + z * z; }
    bool is_finite() const;

    CoeffVector operator+(const CoeffVector &o) const { return {x + o.x, y + o.y, z + o.z}; }
    CoeffVector operator-(const CoeffVector &o) const { return {x - o.x, y - o.y, z - o.z}; }
    CoeffVector operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const CoeffVector &) const = default;
};

double dot(const CoeffVector &a, const CoeffVector &b);
CoeffVector cross(const CoeffVector &a, const CoeffVector &b);

struct BlochVector {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    double norm() const;
};

/// Pure qubit state. Always unit norm.
class QubitState {
   public:
    /// |0>.
    QubitState() : amp_{cplx(1.0, 0.0), cplx(0.0, 0.0)} {}

    /// Accepts amplitudes whose norm is within 1e-8 of one and renormalizes
    /// drift above 1e-12. Anything further off throws NumericError; non-finite
    /// input throws InvalidArgument.
    QubitState(cplx a0, cplx a1);

    /// Normalizes an arbitrary nonzero vector.
    static QubitState normalized(cplx a0, cplx a1);

    static QubitState zero() { return {}; }
    static QubitState one() { return QubitState(cplx(0.0), cplx(1.0)); }
    static QubitState plus();

    const cplx &operator[](int i) const { return amp_[i]; }
    const std::array<cplx, 2> &amplitudes() const { return amp_; }

    /// Same ray, with the first component of magnitude > 1e-12 made real and
    /// nonnegative.
    QubitState canonical() const;

    bool operator==(const QubitState &) const = default;

   private:
    std::array<cplx, 2> amp_;
};

/// 2x2 complex matrix, row-major. Constructed propagators are unitary.
class Propagator {
   public:
    Propagator() : m_{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)} {}
    Propagator(cplx m00, cplx m01, cplx m10, cplx m11) : m_{m00, m01, m10, m11} {}

    static Propagator identity() { return {}; }

    const cplx &operator()(int r, int c) const { return m_[2 * r + c]; }
    Propagator operator*(const Propagator &o) const;
    Propagator adjoint() const;

    /// Largest entrywise deviation of U^dagger U from the identity.
    double unitarity_error() const;

   private:
    std::array<cplx, 4> m_;
};

/// exp(-i ts (w . sigma)) = cos(|w| ts) I - i sin(|w| ts) (w_hat . sigma).
Propagator pauli_exponential(const CoeffVector &w, double ts);

QubitState apply(const Propagator &u, const QubitState &s);

/// |<a|b>|^2.
double fidelity_sq(const QubitState &a, const QubitState &b);

/// sqrt(1 - |<a|b>|^2), the pure-state trace distance.
double trace_distance(const QubitState &a, const QubitState &b);

cplx inner(const QubitState &a, const QubitState &b);

BlochVector state_to_bloch(const QubitState &s);
QubitState bloch_to_state(const BlochVector &n);

}  // namespace qtompc

#endif
