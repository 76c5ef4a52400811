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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qtompc/error.hpp"
#include "qtompc/qubit.hpp"

using namespace qtompc;

namespace {

constexpr double kPi = std::numbers::pi;

QubitState random_state(std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    return QubitState::normalized(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
}

CoeffVector random_coeff(std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(PauliExponential, ZeroGeneratorIsIdentity) {
    Propagator u = pauli_exponential({0, 0, 0}, 1.0);
    EXPECT_EQ(u(0, 0), cplx(1.0));
    EXPECT_EQ(u(0, 1), cplx(0.0));
    EXPECT_EQ(u(1, 0), cplx(0.0));
    EXPECT_EQ(u(1, 1), cplx(1.0));
}

TEST(PauliExponential, TinyAngleReturnsIdentityExactly) {
    Propagator u = pauli_exponential({1e-15, 0, 0}, 1.0);
    EXPECT_EQ(u(0, 0), cplx(1.0));
    EXPECT_EQ(u(1, 0), cplx(0.0));
}

TEST(PauliExponential, HalfPiAboutXIsMinusISigmaX) {
    Propagator u = pauli_exponential({kPi / 2, 0, 0}, 1.0);
    EXPECT_LT(oracle::max_entry_diff(u, oracle::expm_eig(kPi / 2, 0, 0, 1.0)), 1e-12);
    EXPECT_NEAR(std::abs(u(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(0, 1) - cplx(0, -1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 0) - cplx(0, -1)), 0.0, 1e-15);
}

TEST(PauliExponential, DriftOnlyIsDiagonalPhase) {
    Propagator u = pauli_exponential({0, 0, 0.05}, 1.0);
    EXPECT_LT(oracle::max_entry_diff(u, oracle::expm_eig(0, 0, 0.05, 1.0)), 1e-12);
    EXPECT_NEAR(std::abs(u(0, 0) - std::exp(cplx(0, -0.05))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 1) - std::exp(cplx(0, 0.05))), 0.0, 1e-15);
}

TEST(PauliExponential, MatchesEigendecompositionOracle) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> t(0.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        CoeffVector w = random_coeff(rng, 2.0);
        double ts = t(rng);
        ASSERT_LT(oracle::max_entry_diff(pauli_exponential(w, ts), oracle::expm_eig(w.x, w.y, w.z, ts)), 1e-10);
    }
}

TEST(PauliExponential, UnitaryAndComposes) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> t(0.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        CoeffVector w = random_coeff(rng, 3.0);
        double t1 = t(rng), t2 = t(rng);
        EXPECT_LT(pauli_exponential(w, t1).unitarity_error(), 1e-12);
        Propagator a = pauli_exponential(w, t1 + t2);
        Propagator b = pauli_exponential(w, t1) * pauli_exponential(w, t2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) EXPECT_LT(std::abs(a(r, c) - b(r, c)), 1e-10);
    }
}

TEST(PauliExponential, RejectsBadInput) {
    EXPECT_THROW(pauli_exponential({NAN, 0, 0}, 1.0), InvalidArgument);
    EXPECT_THROW(pauli_exponential({0, INFINITY, 0}, 1.0), InvalidArgument);
    EXPECT_THROW(pauli_exponential({0, 0, 1}, -1.0), InvalidArgument);
}

TEST(Apply, Examples) {
    EXPECT_EQ(apply(Propagator::identity(), QubitState::zero()), QubitState::zero());

    QubitState s = apply(pauli_exponential({kPi / 2, 0, 0}, 1.0), QubitState::zero());
    EXPECT_NEAR(std::abs(s[1] - cplx(0, -1)), 0.0, 1e-15);
    QubitState c = s.canonical();
    EXPECT_NEAR(std::abs(c[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c[1] - cplx(1.0)), 0.0, 1e-15);

    const double h = 1.0 / std::sqrt(2.0);
    QubitState p = apply(pauli_exponential({0, 0, 0.05}, 1.0), QubitState::plus());
    EXPECT_NEAR(std::abs(p[0] - h * std::exp(cplx(0, -0.05))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p[1] - h * std::exp(cplx(0, 0.05))), 0.0, 1e-15);
}

TEST(Apply, PreservesNorm) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        QubitState s = apply(pauli_exponential(random_coeff(rng, 2.0), 1.0), random_state(rng));
        EXPECT_NEAR(std::norm(s[0]) + std::norm(s[1]), 1.0, 1e-12);
    }
}

TEST(QubitState, NormChecks) {
    EXPECT_THROW(QubitState(cplx(1.0), cplx(0.1)), NumericError);
    EXPECT_THROW(QubitState(cplx(NAN), cplx(0.0)), InvalidArgument);
    QubitState s(cplx(1.0 + 1e-10), cplx(0.0));
    EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-15);
    EXPECT_THROW(QubitState::normalized(cplx(0.0), cplx(0.0)), InvalidArgument);
}

TEST(QubitState, CanonicalPhase) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> phi(-kPi, kPi);
    for (int i = 0; i < 200; ++i) {
        QubitState s = random_state(rng);
        QubitState c = s.canonical();
        EXPECT_GE(c[0].real(), 0.0);
        EXPECT_EQ(c[0].imag(), 0.0);
        EXPECT_NEAR(fidelity_sq(s, c), 1.0, 1e-12);
        const cplx g = std::exp(cplx(0, phi(rng)));
        QubitState rotated(g * s[0], g * s[1]);
        QubitState c2 = rotated.canonical();
        EXPECT_NEAR(std::abs(c2[0] - c[0]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(c2[1] - c[1]), 0.0, 1e-12);
    }
    // A vanishing first component defers to the second.
    QubitState t(cplx(0.0), cplx(0.0, -1.0));
    EXPECT_NEAR(std::abs(t.canonical()[1] - cplx(1.0)), 0.0, 1e-15);
}

TEST(Fidelity, Examples) {
    const auto zero = QubitState::zero(), one = QubitState::one(), plus = QubitState::plus();
    EXPECT_DOUBLE_EQ(fidelity_sq(plus, plus), 1.0);
    EXPECT_DOUBLE_EQ(fidelity_sq(zero, one), 0.0);
    EXPECT_NEAR(fidelity_sq(zero, plus), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(trace_distance(plus, plus), 0.0);
    EXPECT_DOUBLE_EQ(trace_distance(zero, one), 1.0);
    EXPECT_NEAR(trace_distance(zero, plus), std::sqrt(0.5), 1e-15);
}

TEST(Fidelity, PhaseInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phi(-kPi, kPi);
    for (int i = 0; i < 500; ++i) {
        QubitState a = random_state(rng), b = random_state(rng);
        const cplx g = std::exp(cplx(0, phi(rng)));
        QubitState a2(g * a[0], g * a[1]);
        EXPECT_NEAR(fidelity_sq(a, b), fidelity_sq(a2, b), 1e-14);
        EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a2), 1e-12);
    }
}

TEST(Bloch, Examples) {
    BlochVector z = state_to_bloch(QubitState::zero());
    EXPECT_NEAR(z.x3, 1.0, 1e-15);
    BlochVector o = state_to_bloch(QubitState::one());
    EXPECT_NEAR(o.x3, -1.0, 1e-15);
    BlochVector p = state_to_bloch(QubitState::plus());
    EXPECT_NEAR(p.x1, 1.0, 1e-15);
    EXPECT_NEAR(p.x2, 0.0, 1e-15);
    EXPECT_NEAR(p.x3, 0.0, 1e-15);
}

TEST(Bloch, RoundTripAndDistanceIdentity) {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 1000; ++i) {
        QubitState a = random_state(rng), b = random_state(rng);
        BlochVector na = state_to_bloch(a), nb = state_to_bloch(b);
        EXPECT_NEAR(na.norm(), 1.0, 1e-12);
        EXPECT_NEAR(fidelity_sq(bloch_to_state(na), a), 1.0, 1e-12);
        const double dx = na.x1 - nb.x1, dy = na.x2 - nb.x2, dz = na.x3 - nb.x3;
        EXPECT_NEAR(trace_distance(a, b), 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz), 1e-10);
    }
    EXPECT_NEAR(fidelity_sq(bloch_to_state({0, 0, -1}), QubitState::one()), 1.0, 1e-15);
}
