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
#include "qtompc/bounds.hpp"
#include "qtompc/dynamics.hpp"
#include "qtompc/error.hpp"

using namespace qtompc;

namespace {

std::complex<double> g_eval(int L, double alpha, std::complex<double> z) { return std::pow(z, L + 1) - std::pow(z, L) + alpha; }

}  // namespace

TEST(SuccessBound, Examples) {
    EXPECT_DOUBLE_EQ(success_bound(0.0, 1.0), 1.0);
    EXPECT_NEAR(success_bound(std::numbers::pi / 4, 1.0), 0.5, 1e-15);
    // cos^2(0.05) = (1 + cos 0.1) / 2
    EXPECT_NEAR(success_bound(0.05, 1.0), (1.0 + std::cos(0.1)) / 2.0, 2e-16);
    EXPECT_NEAR(success_bound(0.05, 1.0), 0.9975021, 1e-7);
    EXPECT_THROW(success_bound(std::numbers::pi / 2, 1.0), HypothesisViolated);
    EXPECT_THROW(success_bound(1.0, 2.0), HypothesisViolated);
}

TEST(BoundInputs, Derived) {
    BoundInputs in{0.05, 1.0, 10};
    EXPECT_NEAR(in.c() + in.s(), 1.0, 1e-14);
    EXPECT_NEAR(in.alpha(), in.s() * std::pow(in.c(), 10), 1e-18);
    BoundInputs bad{2.0, 1.0, 10};
    EXPECT_THROW(bad.validate(), HypothesisViolated);
}

TEST(FailureProbabilities, Examples) {
    auto f = failure_probabilities(0.75, 2, 3);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_DOUBLE_EQ(f[0], 1.0);
    EXPECT_DOUBLE_EQ(f[1], 0.4375);
    EXPECT_DOUBLE_EQ(f[2], 0.296875);
    auto g = failure_probabilities(0.9, 5, 4);
    for (double v : g) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(FailureProbabilities, MatchesCoinEnumeration) {
    for (double c : {0.25, 0.5, 0.75, 0.9975}) {
        for (int L = 1; L <= 5; ++L) {
            auto f = failure_probabilities(c, L, 14);
            for (int N = 1; N <= 14; ++N) {
                // Before L tosses no run of L exists by construction.
                const double expect = oracle::no_run_probability(c, L, N);
                ASSERT_NEAR(f[N - 1], expect, 1e-12) << "c " << c << " L " << L << " N " << N;
            }
        }
    }
}

TEST(PTar, Examples) {
    EXPECT_DOUBLE_EQ(p_tar_lower_bound(0.9, 10, 5), 0.0);
    EXPECT_NEAR(p_tar_lower_bound(0.75, 2, 3), 1.0 - oracle::no_run_probability(0.75, 2, 3), 1e-15);
    EXPECT_NEAR(p_tar_lower_bound(0.9975, 10, 5000), 1.0, 1e-12);
    double prev = 0.0;
    for (int N = 1; N <= 200; ++N) {
        double p = p_tar_lower_bound(0.9, 3, N);
        EXPECT_GE(p, prev - 1e-15);
        prev = p;
    }
    EXPECT_THROW(p_tar_lower_bound(1.5, 3, 4), InvalidArgument);
}

TEST(ConvergenceRate, Cases) {
    auto r3 = convergence_rate(10.0 / 11.0, 10);
    EXPECT_EQ(r3.case_id, 3);
    EXPECT_DOUBLE_EQ(r3.eta, 10.0 / 11.0);

    auto r2 = convergence_rate(0.9975, 10);
    EXPECT_EQ(r2.case_id, 2);
    EXPECT_NEAR(r2.eta, 20.0 / 11.0 - 0.9975, 1e-15);
    EXPECT_NEAR(r2.eta, 0.820682, 1e-6);

    auto r1 = convergence_rate(0.5, 3);
    EXPECT_EQ(r1.case_id, 1);
    EXPECT_DOUBLE_EQ(r1.eta, 0.9375);
    EXPECT_LE(max_root_modulus_excluding_c(0.5, 3), 0.9375);
}

TEST(CharacteristicRoots, AlphaZero) {
    auto roots = characteristic_roots(4, 0.0);
    ASSERT_EQ(roots.size(), 5u);
    int zeros = 0, ones = 0;
    for (auto z : roots) {
        if (std::abs(z) < 1e-10) ++zeros;
        if (std::abs(z - 1.0) < 1e-12) ++ones;
    }
    EXPECT_EQ(zeros, 4);
    EXPECT_EQ(ones, 1);
}

TEST(CharacteristicRoots, ContainsC) {
    for (int L : {1, 3, 10}) {
        for (double c : {0.3, 0.8, 0.99}) {
            const double alpha = (1 - c) * std::pow(c, L);
            EXPECT_LT(std::abs(g_eval(L, alpha, c)), 1e-10);
            auto roots = characteristic_roots(L, alpha);
            ASSERT_EQ(int(roots.size()), L + 1);
            double nearest = INFINITY;
            for (auto z : roots) {
                EXPECT_LT(std::abs(g_eval(L, alpha, z)), 1e-10);
                nearest = std::min(nearest, std::abs(z - c));
            }
            EXPECT_LT(nearest, 1e-6);
        }
    }
}

TEST(CharacteristicRoots, DoubleRootAtKnee) {
    const int L = 4;
    const double c = 0.8;
    const double alpha = (1 - c) * std::pow(c, L);
    // g(c) = 0 and g'(c) = (L+1) c^L - L c^{L-1} = 0 at c = L/(L+1).
    EXPECT_LT(std::abs(g_eval(L, alpha, c)), 1e-15);
    EXPECT_LT(std::abs((L + 1) * std::pow(c, L) - L * std::pow(c, L - 1)), 1e-15);
    EXPECT_NEAR(max_root_modulus_excluding_c(c, L), c, 1e-9);
}

TEST(CharacteristicRoots, EtaEnclosesRoots) {
    for (int L = 1; L <= 15; ++L) {
        for (int i = 1; i <= 99; ++i) {
            const double c = i / 100.0;
            const auto r = convergence_rate(c, L);
            EXPECT_LE(r.eta, 1.0);  // 1 - alpha rounds to 1 for tiny alpha
            EXPECT_LE(max_root_modulus_excluding_c(c, L), r.eta + 1e-9) << "L " << L << " c " << c;
        }
    }
}

TEST(HFunction, ParallelIsZero) {
    EXPECT_NEAR(h_function({0.3, 0.1, 0.05}, {0.03, 0.01, 0.005}, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(h_function({0.3, 0.1, 0.05}, {-0.03, -0.01, -0.005}, 1.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(h_function({0, 0, 0}, {0.1, 0, 0}, 1.0), 0.0);
}

TEST(HFunction, SmallTsExpansion) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        CoeffVector v{u(rng), u(rng), u(rng)}, d{0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng)};
        const double ts = 0.05 / ((v + d).norm() + v.norm());
        const double approx = std::pow(ts, 4) / 6.0 * cross(v, d).norm_sq();
        const double exact = h_decomposition(v, d).value(ts);
        EXPECT_NEAR(exact, approx, 0.01 * approx);
    }
}

TEST(HFunction, FormsAgreeOnExample) {
    CoeffVector v{1, 0, 0}, d{0, 0.05, 0};
    const double raw = h_function(v, d, 1.0);
    const double sp = h_decomposition(v, d).value(1.0);
    EXPECT_NEAR(raw, sp, 1e-15);
    // Independent evaluation: |v| = 1, |v + d| = sqrt(1.0025), v.(v+d) = 1.
    const double w = std::sqrt(1.0025);
    const double direct = std::cos(1.0) * std::cos(w) + (1.0 / w) * std::sin(1.0) * std::sin(w) - std::cos(0.05);
    EXPECT_NEAR(raw, direct, 1e-15);
    EXPECT_GT(raw, 0.0);
}

TEST(HFunction, NonnegativeAndStructured) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.01, 3.0);
    for (int i = 0; i < 100000; ++i) {
        CoeffVector v{u(rng), u(rng), u(rng)}, d{u(rng), u(rng), u(rng)};
        const double ts = t(rng);
        if (d.norm() * ts >= std::numbers::pi / 2) d = d * (0.999 * std::numbers::pi / 2 / ts / d.norm());
        const double h = h_function(v, d, ts);
        ASSERT_GE(h, -1e-12);
        auto dec = h_decomposition(v, d);
        ASSERT_NEAR(dec.value(ts), h, 1e-12);
        ASSERT_GT(dec.a1, 0.0);
        ASSERT_LT(dec.a1, 1.0);
        ASSERT_GT(dec.a2, 0.0);
        ASSERT_LT(dec.a2, 1.0);
        ASSERT_LT(dec.f1, dec.delta_norm);
        ASSERT_LT(dec.delta_norm, dec.f2);
    }
}

TEST(HFunction, DirectSuccessBound) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NominalModel m;
    m.control_axes = AxisSet::parse("xyz");
    m.r = 0.0;
    for (int i = 0; i < 20000; ++i) {
        CoeffVector v{u(rng), u(rng), u(rng)}, d{u(rng), u(rng), u(rng)};
        if (d.norm() >= std::numbers::pi / 2) d = d * (1.5 / d.norm());
        std::normal_distribution<double> n;
        QubitState s = QubitState::normalized(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
        const double f = fidelity_sq(nominal_step(m, v, s), uncertain_step(m, v, d, s));
        ASSERT_GE(f, success_bound(d.norm(), 1.0) - 1e-10);
    }
}
