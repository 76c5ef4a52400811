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

#ifndef QTOMPC_BOUNDS_HPP
#define QTOMPC_BOUNDS_HPP

#include <complex>
#include <vector>

#include "qtompc/qubit.hpp"

namespace qtompc {

/// Uncertainty norm bound, sample time and horizon, with the per-step
/// success and failure floors derived from them.
struct BoundInputs {
    double bound = 0.0;
    double ts = 1.0;
    int horizon = 1;

    /// Throws HypothesisViolated unless bound * ts < pi/2.
    void validate() const;

    /// cos^2(bound * ts)
    double c() const;
    /// sin^2(bound * ts)
    double s() const;
    /// s * c^L
    double alpha() const;
};

/// cos^2(bound * ts). Throws HypothesisViolated if bound * ts >= pi/2.
double success_bound(double bound, double ts);

/// F_1..F_N for per-step success probability c and horizon L. F_k = 1 for
/// k < L, F_L = 1 - c^L, and for N > L
///   F_N = (1 - c) * sum_{l=1}^{L} c^{l-1} F_{N-l}.
std::vector<double> failure_probabilities(double c, int horizon, int n);
std::vector<double> failure_probabilities(const BoundInputs &in, int n);

/// Lower bound on the probability of having reached the target by step N:
/// 1 - F_N for N >= L, and 0 for N < L.
double p_tar_lower_bound(double c, int horizon, int n);
double p_tar_lower_bound(const BoundInputs &in, int n);

struct ConvergenceRate {
    /// 1: c < L/(L+1); 2: c > L/(L+1); 3: c = L/(L+1) within 1e-12.
    int case_id = 0;
    double eta = 0.0;
};

ConvergenceRate convergence_rate(double c, int horizon);
ConvergenceRate convergence_rate(const BoundInputs &in);

/// All L+1 roots of g(z) = z^{L+1} - z^L + alpha (companion-matrix
/// eigenvalues, Newton-polished). Throws NumericError if a polished root
/// leaves |g| > 1e-10.
std::vector<std::complex<double>> characteristic_roots(int horizon, double alpha);

/// Largest root modulus of g(z) / (z - c) where alpha = (1 - c) c^L, i.e.
/// g with the root z1 = c divided out.
double max_root_modulus_excluding_c(double c, int horizon);

/// Amplitudes and frequencies of h(ts) = a1 cos(f1 ts) + a2 cos(f2 ts) -
/// cos(|delta| ts).
struct HDecomposition {
    double a1 = 1.0;
    double a2 = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double delta_norm = 0.0;

    double value(double ts) const;
};

HDecomposition h_decomposition(const CoeffVector &v, const CoeffVector &delta);

/// Re<psi_1|psi_{k+1}> excess over the parallel case, in the product form
///   cos(ts|v|) cos(ts|v+d|) + (v.(v+d))/(|v||v+d|) sin(ts|v|) sin(ts|v+d|)
///   - cos(ts|d|).
/// Zero when v or v + d vanishes.
double h_function(const CoeffVector &v, const CoeffVector &delta, double ts);

}  // namespace qtompc

#endif
