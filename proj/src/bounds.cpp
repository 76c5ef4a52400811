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

#include "qtompc/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qtompc/error.hpp"

namespace qtompc {

namespace {

void check_horizon(int horizon) {
    if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
}

void check_probability(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("success probability must lie in [0, 1]");
}

/// Polynomial with real coefficients, highest degree first.
std::complex<double> horner(const std::vector<double> &p, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (double a : p) acc = acc * z + a;
    return acc;
}

std::vector<std::complex<double>> polished_roots(const std::vector<double> &p) {
    const int n = int(p.size()) - 1;
    if (n < 1) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) comp(0, j) = -p[j + 1] / p[0];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");

    std::vector<double> dp;
    for (int i = 0; i < n; ++i) dp.push_back(p[i] * double(n - i));

    std::vector<std::complex<double>> roots;
    for (int i = 0; i < n; ++i) {
        std::complex<double> z = es.eigenvalues()[i];
        std::complex<double> gz = horner(p, z);
        for (int it = 0; it < 20 && std::abs(gz) > 0.0; ++it) {
            std::complex<double> d = horner(dp, z);
            if (std::abs(d) == 0.0) break;
            std::complex<double> z2 = z - gz / d;
            std::complex<double> g2 = horner(p, z2);
            if (!(std::abs(g2) < std::abs(gz))) break;
            z = z2;
            gz = g2;
        }
        roots.push_back(z);
    }
    return roots;
}

}  // namespace

void BoundInputs::validate() const {
    check_horizon(horizon);
    if (!(bound >= 0.0) || !(ts > 0.0) || !std::isfinite(bound) || !std::isfinite(ts)) {
        throw InvalidArgument("bound must be nonnegative and ts positive");
    }
    if (bound * ts >= std::numbers::pi / 2.0) {
        throw HypothesisViolated("bound * ts must be below pi/2");
    }
}

double BoundInputs::c() const { return success_bound(bound, ts); }

double BoundInputs::s() const {
    const double x = std::sin(bound * ts);
    return x * x;
}

double BoundInputs::alpha() const { return s() * std::pow(c(), horizon); }

double success_bound(double bound, double ts) {
    if (!(bound >= 0.0) || !(ts >= 0.0)) throw InvalidArgument("bound and ts must be nonnegative");
    if (bound * ts >= std::numbers::pi / 2.0) {
        std::ostringstream msg;
        msg << "bound * ts = " << bound * ts << " is not below pi/2";
        throw HypothesisViolated(msg.str());
    }
    const double x = std::cos(bound * ts);
    return x * x;
}

std::vector<double> failure_probabilities(double c, int horizon, int n) {
    check_horizon(horizon);
    check_probability(c);
    if (n < 1) throw InvalidArgument("N must be at least 1");
    const double s = 1.0 - c;
    const int L = horizon;
    // f[j] holds F_j; index 0 is F_0 = 1.
    std::vector<double> f(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) {
        if (k < L) {
            f[k] = 1.0;
        } else if (k == L) {
            f[k] = 1.0 - std::pow(c, L);
        } else {
            double acc = 0.0;
            double w = 1.0;
            for (int l = 1; l <= L; ++l) {
                acc += w * f[k - l];
                w *= c;
            }
            f[k] = s * acc;
        }
    }
    return {f.begin() + 1, f.end()};
}

std::vector<double> failure_probabilities(const BoundInputs &in, int n) {
    in.validate();
    return failure_probabilities(in.c(), in.horizon, n);
}

double p_tar_lower_bound(double c, int horizon, int n) {
    check_horizon(horizon);
    check_probability(c);
    if (n < 1) throw InvalidArgument("N must be at least 1");
    if (n < horizon) return 0.0;
    return std::max(0.0, 1.0 - failure_probabilities(c, horizon, n).back());
}

double p_tar_lower_bound(const BoundInputs &in, int n) {
    in.validate();
    return p_tar_lower_bound(in.c(), in.horizon, n);
}

ConvergenceRate convergence_rate(double c, int horizon) {
    check_horizon(horizon);
    check_probability(c);
    const double L = horizon;
    const double knee = L / (L + 1.0);
    ConvergenceRate r;
    if (std::abs(c - knee) <= 1e-12) {
        r.case_id = 3;
        r.eta = knee;
    } else if (c < knee) {
        const double alpha = (1.0 - c) * std::pow(c, horizon);
        r.case_id = 1;
        r.eta = std::min(1.0 - alpha, 2.0 * L / (L + 1.0) - c);
    } else {
        r.case_id = 2;
        r.eta = 2.0 * L / (L + 1.0) - c;
    }
    return r;
}

ConvergenceRate convergence_rate(const BoundInputs &in) {
    in.validate();
    return convergence_rate(in.c(), in.horizon);
}

std::vector<std::complex<double>> characteristic_roots(int horizon, double alpha) {
    check_horizon(horizon);
    if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
    std::vector<double> p(static_cast<std::size_t>(horizon) + 2, 0.0);
    p[0] = 1.0;
    p[1] = -1.0;
    p.back() += alpha;
    auto roots = polished_roots(p);
    for (const auto &z : roots) {
        if (std::abs(horner(p, z)) > 1e-10) {
            std::ostringstream msg;
            msg << "root " << z << " has residual " << std::abs(horner(p, z));
            throw NumericError(msg.str());
        }
    }
    return roots;
}

double max_root_modulus_excluding_c(double c, int horizon) {
    check_horizon(horizon);
    check_probability(c);
    // g(z) = (z - c) q(z) with q(z) = z^L + (c - 1) sum_{j<L} c^j z^{L-1-j}.
    std::vector<double> q(static_cast<std::size_t>(horizon) + 1);
    q[0] = 1.0;
    double w = c - 1.0;
    for (int j = 1; j <= horizon; ++j) {
        q[j] = w;
        w *= c;
    }
    double m = 0.0;
    for (const auto &z : polished_roots(q)) m = std::max(m, std::abs(z));
    return m;
}

double HDecomposition::value(double ts) const {
    return a1 * std::cos(f1 * ts) + a2 * std::cos(f2 * ts) - std::cos(delta_norm * ts);
}

HDecomposition h_decomposition(const CoeffVector &v, const CoeffVector &delta) {
    if (!v.is_finite() || !delta.is_finite()) throw InvalidArgument("h inputs must be finite");
    const CoeffVector w = v + delta;
    const double nv = v.norm(), nw = w.norm();
    HDecomposition h;
    h.delta_norm = delta.norm();
    h.f1 = nw - nv;
    h.f2 = nw + nv;
    if (nv == 0.0 || nw == 0.0) return h;
    const double p = nv * nw;
    const double d = dot(v, w);
    // p^2 - d^2 = |v x delta|^2 avoids cancellation near parallel vectors.
    const double cx = cross(v, delta).norm_sq();
    if (d >= 0.0) {
        h.a2 = cx / (2.0 * p * (p + d));
        h.a1 = 1.0 - h.a2;
    } else {
        h.a1 = cx / (2.0 * p * (p - d));
        h.a2 = 1.0 - h.a1;
    }
    return h;
}

double h_function(const CoeffVector &v, const CoeffVector &delta, double ts) {
    if (!v.is_finite() || !delta.is_finite() || !std::isfinite(ts)) throw InvalidArgument("h inputs must be finite");
    if (!(ts > 0.0)) throw InvalidArgument("ts must be positive");
    const CoeffVector w = v + delta;
    const double nv = v.norm(), nw = w.norm(), nd = delta.norm();
    double h = std::cos(ts * nv) * std::cos(ts * nw) - std::cos(ts * nd);
    if (nv > 0.0 && nw > 0.0) h += dot(v, w) / (nv * nw) * std::sin(ts * nv) * std::sin(ts * nw);
    return h;
}

}  // namespace qtompc
