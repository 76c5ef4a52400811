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

#ifndef QTOMPC_DYNAMICS_HPP
#define QTOMPC_DYNAMICS_HPP

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qtompc/qubit.hpp"

namespace qtompc {

struct AxisSet {
    bool x = true;
    bool y = true;
    bool z = false;

    int count() const { return int(x) + int(y) + int(z); }
    bool contains(int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
    bool operator==(const AxisSet &) const = default;

    /// Parses strings such as "xy" or "xyz".
    static AxisSet parse(const std::string &text);
    std::string str() const;
};

/// Drift r*sigma_z plus piecewise-constant controls on the given axes.
struct NominalModel {
    double r = 0.05;
    AxisSet control_axes{};
    double ts = 1.0;

    void validate() const;

    /// u + (0, 0, r). Throws InvalidArgument if u uses an inactive axis.
    CoeffVector generator(const CoeffVector &u) const;
};

QubitState nominal_step(const NominalModel &m, const CoeffVector &u, const QubitState &s);
QubitState uncertain_step(const NominalModel &m, const CoeffVector &u, const CoeffVector &delta, const QubitState &s);

/// states[i+1] = step(controls[i], states[i]).
struct Trajectory {
    std::vector<CoeffVector> controls;
    std::vector<QubitState> states;

    std::size_t steps() const { return controls.size(); }
};

Trajectory propagate_nominal(const NominalModel &m, const QubitState &s0, const std::vector<CoeffVector> &controls);

/// Largest trace distance between a recorded state and the nominal step from
/// its predecessor.
double trajectory_consistency_error(const NominalModel &m, const Trajectory &t);

/// splitmix64 finalizer applied to (seed, index). Adding indices never
/// perturbs the values derived for earlier ones.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// A seed from which independent generators are derived per counter value.
class RngStream {
   public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64 at(std::uint64_t k) const { return std::mt19937_64(split_seed(seed_, k)); }
    RngStream child(std::uint64_t index) const { return RngStream(split_seed(seed_ ^ 0x9e3779b97f4a7c15ULL, index)); }

   private:
    std::uint64_t seed_;
};

enum class UncertaintyKind { none, periodic, uniform, truncated_gaussian };

const char *uncertainty_kind_name(UncertaintyKind kind);
UncertaintyKind parse_uncertainty_kind(const std::string &text);

/// Frequencies in rad/ns, phases in rad.
struct PeriodicParams {
    double omega_x = 0.0;
    double omega_y = 0.0;
    double phase_x = 0.0;
    double phase_y = 0.0;
};

/// Default periodic frequency range: [15 pi, 25 pi] rad/us.
inline constexpr double kPeriodicOmegaMin = 15.0 * std::numbers::pi / 1000.0;
inline constexpr double kPeriodicOmegaMax = 25.0 * std::numbers::pi / 1000.0;

struct UncertaintyModel {
    UncertaintyKind kind = UncertaintyKind::none;
    /// Componentwise bound on delta_x and delta_y, rad/ns.
    double bound = 0.0;
    PeriodicParams periodic{};
    /// Standard deviation before truncation (truncated_gaussian only).
    double stddev = 0.0;

    static UncertaintyModel none() { return {}; }
    static UncertaintyModel make_periodic(double bound, const PeriodicParams &p);
    static UncertaintyModel make_uniform(double bound);
    /// stddev defaults to bound / 2.
    static UncertaintyModel make_truncated_gaussian(double bound, double stddev = -1.0);

    void validate() const;

    /// Bound on |delta| implied by the componentwise bound: bound * sqrt(2)
    /// for the two-component kinds, 0 for none.
    double effective_norm_bound() const;
};

/// Draws per-trial frequencies uniformly in [omega_min, omega_max] and
/// phases uniformly in [-pi, pi].
PeriodicParams draw_periodic_params(std::mt19937_64 &rng, double omega_min = kPeriodicOmegaMin,
                                    double omega_max = kPeriodicOmegaMax);

/// Uncertainty held constant over step k. Deterministic in (model, k, stream).
CoeffVector sample_uncertainty(const UncertaintyModel &model, int k, double ts, const RngStream &stream);

}  // namespace qtompc

#endif
