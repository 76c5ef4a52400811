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

#include "qtompc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qtompc/error.hpp"

namespace qtompc {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string &key, const std::string &v) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    }
    return out;
}

int parse_int(const std::string &key, const std::string &v) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string &key, const std::string &v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError(key + ": expected an unsigned 64-bit integer, got '" + v + "'");
    }
    return out;
}

struct Field {
    std::function<void(ExperimentConfig &, const std::string &, const std::string &)> set;
    std::function<std::string(const ExperimentConfig &)> get;
};

template <typename T>
Field double_field(T ExperimentConfig::*m) {
    return {[m](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*m = parse_double(k, v); },
            [m](const ExperimentConfig &c) { return format_double(c.*m); }};
}

Field int_field(int ExperimentConfig::*m) {
    return {[m](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*m = parse_int(k, v); },
            [m](const ExperimentConfig &c) { return std::to_string(c.*m); }};
}

Field u64_field(std::uint64_t ExperimentConfig::*m) {
    return {[m](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*m = parse_u64(k, v); },
            [m](const ExperimentConfig &c) { return std::to_string(c.*m); }};
}

Field string_field(std::string ExperimentConfig::*m) {
    return {[m](ExperimentConfig &c, const std::string &, const std::string &v) { c.*m = v; },
            [m](const ExperimentConfig &c) { return c.*m; }};
}

const std::vector<std::pair<std::string, Field>> &fields() {
    static const std::vector<std::pair<std::string, Field>> f = {
        {"algorithm",
         {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
              try {
                  c.algorithm = parse_algorithm(v);
              } catch (const Error &e) {
                  throw ConfigError(k + ": " + e.what());
              }
          },
          [](const ExperimentConfig &c) { return std::string(algorithm_name(c.algorithm)); }}},
        {"r", double_field(&ExperimentConfig::r)},
        {"ts", double_field(&ExperimentConfig::ts)},
        {"control_axes", string_field(&ExperimentConfig::control_axes)},
        {"horizon", int_field(&ExperimentConfig::horizon)},
        {"theta", double_field(&ExperimentConfig::theta)},
        {"control_bound", double_field(&ExperimentConfig::control_bound)},
        {"terminal_tol", double_field(&ExperimentConfig::terminal_tol)},
        {"uncertainty",
         {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
              try {
                  c.uncertainty = parse_uncertainty_kind(v);
              } catch (const Error &e) {
                  throw ConfigError(k + ": " + e.what());
              }
          },
          [](const ExperimentConfig &c) { return std::string(uncertainty_kind_name(c.uncertainty)); }}},
        {"uncertainty_bound", double_field(&ExperimentConfig::uncertainty_bound)},
        {"gaussian_stddev", double_field(&ExperimentConfig::gaussian_stddev)},
        {"omega_min", double_field(&ExperimentConfig::omega_min)},
        {"omega_max", double_field(&ExperimentConfig::omega_max)},
        {"initial_state", string_field(&ExperimentConfig::initial_state)},
        {"target_state", string_field(&ExperimentConfig::target_state)},
        {"steps", int_field(&ExperimentConfig::steps)},
        {"trials", int_field(&ExperimentConfig::trials)},
        {"seed", u64_field(&ExperimentConfig::seed)},
        {"out_dir", string_field(&ExperimentConfig::out_dir)},
        {"threads", int_field(&ExperimentConfig::threads)},
        {"solver_restarts", int_field(&ExperimentConfig::solver_restarts)},
        {"solver_max_iterations", int_field(&ExperimentConfig::solver_max_iterations)},
        {"solver_seed", u64_field(&ExperimentConfig::solver_seed)},
        {"grape_max_iterations", int_field(&ExperimentConfig::grape_max_iterations)},
        {"grape_restarts", int_field(&ExperimentConfig::grape_restarts)},
        {"grape_seed", u64_field(&ExperimentConfig::grape_seed)},
    };
    return f;
}

const Field &field(const std::string &key) {
    for (const auto &[k, f] : fields()) {
        if (k == key) return f;
    }
    throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const char *algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::qtompc:
            return "qtompc";
        case Algorithm::tompc:
            return "tompc";
        case Algorithm::grape:
            return "grape";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string &text) {
    if (text == "qtompc") return Algorithm::qtompc;
    if (text == "tompc") return Algorithm::tompc;
    if (text == "grape") return Algorithm::grape;
    throw InvalidArgument("unknown algorithm '" + text + "'");
}

QubitState parse_state(const std::string &text) {
    const double h = 1.0 / std::sqrt(2.0);
    if (text == "0") return QubitState::zero();
    if (text == "1") return QubitState::one();
    if (text == "+") return QubitState(h, h);
    if (text == "-") return QubitState(h, -h);
    if (text == "+i") return QubitState(h, cplx(0.0, h));
    if (text == "-i") return QubitState(h, cplx(0.0, -h));
    throw InvalidArgument("unknown state '" + text + "' (expected 0, 1, +, -, +i or -i)");
}

void ExperimentConfig::validate() const {
    auto check = [](const std::string &key, auto &&fn) {
        try {
            fn();
        } catch (const ConfigError &) {
            throw;
        } catch (const Error &e) {
            throw ConfigError(key + ": " + e.what());
        }
    };
    check("control_axes", [&] { AxisSet::parse(control_axes); });
    check("model", [&] { model().validate(); });
    check("ocp", [&] { ocp_spec().validate(); });
    check("solver", [&] { solver_params().validate(); });
    check("grape", [&] { grape_params().validate(); });
    check("initial_state", [&] { parse_state(initial_state); });
    check("target_state", [&] { parse_state(target_state); });
    if (!(uncertainty_bound >= 0.0)) throw ConfigError("uncertainty_bound must be nonnegative");
    if (uncertainty == UncertaintyKind::periodic && !(omega_min <= omega_max)) {
        throw ConfigError("omega_min must not exceed omega_max");
    }
    if (gaussian_stddev == 0.0) throw ConfigError("gaussian_stddev must be positive (or negative for the default)");
    if (steps < 1) throw ConfigError("steps must be at least 1");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (threads < 0) throw ConfigError("threads must be nonnegative");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

NominalModel ExperimentConfig::model() const {
    NominalModel m;
    m.r = r;
    m.ts = ts;
    m.control_axes = AxisSet::parse(control_axes);
    return m;
}

OcpSpec ExperimentConfig::ocp_spec() const {
    OcpSpec s;
    s.horizon = horizon;
    s.theta = theta;
    s.bound = control_bound;
    s.model = model();
    s.target = parse_state(target_state);
    return s;
}

SolverParams ExperimentConfig::solver_params() const {
    SolverParams p;
    p.restarts = solver_restarts;
    p.max_iterations = solver_max_iterations;
    p.terminal_tol = terminal_tol;
    p.seed = solver_seed;
    return p;
}

GrapeParams ExperimentConfig::grape_params() const {
    GrapeParams p;
    p.steps = steps;
    p.bound = control_bound;
    p.max_iterations = grape_max_iterations;
    p.restarts = grape_restarts;
    p.seed = grape_seed;
    return p;
}

UncertaintyModel ExperimentConfig::uncertainty_model(const RngStream &trial_stream) const {
    switch (uncertainty) {
        case UncertaintyKind::none:
            return UncertaintyModel::none();
        case UncertaintyKind::periodic: {
            auto rng = trial_stream.child(2).at(0);
            return UncertaintyModel::make_periodic(uncertainty_bound, draw_periodic_params(rng, omega_min, omega_max));
        }
        case UncertaintyKind::uniform:
            return UncertaintyModel::make_uniform(uncertainty_bound);
        case UncertaintyKind::truncated_gaussian:
            return UncertaintyModel::make_truncated_gaussian(uncertainty_bound, gaussian_stddev);
    }
    return UncertaintyModel::none();
}

void ExperimentConfig::set(const std::string &key, const std::string &value) { field(key).set(*this, key, value); }

std::string ExperimentConfig::get(const std::string &key) const { return field(key).get(*this); }

const std::vector<std::string> &ExperimentConfig::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto &[name, f] : fields()) out.push_back(name);
        return out;
    }();
    return k;
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    for (const auto &[k, f] : fields()) out += k + " = " + f.get(*this) + "\n";
    return out;
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto &[k, f] : fields()) {
        if (k == "out_dir" || k == "threads") continue;
        for (char ch : k + "=" + f.get(*this) + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config(const std::string &text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        try {
            cfg.set(key, value);
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace qtompc
