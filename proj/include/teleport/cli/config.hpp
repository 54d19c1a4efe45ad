// Copyright 2026 The packet-teleport Authors
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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"
#include "teleport/povm.hpp"
#include "teleport/scheme.hpp"
#include "teleport/states.hpp"

// Run configuration for the command-line front end.
//
// Schema (every key optional; defaults shown):
//   {
//     "grid":    {"omega_min": 0, "omega_max": 10, "n_points": 6},
//     "pump":    omega_min + omega_max,
//     "packet":  {"shape": "gaussian" | "lorentzian" | "monochromatic",
//                 "center": 5, "width": 0.8},
//     "epr":     {"envelope": "flat"} | {"envelope": "gaussian", "center": c, "width": w},
//     "chi":     [0.01, 0.02, 0.04]   (or a single number),
//     "detector": pump,
//     "outcome": {"policy": "fixed", "t": 0, "omega_plus": pump}
//              | {"policy": "sample", "seed": 0},
//     "sweep":   {"detuning_min": 0, "detuning_max": 2 * step, "steps": 3},
//     "output":  {"path": null, "format": null}
//   }

namespace teleport::cli {

using Json = nlohmann::json;

inline Error config_error(const std::string &field, const std::string &message) {
    return Error(ErrorKind::Config, "cli", message, field);
}

struct PacketSpec {
    std::string shape = "gaussian";
    double center = 5.0;
    double width = 0.8;
};

struct EnvelopeSpec {
    std::string kind = "flat";
    double center = 0.0;
    double width = 0.0;
};

struct SweepSpec {
    double detuning_min = 0.0;
    std::optional<double> detuning_max;
    std::size_t steps = 3;
};

struct RunConfig {
    double omega_min = 0.0;
    double omega_max = 10.0;
    std::size_t n_points = 6;
    std::optional<double> pump;
    PacketSpec packet;
    EnvelopeSpec epr;
    std::vector<double> chi{0.01, 0.02, 0.04};
    std::optional<double> detector;
    std::string policy = "fixed";
    double outcome_t = 0.0;
    std::optional<double> outcome_omega_plus;
    std::uint64_t seed = 0;
    SweepSpec sweep;
    std::optional<std::string> output_path;
    std::optional<std::string> output_format;
    bool truncate_time_grid = false;

    [[nodiscard]] FrequencyGrid grid() const { return {omega_min, omega_max, n_points}; }
    [[nodiscard]] double pump_frequency() const { return pump.value_or(omega_min + omega_max); }
    [[nodiscard]] double detector_frequency() const { return detector.value_or(pump_frequency()); }

    [[nodiscard]] SinglePhotonAmplitude make_packet() const {
        const FrequencyGrid g = grid();
        if (packet.shape == "gaussian") {
            return gaussian_packet(g, packet.center, packet.width);
        }
        if (packet.shape == "lorentzian") {
            return lorentzian_packet(g, packet.center, packet.width);
        }
        return monochromatic_state(g, packet.center);
    }

    [[nodiscard]] EprSpec epr_spec() const {
        EprSpec spec{pump_frequency(), std::nullopt};
        if (epr.kind == "gaussian") {
            const FrequencyGrid g = grid();
            std::vector<double> env(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.node(i) - epr.center;
                env[i] = std::exp(-x * x / (4.0 * epr.width * epr.width));
            }
            spec.envelope = std::move(env);
        }
        return spec;
    }

    [[nodiscard]] OutcomePolicy outcome_policy() const {
        if (policy == "sample") {
            return SampledOutcome{seed};
        }
        return FixedOutcome{outcome_t, outcome_omega_plus.value_or(pump_frequency())};
    }

    [[nodiscard]] SchemeConfig scheme_config(double chi_value) const {
        return SchemeConfig{grid(), chi_value, pump_frequency(), make_packet(), detector_frequency()};
    }

    /// Detuning points min + s * (max - min) / (steps - 1), in parameter order.
    [[nodiscard]] std::vector<double> detunings() const {
        const double lo = sweep.detuning_min;
        const double hi = sweep.detuning_max.value_or(lo + 2.0 * grid().step());
        std::vector<double> out;
        if (sweep.steps == 1) {
            out.push_back(lo);
            return out;
        }
        for (std::size_t s = 0; s < sweep.steps; ++s) {
            out.push_back(lo + static_cast<double>(s) * (hi - lo) / static_cast<double>(sweep.steps - 1));
        }
        return out;
    }
};

namespace detail {

inline void reject_unknown(const Json &obj, const std::string &prefix,
                           const std::set<std::string> &allowed) {
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw config_error(prefix + key, "unknown configuration key");
        }
    }
}

inline const Json &object_at(const Json &j, const std::string &key, const std::string &field) {
    const Json &v = j.at(key);
    if (!v.is_object()) {
        throw config_error(field, "expected an object");
    }
    return v;
}

inline double number(const Json &v, const std::string &field) {
    if (!v.is_number()) {
        throw config_error(field, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw config_error(field, "expected a finite number");
    }
    return x;
}

inline std::uint64_t unsigned_integer(const Json &v, const std::string &field) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw config_error(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline std::string string(const Json &v, const std::string &field,
                          const std::set<std::string> &allowed) {
    if (!v.is_string()) {
        throw config_error(field, "expected a string");
    }
    auto s = v.get<std::string>();
    if (!allowed.contains(s)) {
        throw config_error(field, "unsupported value '" + s + "'");
    }
    return s;
}

} // namespace detail

/// Reads a RunConfig from JSON. Errors name the offending field ("grid.n_points").
inline RunConfig parse_config(const Json &j) {
    using namespace detail;
    RunConfig cfg;
    if (!j.is_object()) {
        throw config_error("config", "configuration must be a JSON object");
    }
    reject_unknown(j, "", {"grid", "pump", "packet", "epr", "chi", "detector", "outcome", "sweep", "output"});

    if (j.contains("grid")) {
        const Json &g = object_at(j, "grid", "grid");
        reject_unknown(g, "grid.", {"omega_min", "omega_max", "n_points"});
        if (g.contains("omega_min")) cfg.omega_min = number(g["omega_min"], "grid.omega_min");
        if (g.contains("omega_max")) cfg.omega_max = number(g["omega_max"], "grid.omega_max");
        if (g.contains("n_points")) {
            cfg.n_points = static_cast<std::size_t>(unsigned_integer(g["n_points"], "grid.n_points"));
        }
    }
    if (j.contains("pump")) cfg.pump = number(j["pump"], "pump");
    if (j.contains("packet")) {
        const Json &p = object_at(j, "packet", "packet");
        reject_unknown(p, "packet.", {"shape", "center", "width"});
        if (p.contains("shape")) {
            cfg.packet.shape = string(p["shape"], "packet.shape", {"gaussian", "lorentzian", "monochromatic"});
        }
        if (p.contains("center")) cfg.packet.center = number(p["center"], "packet.center");
        if (p.contains("width")) cfg.packet.width = number(p["width"], "packet.width");
    }
    if (j.contains("epr")) {
        const Json &e = object_at(j, "epr", "epr");
        reject_unknown(e, "epr.", {"envelope", "center", "width"});
        if (e.contains("envelope")) cfg.epr.kind = string(e["envelope"], "epr.envelope", {"flat", "gaussian"});
        if (e.contains("center")) cfg.epr.center = number(e["center"], "epr.center");
        if (e.contains("width")) cfg.epr.width = number(e["width"], "epr.width");
    }
    if (j.contains("chi")) {
        const Json &c = j["chi"];
        cfg.chi.clear();
        if (c.is_array()) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                cfg.chi.push_back(number(c[i], "chi[" + std::to_string(i) + "]"));
            }
        } else {
            cfg.chi.push_back(number(c, "chi"));
        }
    }
    if (j.contains("detector")) cfg.detector = number(j["detector"], "detector");
    if (j.contains("outcome")) {
        const Json &o = object_at(j, "outcome", "outcome");
        reject_unknown(o, "outcome.", {"policy", "t", "omega_plus", "seed"});
        if (o.contains("policy")) cfg.policy = string(o["policy"], "outcome.policy", {"fixed", "sample"});
        if (o.contains("t")) cfg.outcome_t = number(o["t"], "outcome.t");
        if (o.contains("omega_plus")) cfg.outcome_omega_plus = number(o["omega_plus"], "outcome.omega_plus");
        if (o.contains("seed")) cfg.seed = unsigned_integer(o["seed"], "outcome.seed");
    }
    if (j.contains("sweep")) {
        const Json &s = object_at(j, "sweep", "sweep");
        reject_unknown(s, "sweep.", {"detuning_min", "detuning_max", "steps"});
        if (s.contains("detuning_min")) cfg.sweep.detuning_min = number(s["detuning_min"], "sweep.detuning_min");
        if (s.contains("detuning_max")) cfg.sweep.detuning_max = number(s["detuning_max"], "sweep.detuning_max");
        if (s.contains("steps")) {
            cfg.sweep.steps = static_cast<std::size_t>(unsigned_integer(s["steps"], "sweep.steps"));
        }
    }
    if (j.contains("output")) {
        const Json &o = object_at(j, "output", "output");
        reject_unknown(o, "output.", {"path", "format"});
        if (o.contains("path") && !o["path"].is_null()) {
            if (!o["path"].is_string()) throw config_error("output.path", "expected a string");
            cfg.output_path = o["path"].get<std::string>();
        }
        if (o.contains("format") && !o["format"].is_null()) {
            cfg.output_format = string(o["format"], "output.format", {"csv", "json"});
        }
    }
    return cfg;
}

/**
 * Builds every nested object once through the module constructors so that
 * bad values surface as configuration errors before any computation.
 */
inline void validate(const RunConfig &cfg) {
    auto guarded = [](const std::string &field, auto &&fn) {
        try {
            fn();
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::Config) {
                throw;
            }
            throw Error(ErrorKind::Config, e.component(), e.what(), field);
        }
    };
    guarded("grid", [&] { (void)cfg.grid(); });
    guarded("packet", [&] { (void)cfg.make_packet(); });
    if (cfg.epr.kind == "gaussian" && !(cfg.epr.width > 0.0)) {
        throw config_error("epr.width", "gaussian envelope width must be > 0");
    }
    guarded("pump", [&] { (void)epr_state(cfg.grid(), cfg.epr_spec()); });
    if (cfg.chi.empty()) {
        throw config_error("chi", "at least one chi value is required");
    }
    for (std::size_t i = 0; i < cfg.chi.size(); ++i) {
        if (!(cfg.chi[i] > 0.0)) {
            throw config_error("chi[" + std::to_string(i) + "]", "chi must be > 0");
        }
    }
    guarded("detector", [&] { cfg.scheme_config(cfg.chi.front()).validate(); });
    if (cfg.policy == "fixed") {
        guarded("outcome", [&] {
            const auto fixed = std::get<FixedOutcome>(cfg.outcome_policy());
            (void)PovmOutcome::at(cfg.grid(), fixed.t, fixed.omega_plus);
        });
    }
    if (cfg.sweep.steps == 0) {
        throw config_error("sweep.steps", "empty detuning range");
    }
    const SumFrequencyGrid sums(cfg.grid());
    for (double d : cfg.detunings()) {
        if (!sums.find_node(cfg.pump_frequency() - d)) {
            throw config_error("sweep", "detuning " + std::to_string(d) + " leaves the sum grid");
        }
    }
}

} // namespace teleport::cli
