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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"
#include "teleport/povm.hpp"
#include "teleport/scheme.hpp"
#include "teleport/states.hpp"

// JSON and CSV forms of simulator values. Complex numbers are [re, im]
// pairs. JSON doubles are written in nlohmann's shortest round-trip form;
// CSV fields use 17 significant digits.

namespace teleport {

using Json = nlohmann::json;

inline std::string format_number(double x) { return fmt::format("{:.17g}", x); }

inline Json to_json(const FrequencyGrid &grid) {
    return {{"omega_min", grid.omega_min()}, {"omega_max", grid.omega_max()}, {"n_points", grid.size()}};
}

inline FrequencyGrid grid_from_json(const Json &j) {
    return {j.at("omega_min").get<double>(), j.at("omega_max").get<double>(),
            j.at("n_points").get<std::size_t>()};
}

namespace detail {

inline Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from(const Json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorKind::InvalidArgument, "states", "complex value must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

inline Json to_json(const SinglePhotonAmplitude &psi) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < psi.amps().size(); ++i) {
        amps.push_back(detail::complex_pair(psi.amps()[i]));
    }
    return {{"grid", to_json(psi.grid())}, {"amps", std::move(amps)}};
}

inline SinglePhotonAmplitude amplitude_from_json(const Json &j) {
    FrequencyGrid grid = grid_from_json(j.at("grid"));
    const Json &amps = j.at("amps");
    CVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = detail::complex_from(amps[i]);
    }
    return {std::move(grid), std::move(v)};
}

inline Json to_json(const DensityMatrix &rho) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < rho.mat().rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < rho.mat().cols(); ++c) {
            row.push_back(detail::complex_pair(rho.mat()(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return {{"grid", to_json(rho.grid())}, {"mat", std::move(rows)}};
}

inline DensityMatrix density_from_json(const Json &j) {
    FrequencyGrid grid = grid_from_json(j.at("grid"));
    const Json &rows = j.at("mat");
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const Json &row = rows[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != n) {
            throw Error(ErrorKind::InvalidArgument, "states", "density matrix rows must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = detail::complex_from(row[static_cast<std::size_t>(c)]);
        }
    }
    return {std::move(grid), std::move(m)};
}

/// {seed, outcome: {t, omega_plus}, weight, fidelity_before, fidelity_after};
/// `weight` is the normalized probability of the registered lattice cell.
inline Json to_json(const ProtocolRecord &rec) {
    return {{"seed", rec.seed ? Json(*rec.seed) : Json(nullptr)},
            {"outcome", {{"t", rec.outcome.t}, {"omega_plus", rec.omega_plus}}},
            {"weight", rec.normalized_weight},
            {"fidelity_before", rec.fidelity_before},
            {"fidelity_after", rec.fidelity_after}};
}

inline std::string distribution_csv(const OutcomeDistribution &dist) {
    std::string out = "t,omega_plus,weight,normalized_weight\n";
    for (std::size_t k = 0; k < dist.times().size(); ++k) {
        for (std::size_t m = 0; m < dist.sums().size(); ++m) {
            out += fmt::format("{},{},{},{}\n", format_number(dist.times().node(k)),
                               format_number(dist.sums().node(m)), format_number(dist.weight(k, m)),
                               format_number(dist.normalized(k, m)));
        }
    }
    return out;
}

inline Json to_json(const SchemeResult &res) {
    return {{"chi", res.chi},
            {"pump", res.pump},
            {"detector", res.detector},
            {"detection_weight", res.detection_weight},
            {"fidelity", res.fidelity}};
}

inline std::string scheme_sweep_csv(std::span<const SchemeResult> rows) {
    std::string out = "detector_frequency,detection_weight,fidelity\n";
    for (const auto &r : rows) {
        out += fmt::format("{},{},{}\n", format_number(r.detector), format_number(r.detection_weight),
                           format_number(r.fidelity));
    }
    return out;
}

struct DetuningRow {
    double detuning = 0.0;
    double weight = 0.0; // normalized probability of the lattice cell
    double fidelity_before = 0.0;
    double fidelity_after = 0.0;
};

inline std::string detuning_sweep_csv(std::span<const DetuningRow> rows) {
    std::string out = "detuning,weight,fidelity_before,fidelity_after\n";
    for (const auto &r : rows) {
        out += fmt::format("{},{},{},{}\n", format_number(r.detuning), format_number(r.weight),
                           format_number(r.fidelity_before), format_number(r.fidelity_after));
    }
    return out;
}

inline Json to_json(const DetuningRow &r) {
    return {{"detuning", r.detuning},
            {"weight", r.weight},
            {"fidelity_before", r.fidelity_before},
            {"fidelity_after", r.fidelity_after}};
}

} // namespace teleport
