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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"
#include "teleport/states.hpp"

// The two-crystal setup at leading order. Crystal 1 turns the filtered pump
// photon into a frequency-entangled pair (channels 1, 2). Crystal 2 merges the
// channel-1 photon with the unknown packet (channel 3) into an "out" photon,
// and a narrow filter plus detector projects "out" onto one frequency.
//
// Both crystals are represented by their single-vertex matrix elements with
// exact energy conservation on the grid (stationary, phase-matched limit).
// The global factor i per vertex is dropped. Pump, out and detector
// frequencies live on the SumFrequencyGrid.

namespace teleport {

struct SchemeConfig {
    FrequencyGrid grid;
    double chi = 0.0;
    double pump_frequency = 0.0;
    SinglePhotonAmplitude packet;
    std::optional<double> detector_frequency; // defaults to the pump

    [[nodiscard]] double detector() const { return detector_frequency.value_or(pump_frequency); }

    void validate() const {
        if (!(chi > 0.0) || !std::isfinite(chi)) {
            throw Error(ErrorKind::InvalidArgument, "scheme", "chi must be > 0");
        }
        if (!(packet.grid() == grid)) {
            throw Error(ErrorKind::InvalidArgument, "scheme", "packet grid differs from scheme grid");
        }
        if (!SumFrequencyGrid(grid).find_node(detector())) {
            throw Error(ErrorKind::OffGridDetector, "scheme",
                        "detector frequency is not a sum-grid node");
        }
    }
};

struct SchemeResult {
    double chi = 0.0;
    double pump = 0.0;
    double detector = 0.0;
    DensityMatrix channel2_state;    // unnormalized, carries chi^4
    double detection_weight = 0.0;   // trace of channel2_state
    DensityMatrix normalized_state;  // zero matrix when nothing is detected
    double fidelity = 0.0;           // against the t = 0 input packet
    std::vector<std::string> warnings;
};

namespace detail {

/// chi * sum over (i, j) with w_i + w_j = out node of in(out) |i>|j>.
inline CMatrix down_conversion_vertex(const FrequencyGrid &grid, const CVector &in_amps,
                                      double chi) {
    const SumFrequencyGrid sums(grid);
    const auto n = static_cast<Eigen::Index>(grid.size());
    CMatrix out = CMatrix::Zero(n, n);
    for (std::size_t s = 0; s < sums.size(); ++s) {
        const Complex a = in_amps[static_cast<Eigen::Index>(s)];
        if (a == Complex(0.0)) {
            continue;
        }
        const auto range = sums.pairs(s);
        for (std::size_t i = range.first; i <= range.last; ++i) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s - i)) += chi * a;
        }
    }
    return out;
}

/// Up-conversion of (channel 1, channel 3) into "out" for a fixed spectator
/// index: out(s) = chi * sum_{i + k = s} pair(i) packet(k).
inline CVector up_conversion_vertex(const FrequencyGrid &grid, const CVector &channel1,
                                    const CVector &channel3, double chi) {
    const SumFrequencyGrid sums(grid);
    CVector out = CVector::Zero(static_cast<Eigen::Index>(sums.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            out[static_cast<Eigen::Index>(i + k)] +=
                chi * channel1[static_cast<Eigen::Index>(i)] * channel3[static_cast<Eigen::Index>(k)];
        }
    }
    return out;
}

inline std::vector<std::string> support_warnings(const SchemeConfig &config) {
    std::vector<std::string> warnings = config.packet.warnings();
    const FrequencyGrid &grid = config.grid;
    const SumFrequencyGrid sums(grid);
    const auto pump = sums.find_node(config.pump_frequency);
    if (!pump) {
        return warnings;
    }
    // Channel-3 nodes a pump pair can reach at the tuned detector: k = j with
    // j = pump - i for i in the pump's pair range.
    const auto range = sums.pairs(*pump);
    const std::size_t lo = *pump - range.last;
    const std::size_t hi = *pump - range.first;
    const CVector &f = config.packet.amps();
    const double peak = f.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const bool outside = k < lo || k > hi || k == 0 || k + 1 == grid.size();
        if (outside && std::abs(f[static_cast<Eigen::Index>(k)]) >= 1e-8 * peak) {
            warnings.emplace_back("packet support touches the grid edge or leaves the pump window");
            break;
        }
    }
    return warnings;
}

} // namespace detail

/// First-order output of crystal 1 for the monochromatic pump: chi on every
/// pair (i, j) with w_i + w_j = pump.
inline TwoChannelAmplitude spdc_first_order(const SchemeConfig &config) {
    const SumFrequencyGrid sums(config.grid);
    const auto pump = sums.find_node(config.pump_frequency);
    if (!pump) {
        throw Error(ErrorKind::EmptyEpr, "scheme", "pump frequency is not an achievable pair sum");
    }
    CVector in = CVector::Zero(static_cast<Eigen::Index>(sums.size()));
    in[static_cast<Eigen::Index>(*pump)] = 1.0;
    return {config.grid, config.grid, detail::down_conversion_vertex(config.grid, in, config.chi)};
}

/**
 * Second-order amplitude of the full setup projected onto the detector
 * frequency. With the detector at the pump the channel-2 state is
 * chi^4 |f><f| and the detection weight is chi^4 sum |F|^2, independent of f.
 */
inline SchemeResult detune_detector(const SchemeConfig &config, double detector_frequency) {
    SchemeConfig cfg = config;
    cfg.detector_frequency = detector_frequency;
    cfg.validate();
    const SumFrequencyGrid sums(cfg.grid);
    const std::size_t det = *sums.find_node(detector_frequency);

    const TwoChannelAmplitude pair = spdc_first_order(cfg);
    const auto n = static_cast<Eigen::Index>(cfg.grid.size());
    CVector channel2(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const CVector out = detail::up_conversion_vertex(cfg.grid, pair.amps().col(j),
                                                         cfg.packet.amps(), cfg.chi);
        channel2[j] = out[static_cast<Eigen::Index>(det)];
    }

    DensityMatrix state(cfg.grid, channel2 * channel2.adjoint());
    const double weight = state.trace();
    DensityMatrix normalized = weight > 0.0 ? state.normalized()
                                            : DensityMatrix(cfg.grid, CMatrix::Zero(n, n));
    const double fid =
        weight > 0.0 ? fidelity(normalized, density_from_amplitude(cfg.packet, 0.0)) : 0.0;
    return SchemeResult{cfg.chi,          cfg.pump_frequency, detector_frequency,
                        std::move(state), weight,             std::move(normalized),
                        fid,              detail::support_warnings(cfg)};
}

inline SchemeResult run_scheme(const SchemeConfig &config) {
    return detune_detector(config, config.detector());
}

/// Least-squares slope of log(detection_weight) against log(chi).
inline double chi_scaling_exponent(const SchemeConfig &config, std::span<const double> chi_values) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (double chi : chi_values) {
        if (!(chi > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "scheme", "chi values must be > 0");
        }
        SchemeConfig cfg = config;
        cfg.chi = chi;
        const double w = run_scheme(cfg).detection_weight;
        if (!(w > 0.0)) {
            throw Error(ErrorKind::DegenerateFit, "scheme", "zero detection weight; log undefined");
        }
        xs.push_back(std::log(chi));
        ys.push_back(std::log(w));
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
        throw Error(ErrorKind::DegenerateFit, "scheme", "need at least two distinct chi values");
    }
    const auto count = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

} // namespace teleport
