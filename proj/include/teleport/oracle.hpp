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
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"
#include "teleport/outcome.hpp"
#include "teleport/states.hpp"

// Brute-force reference for the measurement. Everything here is built from
// grid frequencies by explicit loops: full n^2 x n^2 POVM matrices, the full
// n^3-dimensional three-photon density matrix, and literal traces. It must
// not include povm.hpp or scheme.hpp.

namespace teleport::oracle {

inline constexpr std::size_t kMaxDenseGrid = 12;
inline constexpr std::size_t kMaxCompletenessGrid = 8;

/// Pure state over an explicit channel list (channel labels 1, 2, 3).
struct DenseState {
    std::vector<int> channels;
    std::vector<std::size_t> dims;
    CVector amps;
};

namespace detail {

inline void guard(const FrequencyGrid &grid, std::size_t limit) {
    if (grid.size() > limit) {
        throw Error(ErrorKind::GridTooLarge, "oracle", "grid too large for the dense oracle");
    }
}

inline bool same_frequency(double a, double b, double step) { return std::abs(a - b) <= 1e-9 * step; }

} // namespace detail

/// |epr>_{1,2} (x) |packet>_3 with index (i * n2 + j) * n3 + k.
inline DenseState dense_product(const TwoChannelAmplitude &epr, const SinglePhotonAmplitude &packet) {
    const auto n1 = epr.amps().rows();
    const auto n2 = epr.amps().cols();
    const auto n3 = packet.amps().size();
    CVector v(n1 * n2 * n3);
    for (Eigen::Index i = 0; i < n1; ++i) {
        for (Eigen::Index j = 0; j < n2; ++j) {
            for (Eigen::Index k = 0; k < n3; ++k) {
                v[(i * n2 + j) * n3 + k] = epr.amps()(i, j) * packet.amps()[k];
            }
        }
    }
    return {{1, 2, 3},
            {static_cast<std::size_t>(n1), static_cast<std::size_t>(n2), static_cast<std::size_t>(n3)},
            std::move(v)};
}

/**
 * M(t, Omega_+) on channels 1 (x) 3, row/column index i * n + k, written out
 * entry by entry: nonzero iff both frequency pairs sum to Omega_+, with value
 * measure * exp(i w_- t) exp(-i w_-' t). measure = dt * dOmega_+ / (2 pi).
 */
inline CMatrix dense_povm_matrix(const FrequencyGrid &grid, const TimeGrid &times,
                                 const PovmOutcome &outcome) {
    detail::guard(grid, kMaxDenseGrid);
    const std::size_t n = grid.size();
    const double omega_plus = SumFrequencyGrid(grid).node(outcome.omega_plus_index);
    const double measure = times.step() * grid.step() / (2.0 * std::numbers::pi);
    const auto dim = static_cast<Eigen::Index>(n * n);
    CMatrix m = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!detail::same_frequency(grid.node(i) + grid.node(k), omega_plus, grid.step())) {
                continue;
            }
            const double wm = 0.5 * (grid.node(i) - grid.node(k));
            for (std::size_t ip = 0; ip < n; ++ip) {
                for (std::size_t kp = 0; kp < n; ++kp) {
                    if (!detail::same_frequency(grid.node(ip) + grid.node(kp), omega_plus,
                                                grid.step())) {
                        continue;
                    }
                    const double wmp = 0.5 * (grid.node(ip) - grid.node(kp));
                    m(static_cast<Eigen::Index>(i * n + k), static_cast<Eigen::Index>(ip * n + kp)) =
                        measure * std::exp(Complex(0.0, wm * outcome.t)) *
                        std::exp(Complex(0.0, -wmp * outcome.t));
                }
            }
        }
    }
    return m;
}

inline CMatrix dense_povm_matrix(const FrequencyGrid &grid, const PovmOutcome &outcome) {
    return dense_povm_matrix(grid, TimeGrid::dual_of(grid), outcome);
}

/// Unnormalized Tr_{1,3}{ rho_{123} M } and its trace (the outcome weight).
struct DenseConditioned {
    DensityMatrix unnormalized;
    double weight;
};

inline DenseConditioned dense_condition_unnormalized(const FrequencyGrid &grid,
                                                     const TwoChannelAmplitude &epr,
                                                     const SinglePhotonAmplitude &packet,
                                                     const PovmOutcome &outcome) {
    detail::guard(grid, kMaxDenseGrid);
    if (!(epr.first_grid() == grid) || !(packet.grid() == grid)) {
        throw Error(ErrorKind::InvalidArgument, "oracle", "inputs must live on the oracle grid");
    }
    const DenseState psi = dense_product(epr, packet);
    const CMatrix rho = psi.amps * psi.amps.adjoint();
    const CMatrix m = dense_povm_matrix(grid, outcome);
    const std::size_t n1 = psi.dims[0];
    const std::size_t n2 = psi.dims[1];
    const std::size_t n3 = psi.dims[2];
    auto idx = [&](std::size_t i, std::size_t j, std::size_t k) {
        return static_cast<Eigen::Index>((i * n2 + j) * n3 + k);
    };
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n2), static_cast<Eigen::Index>(n2));
    // (rho (M (x) 1_2))_{(i a k),(i' b k')} traced over i = i', k = k'.
    for (std::size_t a = 0; a < n2; ++a) {
        for (std::size_t b = 0; b < n2; ++b) {
            Complex acc = 0.0;
            for (std::size_t i = 0; i < n1; ++i) {
                for (std::size_t k = 0; k < n3; ++k) {
                    for (std::size_t ip = 0; ip < n1; ++ip) {
                        for (std::size_t kp = 0; kp < n3; ++kp) {
                            acc += rho(idx(i, a, k), idx(ip, b, kp)) *
                                   m(static_cast<Eigen::Index>(ip * n3 + kp),
                                     static_cast<Eigen::Index>(i * n3 + k));
                        }
                    }
                }
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    const double weight = out.trace().real();
    return {DensityMatrix(epr.second_grid(), std::move(out)), weight};
}

inline double dense_weight(const FrequencyGrid &grid, const TwoChannelAmplitude &epr,
                           const SinglePhotonAmplitude &packet, const PovmOutcome &outcome) {
    return dense_condition_unnormalized(grid, epr, packet, outcome).weight;
}

/// Channel-2 state after the outcome, normalized by the outcome weight.
inline DensityMatrix dense_condition(const FrequencyGrid &grid, const TwoChannelAmplitude &epr,
                                     const SinglePhotonAmplitude &packet, const PovmOutcome &outcome) {
    auto res = dense_condition_unnormalized(grid, epr, packet, outcome);
    if (!(res.weight > 0.0)) {
        throw Error(ErrorKind::ZeroWeightOutcome, "oracle", "outcome has zero weight");
    }
    return {res.unnormalized.grid(), res.unnormalized.mat() / res.weight};
}

/// Largest singular value of (sum of all dense POVM matrices - I).
inline double dense_completeness(const FrequencyGrid &grid, const TimeGrid &times) {
    detail::guard(grid, kMaxCompletenessGrid);
    const SumFrequencyGrid sums(grid);
    const auto dim = static_cast<Eigen::Index>(grid.size() * grid.size());
    CMatrix total = CMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t m = 0; m < sums.size(); ++m) {
            total += dense_povm_matrix(grid, times, PovmOutcome{times.node(k), m});
        }
    }
    total -= CMatrix::Identity(dim, dim);
    Eigen::JacobiSVD<CMatrix> svd(total);
    return svd.singularValues()[0];
}

inline double dense_completeness(const FrequencyGrid &grid) {
    return dense_completeness(grid, TimeGrid::dual_of(grid));
}

} // namespace teleport::oracle
