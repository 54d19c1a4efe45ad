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
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "teleport/error.hpp"

namespace teleport {

/**
 * Uniform sampling of the frequency axis on [omega_min, omega_max].
 *
 * Measure convention shared by every module: a continuum amplitude f(w) is
 * stored as F_i = f(w_i) * sqrt(step()), so that sum_i |F_i|^2 approximates
 * the integral of |f|^2, and delta(w - w') becomes delta_ij / step().
 * Units are dimensionless (hbar = c = 1).
 */
class FrequencyGrid {
  public:
    FrequencyGrid(double omega_min, double omega_max, std::size_t n_points)
        : omega_min_(omega_min), omega_max_(omega_max), n_points_(n_points) {
        if (!std::isfinite(omega_min) || !std::isfinite(omega_max)) {
            throw Error(ErrorKind::InvalidArgument, "freqgrid", "grid bounds must be finite");
        }
        if (omega_min < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "freqgrid",
                        "omega_min must be >= 0 (Fock frequencies are positive)");
        }
        if (!(omega_max > omega_min)) {
            throw Error(ErrorKind::InvalidArgument, "freqgrid", "omega_max must exceed omega_min");
        }
        if (n_points < 2) {
            throw Error(ErrorKind::InvalidArgument, "freqgrid", "n_points must be >= 2");
        }
        step_ = (omega_max - omega_min) / static_cast<double>(n_points - 1);
    }

    [[nodiscard]] double omega_min() const noexcept { return omega_min_; }
    [[nodiscard]] double omega_max() const noexcept { return omega_max_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_points_; }
    [[nodiscard]] double step() const noexcept { return step_; }

    [[nodiscard]] double node(std::size_t i) const noexcept {
        return omega_min_ + static_cast<double>(i) * step_;
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> out(n_points_);
        for (std::size_t i = 0; i < n_points_; ++i) {
            out[i] = node(i);
        }
        return out;
    }

    /// Index of the node within `rel_tol * step()` of `omega`, if any.
    [[nodiscard]] std::optional<std::size_t> find_node(double omega, double rel_tol = 1e-9) const {
        const double x = (omega - omega_min_) / step_;
        const double r = std::round(x);
        if (!std::isfinite(x) || std::abs(x - r) > rel_tol || r < 0.0 ||
            r > static_cast<double>(n_points_ - 1)) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(r);
    }

    friend bool operator==(const FrequencyGrid &, const FrequencyGrid &) = default;

  private:
    double omega_min_;
    double omega_max_;
    std::size_t n_points_;
    double step_ = 0.0;
};

inline FrequencyGrid make_grid(double omega_min, double omega_max, std::size_t n_points) {
    return FrequencyGrid(omega_min, omega_max, n_points);
}

/**
 * Time nodes paired with a FrequencyGrid as its DFT dual:
 * step = 2*pi / (n * frequency step), t_k = (k - floor(n/2)) * step.
 *
 * With the full node set, (1/n) sum_k exp(i (w_a - w_b) t_k) = delta_ab for
 * every pair of grid frequencies. A truncated grid keeps the step but only the
 * first `size()` nodes; it exists to demonstrate the loss of that identity.
 */
class TimeGrid {
  public:
    static TimeGrid dual_of(const FrequencyGrid &grid) {
        const std::size_t n = grid.size();
        const double step = 2.0 * std::numbers::pi / (static_cast<double>(n) * grid.step());
        return TimeGrid(n, n, step);
    }

    [[nodiscard]] TimeGrid truncated(std::size_t count) const {
        if (count == 0 || count > count_) {
            throw Error(ErrorKind::InvalidArgument, "freqgrid",
                        "truncated time grid must keep between 1 and size() nodes");
        }
        return TimeGrid(n_points_, count, step_);
    }

    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] std::size_t full_size() const noexcept { return n_points_; }
    [[nodiscard]] bool is_complete() const noexcept { return count_ == n_points_; }
    [[nodiscard]] double step() const noexcept { return step_; }

    [[nodiscard]] double node(std::size_t k) const noexcept {
        return (static_cast<double>(k) - static_cast<double>(n_points_ / 2)) * step_;
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> out(count_);
        for (std::size_t k = 0; k < count_; ++k) {
            out[k] = node(k);
        }
        return out;
    }

    [[nodiscard]] std::optional<std::size_t> find_node(double t, double rel_tol = 1e-9) const {
        const double x = t / step_ + static_cast<double>(n_points_ / 2);
        const double r = std::round(x);
        if (!std::isfinite(x) || std::abs(x - r) > rel_tol || r < 0.0 ||
            r > static_cast<double>(count_ - 1)) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(r);
    }

    friend bool operator==(const TimeGrid &, const TimeGrid &) = default;

  private:
    TimeGrid(std::size_t n_points, std::size_t count, double step)
        : n_points_(n_points), count_(count), step_(step) {}

    std::size_t n_points_;
    std::size_t count_;
    double step_;
};

/**
 * All achievable sums w_i + w_j of a FrequencyGrid: 2n - 1 nodes starting at
 * 2*omega_min with the base step. These are the values the Omega_+ outcome of
 * the joint measurement can take.
 */
class SumFrequencyGrid {
  public:
    /// Inclusive range of first-channel indices i whose partner j = m - i is valid.
    struct PairRange {
        std::size_t first;
        std::size_t last;
        [[nodiscard]] std::size_t size() const noexcept { return last - first + 1; }
    };

    explicit SumFrequencyGrid(const FrequencyGrid &base) : base_(base) {}

    [[nodiscard]] const FrequencyGrid &base() const noexcept { return base_; }
    [[nodiscard]] std::size_t size() const noexcept { return 2 * base_.size() - 1; }
    [[nodiscard]] double step() const noexcept { return base_.step(); }

    [[nodiscard]] double node(std::size_t m) const noexcept {
        return 2.0 * base_.omega_min() + static_cast<double>(m) * base_.step();
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> out(size());
        for (std::size_t m = 0; m < out.size(); ++m) {
            out[m] = node(m);
        }
        return out;
    }

    [[nodiscard]] std::optional<std::size_t> find_node(double omega, double rel_tol = 1e-9) const {
        const double x = (omega - 2.0 * base_.omega_min()) / base_.step();
        const double r = std::round(x);
        if (!std::isfinite(x) || std::abs(x - r) > rel_tol || r < 0.0 ||
            r > static_cast<double>(size() - 1)) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(r);
    }

    [[nodiscard]] PairRange pairs(std::size_t m) const noexcept {
        const std::size_t n = base_.size();
        return {m >= n ? m - (n - 1) : 0, m < n ? m : n - 1};
    }

  private:
    FrequencyGrid base_;
};

/// Sum-node index and half-difference frequency (w_i - w_j) / 2 of a node pair.
struct SumDiff {
    std::size_t sum_index;
    double omega_minus;
};

inline SumDiff pair_to_sum_diff(const FrequencyGrid &grid, std::size_t i, std::size_t j) {
    if (i >= grid.size() || j >= grid.size()) {
        throw Error(ErrorKind::InvalidArgument, "freqgrid", "pair index out of range");
    }
    return {i + j, 0.5 * (grid.node(i) - grid.node(j))};
}

inline std::pair<std::size_t, std::size_t> sum_diff_to_pair(const FrequencyGrid &grid,
                                                            const SumDiff &sd) {
    // i - j = 2 * omega_minus / step, i + j = sum_index
    const double diff = std::round(2.0 * sd.omega_minus / grid.step());
    const double twice_i = static_cast<double>(sd.sum_index) + diff;
    const double twice_j = static_cast<double>(sd.sum_index) - diff;
    if (twice_i < 0.0 || twice_j < 0.0 || std::fmod(twice_i, 2.0) != 0.0) {
        throw Error(ErrorKind::InvalidArgument, "freqgrid", "sum/diff does not map to a node pair");
    }
    const auto i = static_cast<std::size_t>(twice_i / 2.0);
    const auto j = static_cast<std::size_t>(twice_j / 2.0);
    if (i >= grid.size() || j >= grid.size()) {
        throw Error(ErrorKind::InvalidArgument, "freqgrid", "sum/diff does not map to a node pair");
    }
    return {i, j};
}

} // namespace teleport
