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
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"
#include "teleport/outcome.hpp"
#include "teleport/states.hpp"

namespace teleport {

/// Lattice weight dt * dOmega_+ / (2 pi) attached to every POVM element.
inline double outcome_measure(const FrequencyGrid &grid, const TimeGrid &times) {
    return times.step() * grid.step() / (2.0 * std::numbers::pi);
}

/**
 * Ket factor R of the rank-one POVM element M = |R><R| * outcome_measure.
 * Supported on the pairs (i, k) with w_i + w_k = Omega_+, where the entry is
 * exp(i w_- t) with w_- = (w_i - w_k) / 2 (channel 1 index i, channel 3 index k).
 */
class ReductionVector {
  public:
    ReductionVector(const FrequencyGrid &grid, const PovmOutcome &outcome)
        : grid_(grid), outcome_(outcome) {
        const SumFrequencyGrid sums(grid);
        if (outcome.omega_plus_index >= sums.size() || !std::isfinite(outcome.t)) {
            throw Error(ErrorKind::InvalidArgument, "povm", "invalid POVM outcome");
        }
        range_ = sums.pairs(outcome.omega_plus_index);
        entries_.reserve(range_.size());
        for (std::size_t i = range_.first; i <= range_.last; ++i) {
            const auto sd = pair_to_sum_diff(grid, i, outcome.omega_plus_index - i);
            entries_.push_back(std::polar(1.0, sd.omega_minus * outcome.t));
        }
    }

    [[nodiscard]] const FrequencyGrid &grid() const noexcept { return grid_; }
    [[nodiscard]] const PovmOutcome &outcome() const noexcept { return outcome_; }
    [[nodiscard]] SumFrequencyGrid::PairRange pair_range() const noexcept { return range_; }
    /// entries()[r] multiplies |w_i>_1 |w_{m-i}>_3 with i = pair_range().first + r.
    [[nodiscard]] const std::vector<Complex> &entries() const noexcept { return entries_; }

    /// Dense vector over channel 1 (x) channel 3, index i * n + k.
    [[nodiscard]] CVector to_dense() const {
        const std::size_t n = grid_.size();
        CVector v = CVector::Zero(static_cast<Eigen::Index>(n * n));
        for (std::size_t r = 0; r < entries_.size(); ++r) {
            const std::size_t i = range_.first + r;
            const std::size_t k = outcome_.omega_plus_index - i;
            v[static_cast<Eigen::Index>(i * n + k)] = entries_[r];
        }
        return v;
    }

  private:
    FrequencyGrid grid_;
    PovmOutcome outcome_;
    SumFrequencyGrid::PairRange range_{};
    std::vector<Complex> entries_;
};

inline ReductionVector reduction_vector(const FrequencyGrid &grid, const PovmOutcome &outcome) {
    return {grid, outcome};
}

/// Materialized POVM element on channels 1 (x) 3. Only for inspection; the
/// measurement code works with the rank-one factor.
inline CMatrix povm_element(const FrequencyGrid &grid, const TimeGrid &times,
                            const PovmOutcome &outcome) {
    const CVector r = reduction_vector(grid, outcome).to_dense();
    return outcome_measure(grid, times) * (r * r.adjoint());
}

/**
 * Operator norm of (sum over the lattice of M(t_k, Omega_+) - I) on 1 (x) 3.
 * Elements with different Omega_+ have disjoint support, so the sum is block
 * diagonal by sum node and the norm is the largest block norm.
 */
inline double completeness_defect(const FrequencyGrid &grid, const TimeGrid &times) {
    const SumFrequencyGrid sums(grid);
    const double w = outcome_measure(grid, times);
    double defect = 0.0;
    for (std::size_t m = 0; m < sums.size(); ++m) {
        const auto range = sums.pairs(m);
        const auto len = static_cast<Eigen::Index>(range.size());
        std::vector<double> omega_minus(range.size());
        for (std::size_t r = 0; r < range.size(); ++r) {
            omega_minus[r] = pair_to_sum_diff(grid, range.first + r, m - range.first - r).omega_minus;
        }
        CMatrix block = CMatrix::Zero(len, len);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double t = times.node(k);
            for (Eigen::Index a = 0; a < len; ++a) {
                for (Eigen::Index b = 0; b < len; ++b) {
                    block(a, b) += w * std::polar(1.0, (omega_minus[static_cast<std::size_t>(a)] -
                                                        omega_minus[static_cast<std::size_t>(b)]) * t);
                }
            }
        }
        block -= CMatrix::Identity(len, len);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(detail::hermitian_part(block),
                                                  Eigen::EigenvaluesOnly);
        defect = std::max(defect, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return defect;
}

inline double completeness_defect(const FrequencyGrid &grid) {
    return completeness_defect(grid, TimeGrid::dual_of(grid));
}

/// What Alice sends Bob. A silent message carries no time or frequency.
struct ClassicalMessage {
    bool fired = false;
    std::optional<double> t;
    std::optional<double> omega_plus;

    static ClassicalMessage fired_at(double t, double omega_plus) { return {true, t, omega_plus}; }
    static ClassicalMessage silent() { return {}; }
};

namespace detail {

inline void check_measurement_inputs(const TwoChannelAmplitude &epr,
                                     const SinglePhotonAmplitude &packet) {
    if (!(epr.first_grid() == packet.grid())) {
        throw Error(ErrorKind::InvalidArgument, "povm",
                    "EPR channel 1 and the packet channel must share a grid");
    }
}

/// (<R| (x) 1_2) |epr (x) packet>: channel-2 amplitude left after outcome `m`
/// at time `t`. Summation runs over pairs in increasing channel-1 index.
inline CVector conditioned_amplitude(const TwoChannelAmplitude &epr,
                                     const SinglePhotonAmplitude &packet, std::size_t m,
                                     double t) {
    const FrequencyGrid &grid = packet.grid();
    const auto range = SumFrequencyGrid(grid).pairs(m);
    const CMatrix &a = epr.amps();
    const CVector &f = packet.amps();
    CVector phi = CVector::Zero(a.cols());
    for (std::size_t i = range.first; i <= range.last; ++i) {
        const std::size_t k = m - i;
        const double omega_minus = pair_to_sum_diff(grid, i, k).omega_minus;
        const Complex coeff = std::polar(1.0, -omega_minus * t) * f[static_cast<Eigen::Index>(k)];
        phi += coeff * a.row(static_cast<Eigen::Index>(i)).transpose();
    }
    return phi;
}

} // namespace detail

/**
 * Relative outcome weights over the lattice TimeGrid x SumFrequencyGrid.
 * Rows are time nodes, columns are sum nodes. The EPR state is improper, so
 * only normalized weights carry physical meaning.
 */
class OutcomeDistribution {
  public:
    OutcomeDistribution(TimeGrid times, SumFrequencyGrid sums, Eigen::MatrixXd weights)
        : times_(times), sums_(std::move(sums)), weights_(std::move(weights)),
          total_(weights_.sum()) {
        if (!(total_ > 0.0)) {
            throw Error(ErrorKind::ZeroTotal, "povm", "outcome distribution has zero total weight");
        }
    }

    [[nodiscard]] const TimeGrid &times() const noexcept { return times_; }
    [[nodiscard]] const SumFrequencyGrid &sums() const noexcept { return sums_; }
    [[nodiscard]] const Eigen::MatrixXd &weights() const noexcept { return weights_; }
    [[nodiscard]] double total() const noexcept { return total_; }

    [[nodiscard]] double weight(std::size_t k, std::size_t m) const {
        return weights_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
    }
    [[nodiscard]] double normalized(std::size_t k, std::size_t m) const { return weight(k, m) / total_; }

    /// Draws a cell with probability normalized(k, m) from a 53-bit uniform variate.
    [[nodiscard]] std::pair<std::size_t, std::size_t> sample(std::mt19937_64 &rng) const {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double target = u * total_;
        double cumulative = 0.0;
        std::optional<std::pair<std::size_t, std::size_t>> last_nonzero;
        for (std::size_t k = 0; k < times_.size(); ++k) {
            for (std::size_t m = 0; m < sums_.size(); ++m) {
                const double w = weight(k, m);
                if (w <= 0.0) {
                    continue;
                }
                cumulative += w;
                last_nonzero = {k, m};
                if (cumulative > target) {
                    return *last_nonzero;
                }
            }
        }
        return *last_nonzero;
    }

  private:
    TimeGrid times_;
    SumFrequencyGrid sums_;
    Eigen::MatrixXd weights_;
    double total_;
};

/// weight(t, Omega_+) = outcome_measure * || (<R| (x) 1_2) |epr (x) packet> ||^2.
inline OutcomeDistribution outcome_distribution(const TwoChannelAmplitude &epr,
                                                const SinglePhotonAmplitude &packet,
                                                const TimeGrid &times) {
    detail::check_measurement_inputs(epr, packet);
    const SumFrequencyGrid sums(packet.grid());
    const double w = outcome_measure(packet.grid(), times);
    Eigen::MatrixXd weights(static_cast<Eigen::Index>(times.size()),
                            static_cast<Eigen::Index>(sums.size()));
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t m = 0; m < sums.size(); ++m) {
            weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) =
                w * detail::conditioned_amplitude(epr, packet, m, times.node(k)).squaredNorm();
        }
    }
    return {times, sums, std::move(weights)};
}

inline OutcomeDistribution outcome_distribution(const TwoChannelAmplitude &epr,
                                                const SinglePhotonAmplitude &packet) {
    return outcome_distribution(epr, packet, TimeGrid::dual_of(packet.grid()));
}

/// Lattice weight of a single outcome on the DFT-dual time grid.
inline double outcome_weight(const TwoChannelAmplitude &epr, const SinglePhotonAmplitude &packet,
                             const PovmOutcome &outcome) {
    detail::check_measurement_inputs(epr, packet);
    if (outcome.omega_plus_index >= SumFrequencyGrid(packet.grid()).size()) {
        throw Error(ErrorKind::InvalidArgument, "povm", "Omega_+ index out of range");
    }
    const double w = outcome_measure(packet.grid(), TimeGrid::dual_of(packet.grid()));
    return w * detail::conditioned_amplitude(epr, packet, outcome.omega_plus_index, outcome.t)
                   .squaredNorm();
}

/**
 * Channel-2 state after the outcome, Tr_{1,3}{rho M} divided by the outcome
 * weight (unit trace). For the flat pair this is the packet shifted by
 * Omega - Omega_+ with phase exp(-i (w_1 - Omega_+/2) t) on each component.
 */
inline DensityMatrix condition_on_outcome(const TwoChannelAmplitude &epr,
                                          const SinglePhotonAmplitude &packet,
                                          const PovmOutcome &outcome) {
    detail::check_measurement_inputs(epr, packet);
    if (outcome.omega_plus_index >= SumFrequencyGrid(packet.grid()).size()) {
        throw Error(ErrorKind::InvalidArgument, "povm", "Omega_+ index out of range");
    }
    const CVector phi =
        detail::conditioned_amplitude(epr, packet, outcome.omega_plus_index, outcome.t);
    const double n2 = phi.squaredNorm();
    if (!(n2 > 0.0)) {
        throw Error(ErrorKind::ZeroWeightOutcome, "povm", "outcome has zero weight");
    }
    return {epr.second_grid(), (phi * phi.adjoint()) / n2};
}

/// Sign s of Bob's correction U(t) = diag(exp(i s w t)). Fixed by contracting
/// the pair with the reduction vector (checked against the dense oracle).
inline constexpr int kPhaseCorrectionSign = -1;

/// Conjugates the channel-2 state by U(t) using the time carried in `msg`.
inline DensityMatrix phase_correct(const DensityMatrix &rho, const ClassicalMessage &msg) {
    if (!msg.fired || !msg.t) {
        throw Error(ErrorKind::NotFired, "povm", "no registration time: detector did not fire");
    }
    const auto n = static_cast<Eigen::Index>(rho.grid().size());
    CVector u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u[i] = std::polar(1.0, kPhaseCorrectionSign * rho.grid().node(static_cast<std::size_t>(i)) * *msg.t);
    }
    return {rho.grid(), u.asDiagonal() * rho.mat() * u.conjugate().asDiagonal()};
}

struct FixedOutcome {
    double t = 0.0;
    double omega_plus = 0.0;
};

struct SampledOutcome {
    std::uint64_t seed = 0;
};

using OutcomePolicy = std::variant<FixedOutcome, SampledOutcome>;

/// Everything one protocol run produces, in the order the protocol runs.
struct ProtocolRecord {
    std::optional<std::uint64_t> seed;
    PovmOutcome outcome;
    double omega_plus = 0.0;
    double weight = 0.0;            // raw lattice weight
    double normalized_weight = 0.0; // weight / total over the lattice
    ClassicalMessage message;
    DensityMatrix before;
    DensityMatrix after;
    DensityMatrix reference;
    double fidelity_before = 0.0;
    double fidelity_after = 0.0;
};

/**
 * Runs the measure / send / correct protocol on a normalized copy of `packet`.
 * Sampled outcomes are drawn from the normalized lattice distribution with a
 * seeded mt19937_64, so equal seeds give identical records.
 */
inline ProtocolRecord teleport_once(const EprSpec &spec, const SinglePhotonAmplitude &packet,
                                    const OutcomePolicy &policy) {
    const SinglePhotonAmplitude input = packet.normalized();
    const FrequencyGrid &grid = input.grid();
    const TwoChannelAmplitude epr = epr_state(grid, spec);
    const TimeGrid times = TimeGrid::dual_of(grid);
    const OutcomeDistribution dist = outcome_distribution(epr, input, times);

    PovmOutcome outcome;
    std::optional<std::uint64_t> seed;
    if (const auto *fixed = std::get_if<FixedOutcome>(&policy)) {
        outcome = PovmOutcome::at(grid, fixed->t, fixed->omega_plus);
    } else {
        seed = std::get<SampledOutcome>(policy).seed;
        std::mt19937_64 rng(*seed);
        const auto [k, m] = dist.sample(rng);
        outcome = {times.node(k), m};
    }

    const double weight = outcome_weight(epr, input, outcome);
    DensityMatrix before = condition_on_outcome(epr, input, outcome);
    const double omega_plus = SumFrequencyGrid(grid).node(outcome.omega_plus_index);
    const ClassicalMessage msg = ClassicalMessage::fired_at(outcome.t, omega_plus);
    DensityMatrix after = phase_correct(before, msg);
    DensityMatrix reference = density_from_amplitude(input, 0.0);
    const double f_before = fidelity(before, reference);
    const double f_after = fidelity(after, reference);
    return ProtocolRecord{seed,
                          outcome,
                          omega_plus,
                          weight,
                          weight / dist.total(),
                          msg,
                          std::move(before),
                          std::move(after),
                          std::move(reference),
                          f_before,
                          f_after};
}

} // namespace teleport
