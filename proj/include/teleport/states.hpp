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
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"

namespace teleport {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace detail {

inline bool all_finite(const CMatrix &m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
                return false;
            }
        }
    }
    return true;
}

inline CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

} // namespace detail

/// Measure-weighted samples F_i of a single-photon packet amplitude f(w).
class SinglePhotonAmplitude {
  public:
    SinglePhotonAmplitude(FrequencyGrid grid, CVector amps, std::vector<std::string> warnings = {})
        : grid_(std::move(grid)), amps_(std::move(amps)), warnings_(std::move(warnings)) {
        if (static_cast<std::size_t>(amps_.size()) != grid_.size()) {
            throw Error(ErrorKind::InvalidArgument, "states", "amplitude length != grid size");
        }
        if (!detail::all_finite(amps_)) {
            throw Error(ErrorKind::InvalidArgument, "states", "amplitude has non-finite entries");
        }
    }

    [[nodiscard]] const FrequencyGrid &grid() const noexcept { return grid_; }
    [[nodiscard]] const CVector &amps() const noexcept { return amps_; }
    [[nodiscard]] const std::vector<std::string> &warnings() const noexcept { return warnings_; }
    [[nodiscard]] double norm_squared() const { return amps_.squaredNorm(); }

    [[nodiscard]] SinglePhotonAmplitude normalized() const {
        const double n2 = norm_squared();
        if (!(n2 > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "states", "cannot normalize a zero amplitude");
        }
        return {grid_, amps_ / std::sqrt(n2), warnings_};
    }

  private:
    FrequencyGrid grid_;
    CVector amps_;
    std::vector<std::string> warnings_;
};

/// Pure two-photon amplitude, rows indexed by the first channel's nodes.
class TwoChannelAmplitude {
  public:
    TwoChannelAmplitude(FrequencyGrid first, FrequencyGrid second, CMatrix amps)
        : first_(std::move(first)), second_(std::move(second)), amps_(std::move(amps)) {
        if (static_cast<std::size_t>(amps_.rows()) != first_.size() ||
            static_cast<std::size_t>(amps_.cols()) != second_.size()) {
            throw Error(ErrorKind::InvalidArgument, "states", "two-channel shape != grid sizes");
        }
        if (!detail::all_finite(amps_)) {
            throw Error(ErrorKind::InvalidArgument, "states", "two-channel amplitude not finite");
        }
    }

    [[nodiscard]] const FrequencyGrid &first_grid() const noexcept { return first_; }
    [[nodiscard]] const FrequencyGrid &second_grid() const noexcept { return second_; }
    [[nodiscard]] const CMatrix &amps() const noexcept { return amps_; }
    [[nodiscard]] double norm_squared() const { return amps_.squaredNorm(); }

    friend TwoChannelAmplitude operator*(double s, const TwoChannelAmplitude &a) {
        return {a.first_, a.second_, s * a.amps_};
    }

  private:
    FrequencyGrid first_;
    FrequencyGrid second_;
    CMatrix amps_;
};

/**
 * Density operator over one channel. Unnormalized matrices are allowed:
 * most of the algebra works "up to normalization", and normalized() divides
 * by the trace at comparison points.
 */
class DensityMatrix {
  public:
    DensityMatrix(FrequencyGrid grid, CMatrix mat) : grid_(std::move(grid)), mat_(std::move(mat)) {
        if (static_cast<std::size_t>(mat_.rows()) != grid_.size() || mat_.rows() != mat_.cols()) {
            throw Error(ErrorKind::InvalidArgument, "states", "density matrix shape != grid size");
        }
        if (!detail::all_finite(mat_)) {
            throw Error(ErrorKind::InvalidArgument, "states", "density matrix not finite");
        }
    }

    [[nodiscard]] const FrequencyGrid &grid() const noexcept { return grid_; }
    [[nodiscard]] const CMatrix &mat() const noexcept { return mat_; }
    [[nodiscard]] double trace() const { return mat_.trace().real(); }

    [[nodiscard]] DensityMatrix normalized() const {
        const double tr = trace();
        if (!(tr > 0.0)) {
            throw Error(ErrorKind::NonPositiveInput, "states", "density matrix trace must be > 0");
        }
        return {grid_, mat_ / tr};
    }

    /// Eigenvalues of the Hermitian part, ascending.
    [[nodiscard]] Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(detail::hermitian_part(mat_),
                                                  Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

  private:
    FrequencyGrid grid_;
    CMatrix mat_;
};

struct ValidationReport {
    double max_hermitian_defect = 0.0;
    double min_eigenvalue = 0.0;
    double trace_real = 0.0;
    double trace_imag = 0.0;
    bool hermitian = false;
    bool positive = false;
    bool trace_positive = false;

    [[nodiscard]] bool ok() const noexcept { return hermitian && positive && trace_positive; }
};

/// Checks the DensityMatrix invariants: Hermitian (1e-10 entrywise),
/// smallest eigenvalue >= -1e-10 * trace, real positive trace.
inline ValidationReport validate(const DensityMatrix &rho) {
    ValidationReport r;
    const CMatrix &m = rho.mat();
    r.max_hermitian_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    r.trace_real = m.trace().real();
    r.trace_imag = m.trace().imag();
    r.min_eigenvalue = rho.eigenvalues().minCoeff();
    r.hermitian = r.max_hermitian_defect <= 1e-10;
    r.trace_positive = r.trace_real > 0.0 && std::abs(r.trace_imag) <= 1e-10 * r.trace_real;
    r.positive = r.min_eigenvalue >= -1e-10 * std::abs(r.trace_real);
    return r;
}

/// Pump frequency and optional per-node spectral envelope g(w) of the
/// down-converted pair. No envelope means the flat form g = 1.
struct EprSpec {
    double pump_frequency = 0.0;
    std::optional<std::vector<double>> envelope;
};

// ---------------------------------------------------------------------------
// Packet constructors

/// F_i ~ exp(-(w_i - center)^2 / (4 width^2)), so |f|^2 has standard deviation `width`.
inline SinglePhotonAmplitude gaussian_packet(const FrequencyGrid &grid, double center,
                                             double width) {
    if (!(width > 0.0) || !std::isfinite(center)) {
        throw Error(ErrorKind::InvalidArgument, "states", "gaussian width must be > 0");
    }
    CVector amps(static_cast<Eigen::Index>(grid.size()));
    const double sqrt_step = std::sqrt(grid.step());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i) - center;
        amps[static_cast<Eigen::Index>(i)] = std::exp(-x * x / (4.0 * width * width)) * sqrt_step;
    }
    std::vector<std::string> warnings;
    if (center - 6.0 * width < grid.omega_min() || center + 6.0 * width > grid.omega_max()) {
        warnings.emplace_back("gaussian support [center-6w, center+6w] extends beyond the grid");
    }
    return SinglePhotonAmplitude(grid, std::move(amps), std::move(warnings)).normalized();
}

/// Spontaneous-emission line shape f(w) ~ 1 / (w - center + i width/2);
/// `width` is the FWHM of |f|^2. Heavy tails make truncation warnings common.
inline SinglePhotonAmplitude lorentzian_packet(const FrequencyGrid &grid, double center,
                                               double width) {
    if (!(width > 0.0) || !std::isfinite(center)) {
        throw Error(ErrorKind::InvalidArgument, "states", "lorentzian width must be > 0");
    }
    CVector amps(static_cast<Eigen::Index>(grid.size()));
    const double sqrt_step = std::sqrt(grid.step());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        amps[static_cast<Eigen::Index>(i)] =
            sqrt_step / Complex(grid.node(i) - center, 0.5 * width);
    }
    std::vector<std::string> warnings;
    const double peak = 2.0 / width;
    const double edge = std::max(std::abs(1.0 / Complex(grid.omega_min() - center, 0.5 * width)),
                                 std::abs(1.0 / Complex(grid.omega_max() - center, 0.5 * width)));
    if (edge > 1e-8 * peak) {
        warnings.emplace_back("lorentzian tails above 1e-8 of peak are truncated by the grid");
    }
    return SinglePhotonAmplitude(grid, std::move(amps), std::move(warnings)).normalized();
}

/// Basis vector at the node equal to `omega`: the ideal narrow-filter state.
inline SinglePhotonAmplitude monochromatic_state(const FrequencyGrid &grid, double omega) {
    const auto idx = grid.find_node(omega);
    if (!idx) {
        throw Error(ErrorKind::OffGridFrequency, "states",
                    "monochromatic frequency is not a grid node");
    }
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(grid.size()));
    amps[static_cast<Eigen::Index>(*idx)] = 1.0;
    return {grid, std::move(amps)};
}

/// alpha * a + beta * b, not renormalized.
inline SinglePhotonAmplitude superpose(Complex alpha, const SinglePhotonAmplitude &a, Complex beta,
                                       const SinglePhotonAmplitude &b) {
    if (!(a.grid() == b.grid())) {
        throw Error(ErrorKind::InvalidArgument, "states", "superposed packets use different grids");
    }
    return {a.grid(), alpha * a.amps() + beta * b.amps()};
}

/**
 * Energy-time entangled pair: amps(i, j) = g(w_i) when w_i + w_j equals the
 * pump frequency on the grid, zero otherwise. Left unnormalized.
 */
inline TwoChannelAmplitude epr_state(const FrequencyGrid &grid, const EprSpec &spec) {
    const std::size_t n = grid.size();
    if (spec.envelope) {
        if (spec.envelope->size() != n) {
            throw Error(ErrorKind::InvalidArgument, "states", "envelope length != grid size");
        }
        for (double g : *spec.envelope) {
            if (!(g >= 0.0) || !std::isfinite(g)) {
                throw Error(ErrorKind::InvalidArgument, "states", "envelope values must be >= 0");
            }
        }
    }
    const SumFrequencyGrid sums(grid);
    const auto pump = sums.find_node(spec.pump_frequency);
    if (!pump) {
        throw Error(ErrorKind::EmptyEpr, "states",
                    "no node pair sums to the pump frequency");
    }
    CMatrix amps = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto range = sums.pairs(*pump);
    bool any = false;
    for (std::size_t i = range.first; i <= range.last; ++i) {
        const double g = spec.envelope ? (*spec.envelope)[i] : 1.0;
        amps(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(*pump - i)) = g;
        any = any || g > 0.0;
    }
    if (!any) {
        throw Error(ErrorKind::EmptyEpr, "states", "envelope vanishes on every compatible pair");
    }
    return {grid, grid, std::move(amps)};
}

// ---------------------------------------------------------------------------
// Evolution and density matrices

/// F_i -> exp(-i w_i t) F_i.
inline SinglePhotonAmplitude time_evolve(const SinglePhotonAmplitude &psi, double t) {
    CVector out = psi.amps();
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] *= std::polar(1.0, -psi.grid().node(static_cast<std::size_t>(i)) * t);
    }
    return {psi.grid(), std::move(out), psi.warnings()};
}

inline DensityMatrix density_from_amplitude(const SinglePhotonAmplitude &psi, double t = 0.0) {
    const CVector v = time_evolve(psi, t).amps();
    return {psi.grid(), v * v.adjoint()};
}

// ---------------------------------------------------------------------------
// Multi-channel states and partial traces

/// Pure state over several channels, stored row-major (first channel slowest).
struct MultiChannelState {
    std::vector<FrequencyGrid> grids;
    CVector amps;
};

/// Operator over several channels with the same index layout as MultiChannelState.
struct MultiChannelOperator {
    std::vector<FrequencyGrid> grids;
    CMatrix mat;
};

namespace detail {

struct Split {
    std::size_t before = 1;
    std::size_t kept = 1;
    std::size_t after = 1;
};

inline Split split_dims(const std::vector<FrequencyGrid> &grids, std::size_t keep,
                        std::size_t total) {
    if (keep >= grids.size()) {
        throw Error(ErrorKind::InvalidArgument, "states", "channel id out of range");
    }
    Split s;
    for (std::size_t c = 0; c < grids.size(); ++c) {
        if (c < keep) {
            s.before *= grids[c].size();
        } else if (c > keep) {
            s.after *= grids[c].size();
        }
    }
    s.kept = grids[keep].size();
    if (s.before * s.kept * s.after != total) {
        throw Error(ErrorKind::InvalidArgument, "states", "state size != product of grid sizes");
    }
    return s;
}

} // namespace detail

inline MultiChannelState as_state(const TwoChannelAmplitude &pair) {
    const auto rows = pair.amps().rows();
    const auto cols = pair.amps().cols();
    CVector v(rows * cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            v[i * cols + j] = pair.amps()(i, j);
        }
    }
    return {{pair.first_grid(), pair.second_grid()}, std::move(v)};
}

inline MultiChannelState tensor(const MultiChannelState &a, const SinglePhotonAmplitude &b) {
    const Eigen::Index nb = b.amps().size();
    CVector v(a.amps.size() * nb);
    for (Eigen::Index x = 0; x < a.amps.size(); ++x) {
        v.segment(x * nb, nb) = a.amps[x] * b.amps();
    }
    auto grids = a.grids;
    grids.push_back(b.grid());
    return {std::move(grids), std::move(v)};
}

/// Channels ordered (pair first, pair second, packet): the pre-measurement state.
inline MultiChannelState tensor(const TwoChannelAmplitude &pair, const SinglePhotonAmplitude &b) {
    return tensor(as_state(pair), b);
}

inline MultiChannelOperator density_of(const MultiChannelState &s) {
    return {s.grids, s.amps * s.amps.adjoint()};
}

/// Reduced density matrix of channel `keep` (0-based position in `grids`).
inline DensityMatrix partial_trace(const MultiChannelState &state, std::size_t keep) {
    const auto s = detail::split_dims(state.grids, keep, static_cast<std::size_t>(state.amps.size()));
    const auto kept = static_cast<Eigen::Index>(s.kept);
    CMatrix out = CMatrix::Zero(kept, kept);
    for (std::size_t x = 0; x < s.before; ++x) {
        for (std::size_t y = 0; y < s.after; ++y) {
            CVector slice(kept);
            for (Eigen::Index a = 0; a < kept; ++a) {
                slice[a] = state.amps[static_cast<Eigen::Index>((x * s.kept + static_cast<std::size_t>(a)) * s.after + y)];
            }
            out.noalias() += slice * slice.adjoint();
        }
    }
    return {state.grids[keep], std::move(out)};
}

inline DensityMatrix partial_trace(const MultiChannelOperator &op, std::size_t keep) {
    const auto s = detail::split_dims(op.grids, keep, static_cast<std::size_t>(op.mat.rows()));
    const auto kept = static_cast<Eigen::Index>(s.kept);
    CMatrix out = CMatrix::Zero(kept, kept);
    for (std::size_t x = 0; x < s.before; ++x) {
        for (std::size_t y = 0; y < s.after; ++y) {
            for (Eigen::Index a = 0; a < kept; ++a) {
                const auto row = static_cast<Eigen::Index>((x * s.kept + static_cast<std::size_t>(a)) * s.after + y);
                for (Eigen::Index b = 0; b < kept; ++b) {
                    const auto col = static_cast<Eigen::Index>((x * s.kept + static_cast<std::size_t>(b)) * s.after + y);
                    out(a, b) += op.mat(row, col);
                }
            }
        }
    }
    return {op.grids[keep], std::move(out)};
}

inline DensityMatrix partial_trace(const TwoChannelAmplitude &pair, std::size_t keep) {
    return partial_trace(as_state(pair), keep);
}

// ---------------------------------------------------------------------------
// Fidelity

namespace detail {

struct Spectrum {
    Eigen::VectorXd values; // ascending
    CMatrix vectors;
};

inline Spectrum unit_trace_spectrum(const DensityMatrix &rho) {
    const double tr = rho.trace();
    if (!(tr > 0.0)) {
        throw Error(ErrorKind::NonPositiveInput, "states", "fidelity input has non-positive trace");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(rho.mat()) / tr);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        throw Error(ErrorKind::NonPositiveInput, "states", "fidelity input has a negative eigenvalue");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

inline bool is_rank_one(const Spectrum &s) {
    const Eigen::Index n = s.values.size();
    return n == 1 || s.values[n - 2] <= 1e-10;
}

} // namespace detail

/**
 * Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 of the trace-normalized
 * inputs. When either input is numerically rank one (second eigenvalue <= 1e-10)
 * this reduces to lambda <v|other|v>, which avoids square roots of eigenvalue noise.
 */
inline double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (!(rho.grid() == sigma.grid())) {
        throw Error(ErrorKind::InvalidArgument, "states", "fidelity of states on different grids");
    }
    const auto sr = detail::unit_trace_spectrum(rho);
    const auto ss = detail::unit_trace_spectrum(sigma);
    const CMatrix rho_n = detail::hermitian_part(rho.mat()) / rho.trace();
    const CMatrix sigma_n = detail::hermitian_part(sigma.mat()) / sigma.trace();
    const auto n = sr.values.size();

    auto pure_overlap = [n](const detail::Spectrum &pure, const CMatrix &other) {
        const CVector v = pure.vectors.col(n - 1);
        const double value = pure.values[n - 1] * (v.adjoint() * other * v)(0, 0).real();
        return std::clamp(value, 0.0, 1.0);
    };
    if (detail::is_rank_one(sr)) {
        return pure_overlap(sr, sigma_n);
    }
    if (detail::is_rank_one(ss)) {
        return pure_overlap(ss, rho_n);
    }

    const Eigen::VectorXd root = sr.values.cwiseMax(0.0).cwiseSqrt();
    const CMatrix sqrt_rho = sr.vectors * root.asDiagonal() * sr.vectors.adjoint();
    const CMatrix inner = detail::hermitian_part(sqrt_rho * sigma_n * sqrt_rho);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(inner, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double mu = es.eigenvalues()[i];
        if (mu > 1e-13) {
            sum += std::sqrt(mu);
        }
    }
    return std::clamp(sum * sum, 0.0, 1.0);
}

/// |<psi|phi>|^2 / (|psi|^2 |phi|^2).
inline double fidelity(const SinglePhotonAmplitude &psi, const SinglePhotonAmplitude &phi) {
    if (!(psi.grid() == phi.grid())) {
        throw Error(ErrorKind::InvalidArgument, "states", "fidelity of states on different grids");
    }
    const double denom = psi.norm_squared() * phi.norm_squared();
    if (!(denom > 0.0)) {
        throw Error(ErrorKind::NonPositiveInput, "states", "fidelity of a zero amplitude");
    }
    return std::norm(psi.amps().dot(phi.amps())) / denom;
}

} // namespace teleport
