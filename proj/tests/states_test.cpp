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

#include "teleport/states.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace teleport;

namespace {

SinglePhotonAmplitude random_packet(const FrequencyGrid &g, std::mt19937_64 &rng) {
    std::normal_distribution<double> nd;
    CVector v(static_cast<Eigen::Index>(g.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = Complex(nd(rng), nd(rng));
    }
    return SinglePhotonAmplitude(g, v).normalized();
}

DensityMatrix random_mixed(const FrequencyGrid &g, std::mt19937_64 &rng) {
    std::normal_distribution<double> nd;
    const auto n = static_cast<Eigen::Index>(g.size());
    CMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = Complex(nd(rng), nd(rng));
        }
    }
    return DensityMatrix(g, a * a.adjoint()).normalized();
}

} // namespace

TEST(GaussianPacket, normalized_and_symmetric) {
    const auto g = make_grid(0, 10, 101);
    const auto psi = gaussian_packet(g, 5, 1);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
    // [5 - 6, 5 + 6] pokes outside [0, 10]
    EXPECT_FALSE(psi.warnings().empty());
    EXPECT_TRUE(gaussian_packet(g, 5, 0.8).warnings().empty());
    for (std::size_t x = 0; x <= 50; ++x) {
        EXPECT_NEAR(std::abs(psi.amps()[static_cast<Eigen::Index>(50 - x)]),
                    std::abs(psi.amps()[static_cast<Eigen::Index>(50 + x)]), 1e-15);
    }
}

TEST(GaussianPacket, mean_frequency) {
    const auto g = make_grid(0, 10, 101);
    const auto psi = gaussian_packet(g, 5, 1);
    double mean = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        mean += g.node(i) * std::norm(psi.amps()[static_cast<Eigen::Index>(i)]);
    }
    EXPECT_NEAR(mean, 5.0, 1e-9);
}

TEST(GaussianPacket, variance_matches_width) {
    // |f|^2 is a normal density with standard deviation `width`.
    const auto g = make_grid(0, 20, 401);
    const auto psi = gaussian_packet(g, 10, 1.3);
    double var = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        var += (g.node(i) - 10) * (g.node(i) - 10) * std::norm(psi.amps()[static_cast<Eigen::Index>(i)]);
    }
    EXPECT_NEAR(var, 1.3 * 1.3, 1e-9);
}

TEST(GaussianPacket, errors_and_warnings) {
    const auto g = make_grid(0, 10, 101);
    EXPECT_THROW(gaussian_packet(g, 5, 0), Error);
    EXPECT_THROW(gaussian_packet(g, 5, -1), Error);
    EXPECT_FALSE(gaussian_packet(g, 1, 1).warnings().empty());
}

TEST(LorentzianPacket, normalized_with_tail_warning) {
    const auto g = make_grid(0, 10, 201);
    const auto psi = lorentzian_packet(g, 5, 0.5);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
    EXPECT_FALSE(psi.warnings().empty());
    // peak at the center node
    Eigen::Index peak = 0;
    psi.amps().cwiseAbs().maxCoeff(&peak);
    EXPECT_EQ(peak, 100);
}

TEST(Monochromatic, basis_vector) {
    const auto g = make_grid(0, 10, 11);
    const auto psi = monochromatic_state(g, 5);
    for (Eigen::Index i = 0; i < 11; ++i) {
        EXPECT_EQ(psi.amps()[i], Complex(i == 5 ? 1.0 : 0.0));
    }
    try {
        monochromatic_state(g, 5.5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OffGridFrequency);
    }
    const auto rho = density_from_amplitude(psi, 0);
    EXPECT_NEAR((rho.mat() - CMatrix(psi.amps() * psi.amps().adjoint())).norm(), 0.0, 1e-15);
    const auto ev = rho.eigenvalues();
    EXPECT_NEAR(ev[10], 1.0, 1e-14);
    EXPECT_NEAR(ev[9], 0.0, 1e-14);
}

TEST(EprState, anti_diagonal_support) {
    const auto g = make_grid(1, 3, 3);
    const auto epr = epr_state(g, {4.0, std::nullopt});
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            EXPECT_EQ(epr.amps()(i, j), Complex(i + j == 2 ? 1.0 : 0.0)) << i << j;
        }
    }
}

TEST(EprState, empty_and_envelope) {
    const auto g = make_grid(1, 3, 3);
    try {
        epr_state(g, {7.0, std::nullopt});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyEpr);
    }
    const auto masked = epr_state(g, {4.0, std::vector<double>{0, 1, 0}});
    EXPECT_EQ(masked.amps()(1, 1), Complex(1.0));
    EXPECT_EQ((masked.amps().array() != Complex(0.0)).count(), 1);
    EXPECT_THROW(epr_state(g, {4.0, std::vector<double>{0, -1, 0}}), Error);
    EXPECT_THROW(epr_state(g, {4.0, std::vector<double>{1, 1}}), Error);
}

TEST(DensityFromAmplitude, phases_and_spectrum) {
    const auto g = make_grid(0, 10, 41);
    const auto psi = gaussian_packet(g, 5, 1);
    const auto rho0 = density_from_amplitude(psi, 0);
    EXPECT_NEAR(rho0.trace(), 1.0, 1e-12);
    const auto rho_t = density_from_amplitude(psi, 2.7);
    EXPECT_NEAR((rho0.eigenvalues() - rho_t.eigenvalues()).cwiseAbs().maxCoeff(), 0.0, 1e-10);
    // mat[i][j] = exp(-i (w_i - w_j) t) F_i F_j^*
    const Complex expected = std::polar(1.0, -(g.node(3) - g.node(7)) * 2.7) * psi.amps()[3] *
                             std::conj(psi.amps()[7]);
    EXPECT_NEAR(std::abs(rho_t.mat()(3, 7) - expected), 0.0, 1e-15);

    const auto mono = monochromatic_state(g, 5);
    EXPECT_NEAR((density_from_amplitude(mono, 1.9).mat() - density_from_amplitude(mono, 0).mat()).norm(), 0.0,
                1e-15);
}

TEST(TimeEvolve, unitary_and_invertible) {
    const auto g = make_grid(0, 10, 33);
    std::mt19937_64 rng(3);
    const auto psi = random_packet(g, rng);
    EXPECT_EQ((time_evolve(psi, 0).amps() - psi.amps()).norm(), 0.0);
    for (double t : {0.3, -2.0, 17.5}) {
        const auto fwd = time_evolve(psi, t);
        EXPECT_NEAR(fwd.norm_squared(), psi.norm_squared(), 1e-12);
        EXPECT_NEAR((time_evolve(fwd, -t).amps() - psi.amps()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    }
}

TEST(PartialTrace, product_state) {
    const auto g1 = make_grid(0, 4, 5);
    const auto g2 = make_grid(1, 3, 3);
    std::mt19937_64 rng(5);
    const auto a = SinglePhotonAmplitude(g1, 2.0 * random_packet(g1, rng).amps());
    const auto b = random_packet(g2, rng);
    const MultiChannelState s = tensor(MultiChannelState{{g1}, a.amps()}, b);
    const auto reduced = partial_trace(s, 1);
    const CMatrix expected = a.norm_squared() * (b.amps() * b.amps().adjoint());
    EXPECT_NEAR((reduced.mat() - expected).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(PartialTrace, epr_reduces_to_identity) {
    const auto g = make_grid(1, 3, 3);
    const auto epr = epr_state(g, {4.0, std::nullopt});
    // Oracle: rho_2[a][b] = sum_i A[i][a] conj(A[i][b]) by explicit loops.
    CMatrix oracle = CMatrix::Zero(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int i = 0; i < 3; ++i)
                oracle(a, b) += epr.amps()(i, a) * std::conj(epr.amps()(i, b));
    EXPECT_NEAR((oracle - CMatrix::Identity(3, 3)).norm(), 0.0, 1e-15);
    const auto reduced = partial_trace(epr, 1);
    EXPECT_NEAR((reduced.mat() - oracle).norm(), 0.0, 1e-15);
    EXPECT_NEAR((partial_trace(epr, 0).mat() - oracle).norm(), 0.0, 1e-15);
}

TEST(PartialTrace, operator_and_state_forms_agree) {
    const auto g = make_grid(0, 5, 4);
    std::mt19937_64 rng(11);
    const auto epr = epr_state(g, {5.0, std::vector<double>{0.2, 1.0, 0.7, 0.1}});
    const auto packet = random_packet(g, rng);
    const auto s = tensor(epr, packet);
    const auto op = density_of(s);
    const double full = s.amps.squaredNorm();
    for (std::size_t keep = 0; keep < 3; ++keep) {
        const auto a = partial_trace(s, keep);
        const auto b = partial_trace(op, keep);
        EXPECT_NEAR((a.mat() - b.mat()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
        EXPECT_NEAR(a.trace(), full, 1e-12);
        EXPECT_TRUE(validate(a).ok());
    }
    EXPECT_THROW(partial_trace(s, 3), Error);
}

TEST(Fidelity, examples) {
    const auto g = make_grid(0, 3, 4);
    std::mt19937_64 rng(1);
    const auto rho = random_mixed(g, rng);
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);

    const auto e1 = density_from_amplitude(monochromatic_state(g, 1));
    const auto e2 = density_from_amplitude(monochromatic_state(g, 2));
    EXPECT_NEAR(fidelity(e1, e2), 0.0, 1e-15);

    // |<psi|phi>| = 0.6
    CVector psi = CVector::Zero(4);
    CVector phi = CVector::Zero(4);
    psi[0] = 1.0;
    phi[0] = 0.6;
    phi[2] = Complex(0.0, 0.8);
    const DensityMatrix p(g, psi * psi.adjoint());
    const DensityMatrix q(g, phi * phi.adjoint());
    EXPECT_NEAR(fidelity(p, q), 0.36, 1e-12);
    EXPECT_NEAR(fidelity(SinglePhotonAmplitude(g, psi), SinglePhotonAmplitude(g, phi)), 0.36, 1e-12);
}

TEST(Fidelity, pure_state_against_mixed) {
    // F(|v><v|, sigma) = <v|sigma|v>
    const auto g = make_grid(0, 4, 5);
    std::mt19937_64 rng(8);
    const auto v = random_packet(g, rng);
    const auto sigma = random_mixed(g, rng);
    const double expected = (v.amps().adjoint() * sigma.mat() * v.amps())(0, 0).real();
    EXPECT_NEAR(fidelity(density_from_amplitude(v), sigma), expected, 1e-12);
    EXPECT_NEAR(fidelity(sigma, density_from_amplitude(v)), expected, 1e-12);
}

TEST(Fidelity, commuting_mixed_states) {
    // Diagonal states: F = (sum_i sqrt(p_i q_i))^2.
    const auto g = make_grid(0, 2, 3);
    const Eigen::Vector3d p(0.5, 0.3, 0.2);
    const Eigen::Vector3d q(0.1, 0.6, 0.3);
    const DensityMatrix a(g, p.cast<Complex>().asDiagonal());
    const DensityMatrix b(g, q.cast<Complex>().asDiagonal());
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::sqrt(p[i] * q[i]);
    EXPECT_NEAR(fidelity(a, b), s * s, 1e-12);
}

TEST(Fidelity, rejects_negative_input) {
    const auto g = make_grid(0, 1, 2);
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    const DensityMatrix bad(g, m);
    const auto good = density_from_amplitude(monochromatic_state(g, 0));
    try {
        (void)fidelity(bad, good);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonPositiveInput);
    }
}

// Property-style checks over randomly generated inputs.

TEST(StatesProperty, density_from_amplitude_is_rank_one_and_valid) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ut(-20.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = make_grid(0.5, 9.5, 2 + static_cast<std::size_t>(rng() % 30));
        const auto psi = random_packet(g, rng);
        const auto rho = density_from_amplitude(psi, ut(rng));
        EXPECT_TRUE(validate(rho).ok());
        const auto ev = rho.eigenvalues();
        EXPECT_LE(ev[ev.size() - 2], 1e-10 * rho.trace());
    }
}

TEST(StatesProperty, fidelity_symmetric_and_bounded) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = make_grid(0, 1, 2 + static_cast<std::size_t>(rng() % 7));
        const auto a = trial % 3 == 0 ? density_from_amplitude(random_packet(g, rng)) : random_mixed(g, rng);
        const auto b = random_mixed(g, rng);
        const double fab = fidelity(a, b);
        const double fba = fidelity(b, a);
        EXPECT_NEAR(fab, fba, 1e-10);
        EXPECT_GE(fab, 0.0);
        EXPECT_LE(fab, 1.0);
    }
}

TEST(StatesProperty, partial_trace_positive_trace_preserving) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = make_grid(0, 2, 2 + static_cast<std::size_t>(rng() % 5));
        std::normal_distribution<double> nd;
        const auto n = static_cast<Eigen::Index>(g.size());
        CMatrix a(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
        const TwoChannelAmplitude pair(g, g, a);
        const auto s = tensor(pair, random_packet(g, rng));
        for (std::size_t keep = 0; keep < 3; ++keep) {
            const auto r = partial_trace(s, keep);
            EXPECT_NEAR(r.trace(), s.amps.squaredNorm(), 1e-12 * s.amps.squaredNorm());
            EXPECT_TRUE(validate(r).ok());
        }
    }
}

TEST(StatesProperty, uniform_epr_is_maximally_entangled_on_window) {
    for (std::size_t n : {3u, 6u, 11u}) {
        const auto g = make_grid(1, 6, n);
        const SumFrequencyGrid sums(g);
        for (std::size_t m = 0; m < sums.size(); ++m) {
            const auto epr = epr_state(g, {sums.node(m), std::nullopt});
            for (std::size_t keep : {0u, 1u}) {
                const auto r = partial_trace(epr, keep);
                const auto range = sums.pairs(m);
                for (std::size_t a = 0; a < n; ++a) {
                    for (std::size_t b = 0; b < n; ++b) {
                        const bool compatible = a >= m - range.last && a <= m - range.first;
                        const double expected = a == b && compatible ? 1.0 : 0.0;
                        EXPECT_EQ(r.mat()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                                  Complex(expected));
                    }
                }
            }
        }
    }
}
