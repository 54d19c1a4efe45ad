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

#include "teleport/freqgrid.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "gtest/gtest.h"

using namespace teleport;

TEST(FrequencyGrid, unit_spacing) {
    const auto g = make_grid(0, 10, 11);
    EXPECT_DOUBLE_EQ(g.step(), 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_DOUBLE_EQ(g.node(i), static_cast<double>(i));
    }
}

TEST(FrequencyGrid, rejects_bad_bounds) {
    EXPECT_THROW(make_grid(5, 5, 3), Error);
    EXPECT_THROW(make_grid(6, 5, 3), Error);
    EXPECT_THROW(make_grid(0, 10, 1), Error);
    EXPECT_THROW(make_grid(-1, 10, 5), Error);
    try {
        make_grid(-1, 10, 5);
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
        EXPECT_EQ(e.component(), "freqgrid");
    }
}

TEST(FrequencyGrid, find_node_tolerance) {
    const auto g = make_grid(0, 10, 11);
    EXPECT_EQ(g.find_node(5.0), 5u);
    EXPECT_EQ(g.find_node(5.0 + 1e-12), 5u);
    EXPECT_FALSE(g.find_node(5.5));
    EXPECT_FALSE(g.find_node(11.0));
    EXPECT_FALSE(g.find_node(-1.0));
}

TEST(TimeGrid, dual_step) {
    const auto g = make_grid(0, 10, 11);
    const auto t = TimeGrid::dual_of(g);
    EXPECT_DOUBLE_EQ(t.step(), 2 * std::numbers::pi / 11);
    EXPECT_EQ(t.size(), 11u);
    EXPECT_NEAR(t.step() * g.step() * 11 / (2 * std::numbers::pi), 1.0, 1e-12);
}

TEST(TimeGrid, centered_on_zero) {
    for (std::size_t n : {2u, 3u, 8u, 9u}) {
        const auto g = make_grid(1, 4, n);
        const auto t = TimeGrid::dual_of(g);
        ASSERT_TRUE(t.find_node(0.0));
        const double first = t.node(0);
        const double last = t.node(n - 1);
        // symmetric, or one extra node on the negative side for even n
        if (n % 2 == 1) {
            EXPECT_NEAR(first, -last, 1e-12);
        } else {
            EXPECT_NEAR(first + t.step(), -last, 1e-12);
        }
    }
}

TEST(TimeGrid, truncation_keeps_step) {
    const auto t = TimeGrid::dual_of(make_grid(0, 7, 8));
    const auto half = t.truncated(4);
    EXPECT_EQ(half.size(), 4u);
    EXPECT_FALSE(half.is_complete());
    EXPECT_DOUBLE_EQ(half.step(), t.step());
    EXPECT_DOUBLE_EQ(half.node(2), t.node(2));
    EXPECT_THROW((void)t.truncated(0), Error);
    EXPECT_THROW((void)t.truncated(9), Error);
}

TEST(TimeGrid, dft_orthogonality) {
    for (std::size_t n : {2u, 5u, 16u, 33u}) {
        const auto g = make_grid(0.5, 9.0, n);
        const auto t = TimeGrid::dual_of(g);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                std::complex<double> sum = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    sum += std::polar(1.0, (g.node(a) - g.node(b)) * t.node(k));
                }
                sum /= static_cast<double>(n);
                EXPECT_NEAR(std::abs(sum - (a == b ? 1.0 : 0.0)), 0.0, 1e-10) << n << " " << a << " " << b;
            }
        }
    }
}

TEST(SumFrequencyGrid, pairwise_sums) {
    const auto g = make_grid(4, 6, 3);
    const SumFrequencyGrid s(g);
    ASSERT_EQ(s.size(), 5u);
    for (std::size_t m = 0; m < 5; ++m) {
        EXPECT_DOUBLE_EQ(s.node(m), 8.0 + static_cast<double>(m));
    }
}

TEST(SumFrequencyGrid, every_pair_maps_to_one_node) {
    const auto g = make_grid(0.25, 3.0, 7);
    const SumFrequencyGrid s(g);
    std::vector<int> hits(s.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            const auto m = s.find_node(g.node(i) + g.node(j));
            ASSERT_TRUE(m);
            EXPECT_EQ(*m, i + j);
            ++hits[*m];
        }
    }
    for (std::size_t m = 0; m < s.size(); ++m) {
        EXPECT_GT(hits[m], 0);
        EXPECT_EQ(static_cast<std::size_t>(hits[m]), s.pairs(m).size());
    }
}

TEST(PairToSumDiff, examples) {
    const auto g = make_grid(4, 6, 3);
    const SumFrequencyGrid s(g);

    auto sd = pair_to_sum_diff(g, 0, 2);
    EXPECT_DOUBLE_EQ(s.node(sd.sum_index), 10.0);
    EXPECT_DOUBLE_EQ(sd.omega_minus, -1.0);

    sd = pair_to_sum_diff(g, 1, 1);
    EXPECT_DOUBLE_EQ(s.node(sd.sum_index), 10.0);
    EXPECT_DOUBLE_EQ(sd.omega_minus, 0.0);

    sd = pair_to_sum_diff(g, 2, 2);
    EXPECT_DOUBLE_EQ(s.node(sd.sum_index), 12.0);
    EXPECT_DOUBLE_EQ(sd.omega_minus, 0.0);
}

TEST(PairToSumDiff, round_trip) {
    for (std::size_t n : {2u, 3u, 10u, 17u}) {
        const auto g = make_grid(0.3, 7.1, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto back = sum_diff_to_pair(g, pair_to_sum_diff(g, i, j));
                EXPECT_EQ(back.first, i);
                EXPECT_EQ(back.second, j);
            }
        }
    }
}

TEST(FrequencyGrid, nodes_never_negative) {
    const auto g = make_grid(0, 1e-3, 50);
    for (double w : g.nodes()) {
        EXPECT_GE(w, 0.0);
    }
    for (double w : SumFrequencyGrid(g).nodes()) {
        EXPECT_GE(w, 0.0);
    }
}
