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

#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"

namespace teleport {

/**
 * One cell of the joint time-energy measurement: registration time t and the
 * index of Omega_+ on the SumFrequencyGrid (Omega_+ = 2 w_+).
 */
struct PovmOutcome {
    double t = 0.0;
    std::size_t omega_plus_index = 0;

    /// Builds an outcome from physical values, requiring both to be lattice nodes.
    static PovmOutcome at(const FrequencyGrid &grid, double t, double omega_plus) {
        const auto k = TimeGrid::dual_of(grid).find_node(t);
        if (!k) {
            throw Error(ErrorKind::OffGridTime, "povm", "outcome time is not a time-grid node");
        }
        const auto m = SumFrequencyGrid(grid).find_node(omega_plus);
        if (!m) {
            throw Error(ErrorKind::OffGridFrequency, "povm", "Omega_+ is not a sum-grid node");
        }
        return {TimeGrid::dual_of(grid).node(*k), *m};
    }
};

} // namespace teleport
