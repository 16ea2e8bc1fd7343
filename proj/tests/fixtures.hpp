// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The mmnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMNOMA_TESTS_FIXTURES_HPP
#define MMNOMA_TESTS_FIXTURES_HPP

#include <cstdint>

#include "mmnoma/harness.hpp"

namespace mmnoma::fixtures {

// Small system with K = N and the defaults elsewhere.
inline ExperimentSpec desk_spec(int n_antennas, int n_rf, std::uint64_t seed = 1)
{
    ExperimentSpec spec;
    spec.config.n_antennas = n_antennas;
    spec.config.codebook_size = n_antennas;
    spec.config.n_rf = n_rf;
    spec.seed = seed;
    return spec;
}

inline Scenario desk_scenario(int n_antennas, int n_rf, double snr_db, int drop,
                              std::uint64_t seed = 1)
{
    return first_usable_scenario(desk_spec(n_antennas, n_rf, seed), snr_db, drop);
}

inline bool non_decreasing(const std::vector<double>& xs, double slack)
{
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (xs[k] < xs[k - 1] - slack) return false;
    return true;
}

}  // namespace mmnoma::fixtures

#endif  // MMNOMA_TESTS_FIXTURES_HPP
