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

#ifndef MMNOMA_ORACLE_HPP
#define MMNOMA_ORACLE_HPP

#include <vector>

#include "mmnoma/noma_core.hpp"

namespace mmnoma {

/// Power levels for the brute-force search: geometric in [p_max/1000, p_max/10)
/// and linear in [p_max/10, p_max]. Half of the points go to each part.
std::vector<double> oracle_grid(double p_max, int grid_points);

struct OracleResult {
    double value = 0.0;  // best min-user EE (or min-user rate)
    PowerAllocation P;
    long long evaluated = 0;
    long long feasible = 0;
};

/// Exhaustive max-min EE over grid^(2M) with V fixed. Grid points whose SINR
/// misses the configured minimum are skipped. Throws Infeasible when none is left.
OracleResult grid_maxmin_ee(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                            const LinkModel& model, const CMat& W, const SystemConfig& config,
                            const std::vector<double>& grid);
OracleResult grid_maxmin_ee(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                            const LinkModel& model, const CMat& W, const SystemConfig& config,
                            int grid_points = 20);

/// Same search with the min-user rate as objective.
OracleResult grid_maxmin_rate(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                              const LinkModel& model, const CMat& W, const SystemConfig& config,
                              const std::vector<double>& grid);
OracleResult grid_maxmin_rate(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                              const LinkModel& model, const CMat& W, const SystemConfig& config,
                              int grid_points = 20);

/// Upper bound on how much min-user EE can change inside the grid cell that
/// contains P, from interval bounds on every user's rate and power.
double ee_cell_bound(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                     const LinkModel& model, const CMat& W, const SystemConfig& config,
                     const std::vector<double>& grid, const PowerAllocation& P);

}  // namespace mmnoma

#endif  // MMNOMA_ORACLE_HPP
