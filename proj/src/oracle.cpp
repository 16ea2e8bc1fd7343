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

#include "mmnoma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmnoma {

std::vector<double> oracle_grid(double p_max, int grid_points)
{
    if (!(p_max > 0.0) || grid_points < 2) throw InvalidInput("oracle_grid: need p_max > 0 and >= 2 points");
    const int n_geo = grid_points / 2;
    const int n_lin = grid_points - n_geo;
    std::vector<double> grid;
    grid.reserve(grid_points);
    const double lo = p_max / 1000.0, mid = p_max / 10.0;
    for (int k = 0; k < n_geo; ++k) grid.push_back(lo * std::pow(mid / lo, double(k) / n_geo));
    for (int k = 0; k < n_lin; ++k)
        grid.push_back(n_lin == 1 ? p_max : mid + (p_max - mid) * double(k) / (n_lin - 1));
    return grid;
}

namespace {

// Precomputed |v_beam(u) h_j|^2 and per-user noise.
struct Gains {
    RMat g;
    RVec noise;
    RVec threshold;
};

Gains gains_of(const DetectionMatrix& V, const std::vector<CVec>& h_bar, const LinkModel& model,
               const CMat& W, const SystemConfig& config)
{
    const int n = model.n_users();
    if (static_cast<int>(h_bar.size()) != n || V.rows() * 2 != n)
        throw InvalidInput("oracle: V, h_bar and model sizes disagree");
    Gains out{RMat(n, n), RVec(n), RVec(n)};
    for (int u = 0; u < n; ++u) {
        const CVec v = V.row(beam_of(u)).transpose();
        for (int j = 0; j < n; ++j) out.g(u, j) = std::norm(v.dot(h_bar[j].conjugate()));
        out.noise(u) = noise_level(v, W, config);
        out.threshold(u) = min_sinr(config, model.prefactor[u]);
    }
    return out;
}

template <class Objective>
OracleResult search(const Gains& gains, const LinkModel& model, const std::vector<double>& grid,
                    Objective per_user)
{
    if (grid.empty()) throw InvalidInput("oracle: empty grid");
    const int n = model.n_users();
    std::vector<int> idx(n, 0);
    PowerAllocation P(n);
    OracleResult best;
    best.value = -std::numeric_limits<double>::infinity();
    while (true) {
        for (int u = 0; u < n; ++u) P(u) = grid[idx[u]];
        ++best.evaluated;
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (int u = 0; u < n && ok; ++u) {
            double interference = gains.noise(u);
            for (int j : model.interferers[u]) interference += gains.g(u, j) * P(j);
            const double gamma = gains.g(u, u) * P(u) / interference;
            if (gamma < gains.threshold(u)) {
                ok = false;
                break;
            }
            worst = std::min(worst, per_user(u, model.prefactor[u] * rate(gamma), P(u)));
        }
        if (ok) {
            ++best.feasible;
            if (worst > best.value) {
                best.value = worst;
                best.P = P;
            }
        }
        int k = 0;
        while (k < n && ++idx[k] == static_cast<int>(grid.size())) idx[k++] = 0;
        if (k == n) break;
    }
    if (best.feasible == 0) throw Infeasible("oracle: every grid point violates the minimum rate");
    return best;
}

}  // namespace

OracleResult grid_maxmin_ee(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                            const LinkModel& model, const CMat& W, const SystemConfig& config,
                            const std::vector<double>& grid)
{
    return search(gains_of(V, h_bar, model, W, config), model, grid,
                  [&](int, double r, double p) { return ee(r, total_power(p, config)); });
}

OracleResult grid_maxmin_ee(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                            const LinkModel& model, const CMat& W, const SystemConfig& config,
                            int grid_points)
{
    return grid_maxmin_ee(V, h_bar, model, W, config, oracle_grid(config.p_max, grid_points));
}

OracleResult grid_maxmin_rate(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                              const LinkModel& model, const CMat& W, const SystemConfig& config,
                              const std::vector<double>& grid)
{
    return search(gains_of(V, h_bar, model, W, config), model, grid,
                  [](int, double r, double) { return r; });
}

OracleResult grid_maxmin_rate(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                              const LinkModel& model, const CMat& W, const SystemConfig& config,
                              int grid_points)
{
    return grid_maxmin_rate(V, h_bar, model, W, config, oracle_grid(config.p_max, grid_points));
}

double ee_cell_bound(const DetectionMatrix& V, const std::vector<CVec>& h_bar,
                     const LinkModel& model, const CMat& W, const SystemConfig& config,
                     const std::vector<double>& grid, const PowerAllocation& P)
{
    const Gains gains = gains_of(V, h_bar, model, W, config);
    const int n = model.n_users();
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    RVec lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), P(j));
        if (it == sorted.begin()) {
            lo(j) = 0.0;
            hi(j) = sorted.front();
        } else if (it == sorted.end()) {
            lo(j) = sorted.back();
            hi(j) = std::max(sorted.back(), P(j));
        } else {
            lo(j) = *(it - 1);
            hi(j) = *it;
        }
    }

    // Interval bounds of every user's EE over the cell; the spread of the
    // min-user EE inside the cell is at most max(upper) - max(lower).
    double upper = std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    for (int u = 0; u < n; ++u) {
        double i_lo = gains.noise(u), i_hi = gains.noise(u);
        for (int j : model.interferers[u]) {
            i_lo += gains.g(u, j) * lo(j);
            i_hi += gains.g(u, j) * hi(j);
        }
        const double pref = model.prefactor[u];
        const double ee_hi = ee(pref * rate(gains.g(u, u) * hi(u) / i_lo), total_power(lo(u), config));
        const double ee_lo = ee(pref * rate(gains.g(u, u) * lo(u) / i_hi), total_power(hi(u), config));
        upper = std::min(upper, ee_hi);
        lower = std::min(lower, ee_lo);
    }
    const double bound = upper - lower;
    return bound;
}

}  // namespace mmnoma
