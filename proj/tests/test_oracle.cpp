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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "mmnoma/maxmin.hpp"
#include "mmnoma/oracle.hpp"
#include "fixtures.hpp"

using namespace mmnoma;

namespace {

struct Tiny {
    SystemConfig cfg;
    std::vector<CVec> h;
    CMat W;
    DetectionMatrix V;
    LinkModel model;
};

// One beam, two users without mutual interference.
Tiny isolated_pair(double g_strong, double g_weak)
{
    Tiny t;
    t.cfg.n_rf = 1;
    t.cfg.r_min = 0.0;
    t.h = {CVec::Constant(1, std::sqrt(g_strong)), CVec::Constant(1, std::sqrt(g_weak))};
    t.W = CMat::Zero(1, 4);
    t.W(0, 0) = 1.0;
    t.V = CMat::Ones(1, 1);
    t.model.interferers = {{}, {}};
    t.model.prefactor = {1.0, 1.0};
    return t;
}

}  // namespace

TEST(OracleGrid, GeometricThenLinear)
{
    const auto g = oracle_grid(1.0, 20);
    ASSERT_EQ(g.size(), 20u);
    EXPECT_DOUBLE_EQ(g.front(), 1e-3);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    for (int k = 1; k < 10; ++k) EXPECT_NEAR(g[k] / g[k - 1], g[1] / g[0], 1e-12);
    EXPECT_NEAR(g[10], 0.1, 1e-15);
    EXPECT_THROW(oracle_grid(1.0, 1), InvalidInput);
}

TEST(GridRate, SingleUserTakesFullPower)
{
    const Tiny t = isolated_pair(4.0, 4.0);
    const OracleResult r = grid_maxmin_rate(t.V, t.h, t.model, t.W, t.cfg, 20);
    EXPECT_DOUBLE_EQ(r.P(0), t.cfg.p_max);
    EXPECT_DOUBLE_EQ(r.P(1), t.cfg.p_max);
    EXPECT_EQ(r.evaluated, 400);
}

TEST(GridEe, SingleUserMatchesScan)
{
    const Tiny t = isolated_pair(9.0, 9.0);
    const auto grid = oracle_grid(t.cfg.p_max, 20);
    double best = 0.0;
    for (double p : grid)
        if (9.0 * p / t.cfg.noise_power >= min_sinr(t.cfg))
            best = std::max(best, ee(rate(9.0 * p / t.cfg.noise_power), total_power(p, t.cfg)));
    const OracleResult r = grid_maxmin_ee(t.V, t.h, t.model, t.W, t.cfg, grid);
    EXPECT_DOUBLE_EQ(r.value, best);
}

TEST(GridRate, SymmetricInstanceGivesSymmetricPowers)
{
    Tiny t = isolated_pair(2.0, 2.0);
    t.model.interferers = {{1}, {0}};
    t.cfg.standard_min_rate = true;  // threshold 2^0 - 1 = 0: both users can be served
    const auto grid = oracle_grid(t.cfg.p_max, 20);
    const OracleResult r = grid_maxmin_rate(t.V, t.h, t.model, t.W, t.cfg, grid);
    const auto i0 = std::find(grid.begin(), grid.end(), r.P(0)) - grid.begin();
    const auto i1 = std::find(grid.begin(), grid.end(), r.P(1)) - grid.begin();
    EXPECT_LE(std::abs(i0 - i1), 1);
}

TEST(GridEe, InvariantToGridOrder)
{
    const Scenario sc = mmnoma::fixtures::desk_scenario(8, 2, 10.0, 0);
    const LinkModel model = scheme_model(Scheme::Scheme2, sc);
    auto grid = oracle_grid(sc.config.p_max, 8);
    const double a = grid_maxmin_ee(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, grid).value;
    std::reverse(grid.begin(), grid.end());
    const double b = grid_maxmin_ee(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, grid).value;
    EXPECT_EQ(a, b);
}

TEST(GridEe, RefinementNeverHurts)
{
    const Scenario sc = mmnoma::fixtures::desk_scenario(8, 2, 10.0, 1);
    const LinkModel model = scheme_model(Scheme::Scheme2, sc);
    std::vector<double> coarse, fine;
    for (int k = 1; k <= 6; ++k) coarse.push_back(sc.config.p_max * k / 6.0);
    for (int k = 1; k <= 12; ++k) fine.push_back(sc.config.p_max * k / 12.0);
    const double a = grid_maxmin_ee(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, coarse).value;
    const double b = grid_maxmin_ee(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, fine).value;
    EXPECT_GE(b, a);
}

TEST(GridRate, RatesGrowAsNoiseVanishes)
{
    Tiny t = isolated_pair(2.0, 1.0);
    t.model.interferers = {{1}, {}};
    double prev = -1.0;
    for (double noise : {1e-2, 1e-3, 1e-4, 1e-5}) {
        t.cfg.noise_power = noise;
        const double v = grid_maxmin_rate(t.V, t.h, t.model, t.W, t.cfg, 10).value;
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(GridEe, AllPointsInfeasibleThrows)
{
    Tiny t = isolated_pair(1e-6, 1e-6);
    t.cfg.r_min = 5.0;
    EXPECT_THROW(grid_maxmin_ee(t.V, t.h, t.model, t.W, t.cfg, 10), Infeasible);
}

TEST(GridEe, Scheme2WithinCellBound)
{
    const MaxminSettings settings;
    for (int drop = 0; drop < 3; ++drop) {
        ExperimentSpec spec = mmnoma::fixtures::desk_spec(8, 2);
        spec.users_per_beam = 2;
        const Scenario sc = first_usable_scenario(spec, 10.0, drop);
        const LinkModel model = scheme_model(Scheme::Scheme2, sc);
        const auto grid = oracle_grid(sc.config.p_max, 20);
        const Solution sol = scheme2_solve(sc, settings);
        const OracleResult orc = grid_maxmin_ee(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, grid);
        const double bound = ee_cell_bound(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, grid, sol.P);
        EXPECT_GE(sol.min_ee, orc.value - settings.epsilon);
        EXPECT_LE(sol.min_ee, orc.value + bound + settings.epsilon);
    }
}

TEST(GridRate, InnerLoopAtZeroEtaMatchesOracle)
{
    const MaxminSettings settings;
    ExperimentSpec spec = mmnoma::fixtures::desk_spec(8, 2);
    spec.users_per_beam = 2;
    const Scenario sc = first_usable_scenario(spec, 10.0, 2);
    const LinkModel model = scheme_model(Scheme::Scheme2, sc);
    const InnerResult r = inner_loop_power_only(0.0, sc.V_zf, model, sc, settings);
    const LinkMetrics m = evaluate_links(model, r.V, r.P, sc.h_bar, sc.plan.W, sc.config);
    const OracleResult orc = grid_maxmin_rate(sc.V_zf, sc.h_bar, model, sc.plan.W, sc.config, 20);
    EXPECT_GE(m.min_rate, orc.value - 1e-6);
    EXPECT_LE(m.min_rate, orc.value + 0.25);
}
