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

#include "mmnoma/noma_core.hpp"
#include "fixtures.hpp"

using namespace mmnoma;

namespace {

std::vector<CVec> channels_with_norms(const std::vector<double>& norms)
{
    std::vector<CVec> out;
    for (double n : norms) {
        CVec h = CVec::Zero(2);
        h(0) = n;
        out.push_back(h);
    }
    return out;
}

std::vector<CVec> random_channels(int n, int M, std::uint64_t seed)
{
    Rng rng = make_stream(seed, {});
    std::vector<CVec> out;
    for (int u = 0; u < n; ++u) {
        CVec h(M);
        for (int k = 0; k < M; ++k) h(k) = complex_gaussian(rng);
        out.push_back(h);
    }
    return out;
}

}  // namespace

TEST(DecodingOrder, StrongestFirst)
{
    const DecodingOrder o = decoding_order(channels_with_norms({3.0, 1.0, 4.0, 2.0}));
    EXPECT_EQ(o.ordering, (std::vector<int>{2, 0, 3, 1}));
    EXPECT_EQ(o.weaker[2].size(), 3u);
    EXPECT_TRUE(o.weaker[1].empty());
    EXPECT_TRUE(o.precedes(0, 3));
}

TEST(DecodingOrder, TiesKeepIndexOrder)
{
    const DecodingOrder o = decoding_order(channels_with_norms({1.0, 1.0, 1.0, 1.0}));
    EXPECT_EQ(o.ordering, (std::vector<int>{0, 1, 2, 3}));
}

TEST(DecodingOrder, MatchesSortOracle)
{
    const auto h = random_channels(8, 4, 21);
    const DecodingOrder o = decoding_order(h);
    std::size_t pairs = 0;
    for (int u = 0; u < 8; ++u) {
        for (int j = 0; j < 8; ++j) {
            const bool in = std::find(o.weaker[u].begin(), o.weaker[u].end(), j) != o.weaker[u].end();
            EXPECT_EQ(in, h[j].norm() < h[u].norm());
        }
        pairs += o.weaker[u].size();
    }
    EXPECT_EQ(pairs, 8u * 7u / 2u);
}

TEST(Sinr, ZeroPowerGivesZero)
{
    const auto h = random_channels(4, 2, 2);
    const DetectionMatrix V = CMat::Identity(2, 2);
    const PowerAllocation P = PowerAllocation::Zero(4);
    EXPECT_EQ(sinr(V, P, h, {1, 2, 3}, 0, 1e-3), 0.0);
}

TEST(Sinr, UnitGainAtNoisePower)
{
    std::vector<CVec> h{CVec::Ones(1), CVec::Zero(1)};
    const DetectionMatrix V = CMat::Ones(1, 1);
    PowerAllocation P(2);
    P << 1e-3, 0.0;
    EXPECT_NEAR(sinr(V, P, h, {}, 0, 1e-3), 1.0, 1e-15);
}

TEST(Sinr, MatchesDirectSummation)
{
    const auto h = random_channels(4, 2, 5);
    Rng rng = make_stream(6, {});
    DetectionMatrix V(2, 2);
    for (int i = 0; i < 4; ++i) V(i / 2, i % 2) = complex_gaussian(rng);
    PowerAllocation P(4);
    P << 0.01, 0.004, 0.007, 0.002;
    const std::vector<int> interferers{1, 3};
    const int user = 2;  // beam 1
    auto gain = [&](int j) {
        const cdouble r = V(1, 0) * h[j](0) + V(1, 1) * h[j](1);
        return std::norm(r);
    };
    const double ref = gain(2) * P(2) / (gain(1) * P(1) + gain(3) * P(3) + 1e-3);
    EXPECT_NEAR(sinr(V, P, h, interferers, user, 1e-3), ref, 1e-12 * ref);
}

TEST(RateAndEe, Arithmetic)
{
    SystemConfig cfg;
    EXPECT_DOUBLE_EQ(rate(1.0), 1.0);
    EXPECT_DOUBLE_EQ(ee(1.0, total_power(0.0, cfg)), 10.0);
    cfg.amp_inefficiency = 0.1 / 0.038;
    EXPECT_NEAR(ee(rate(3.0), total_power(0.038, cfg)), 10.0, 1e-12);
}

TEST(RateAndEe, Monotone)
{
    SystemConfig cfg;
    double prev_rate = -1.0, prev_ee = 1e300;
    for (double g = 0.0; g < 50.0; g += 0.5) {
        EXPECT_GT(rate(g), prev_rate);
        prev_rate = rate(g);
    }
    for (double p = 0.0; p < 0.1; p += 0.01) {
        const double e = ee(2.0, total_power(p, cfg));
        EXPECT_LT(e, prev_ee);
        prev_ee = e;
    }
}

TEST(ZfDetection, IdentityChannel)
{
    const CMat W = CMat::Identity(2, 2);
    const DetectionMatrix V = zf_detection({CVec::Unit(2, 0), CVec::Unit(2, 1)}, W);
    EXPECT_LT((V - CMat::Identity(2, 2)).norm(), 1e-14);
}

TEST(ZfDetection, NullsOtherStrongUsers)
{
    for (int drop = 0; drop < 10; ++drop) {
        const Scenario sc = fixtures::desk_scenario(16, 4, 10.0, drop);
        const int M = sc.plan.n_beams();
        for (int m = 0; m < M; ++m) {
            EXPECT_NEAR((sc.V_zf.row(m) * sc.plan.W).norm(), 1.0, 1e-9);
            for (int j = 0; j < M; ++j)
                if (j != m) {
                    EXPECT_LT(std::abs((sc.V_zf.row(m) * sc.h_bar[slot_of(j, 0)]).value()), 1e-9);
                }
        }
    }
}

TEST(ZfDetection, SingularChannelThrows)
{
    const CMat W = CMat::Identity(2, 2);
    CVec a(2);
    a << 1.0, 2.0;
    EXPECT_THROW(zf_detection({a, 2.0 * a}, W), DegenerateChannel);
}

TEST(ZfSinr, StrongUsersOnlySeeWeakUsers)
{
    const Scenario sc = fixtures::desk_scenario(16, 2, 10.0, 3);
    const LinkModel m = zf_weak_model(sc.order);
    for (int u = 0; u < 4; ++u)
        for (int j : m.interferers[u]) {
            EXPECT_EQ(j % 2, 1);
            EXPECT_FALSE(sc.order.precedes(j, u));
        }
}

TEST(ZfSinr, NoWeakPowerMeansNoiseLimited)
{
    const Scenario sc = fixtures::desk_scenario(16, 2, 10.0, 4);
    PowerAllocation P(4);
    P << 0.01, 0.0, 0.005, 0.0;
    const RVec g = zf_sinr(sc.V_zf, P, sc.h_bar, sc.order, sc.plan.W, sc.config);
    for (int m = 0; m < 2; ++m) {
        const int u = slot_of(m, 0);
        const double ref = std::norm((sc.V_zf.row(m) * sc.h_bar[u]).value()) * P(u) / sc.config.noise_power;
        EXPECT_NEAR(g(u), ref, 1e-12 * ref);
    }
}

TEST(ZfSinr, EqualsKernelWithRestrictedSet)
{
    const Scenario sc = fixtures::desk_scenario(16, 2, 10.0, 6);
    PowerAllocation P(4);
    P << 0.01, 0.003, 0.006, 0.008;
    const RVec g = zf_sinr(sc.V_zf, P, sc.h_bar, sc.order, sc.plan.W, sc.config);
    for (int u = 0; u < 4; ++u) {
        std::vector<int> set;
        for (int j : sc.order.weaker[u])
            if (j % 2 == 1) set.push_back(j);
        EXPECT_DOUBLE_EQ(g(u), sinr(sc.V_zf, P, sc.h_bar, set, u, sc.config.noise_power));
    }
}

TEST(LinkModels, GlobalSicEqualsZfModelUnderZf)
{
    // Strong users are nulled by ZF, so both models give the same SINR.
    const Scenario sc = fixtures::desk_scenario(16, 2, 10.0, 8);
    PowerAllocation P(4);
    P << 0.01, 0.003, 0.006, 0.008;
    const LinkMetrics a = evaluate_links(global_sic_model(sc.order), sc.V_zf, P, sc.h_bar, sc.plan.W, sc.config);
    const LinkMetrics b = evaluate_links(zf_weak_model(sc.order), sc.V_zf, P, sc.h_bar, sc.plan.W, sc.config);
    EXPECT_LT((a.rate - b.rate).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(LinkModels, ExactNoiseScalesByDetectorGain)
{
    SystemConfig cfg;
    cfg.exact_noise = true;
    CMat W = CMat::Identity(2, 2);
    CVec v(2);
    v << 0.5, 0.0;
    EXPECT_NEAR(noise_level(v, W, cfg), 0.25 * cfg.noise_power, 1e-18);
    cfg.exact_noise = false;
    EXPECT_EQ(noise_level(v, W, cfg), cfg.noise_power);
}

TEST(Solution, MetricsAreConsistent)
{
    const Scenario sc = fixtures::desk_scenario(16, 2, 10.0, 1);
    PowerAllocation P = PowerAllocation::Constant(4, sc.config.p_max / 2);
    const LinkModel m = zf_weak_model(sc.order);
    const Solution s = make_solution(m, sc.V_zf, P, sc.h_bar, sc.plan.W, sc.config, 3.0);
    EXPECT_DOUBLE_EQ(s.min_rate, s.rates.minCoeff());
    EXPECT_DOUBLE_EQ(s.sum_rate, s.rates.sum());
    EXPECT_DOUBLE_EQ(s.min_ee, s.ees.minCoeff());
    double z = 1e300;
    for (int u = 0; u < 4; ++u) z = std::min(z, s.rates(u) - 3.0 * total_power(P(u), sc.config));
    EXPECT_DOUBLE_EQ(s.objective, z);
}

TEST(MinSinr, DefaultAndStandardForms)
{
    SystemConfig cfg;
    cfg.r_min = 1.0;
    EXPECT_DOUBLE_EQ(min_sinr(cfg), 2.0);
    EXPECT_DOUBLE_EQ(min_sinr(cfg, 0.5), 4.0);
    cfg.standard_min_rate = true;
    EXPECT_DOUBLE_EQ(min_sinr(cfg), 1.0);
}
