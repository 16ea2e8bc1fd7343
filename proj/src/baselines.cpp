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

#include "mmnoma/baselines.hpp"

namespace mmnoma {

namespace {

RVec rates_for(const LinkModel& model, const DetectionMatrix& V, const PowerAllocation& P,
               const BeamPlan& plan, const SystemConfig& config)
{
    if (P.size() != model.n_users()) throw InvalidInput("baseline rates: power vector has wrong length");
    return evaluate_links(model, V, P, plan.effective_channels(), plan.W, config).rate;
}

}  // namespace

LinkModel scheme3_model(const BeamPlan& plan)
{
    // Strong users go first and treat every weak user as noise; the weak
    // users are then decoded among themselves, strongest first.
    const int M = plan.n_beams();
    const DecodingOrder order = decoding_order(plan.effective_channels());
    LinkModel model;
    model.interferers.resize(2 * M);
    model.prefactor.assign(2 * M, 1.0);
    for (int m = 0; m < M; ++m) {
        for (int l = 0; l < M; ++l) model.interferers[slot_of(m, 0)].push_back(slot_of(l, 1));
        for (int j : order.weaker[slot_of(m, 1)])
            if (j % 2 == 1) model.interferers[slot_of(m, 1)].push_back(j);
    }
    return model;
}

LinkModel scheme4_model(const BeamPlan& plan)
{
    const int M = plan.n_beams();
    LinkModel model;
    model.interferers.resize(2 * M);
    model.prefactor.assign(2 * M, 1.0);
    for (int m = 0; m < M; ++m)
        for (int l = 0; l < M; ++l) {
            model.interferers[slot_of(m, 0)].push_back(slot_of(l, 1));
            if (l != m) model.interferers[slot_of(m, 1)].push_back(slot_of(l, 1));
        }
    return model;
}

LinkModel oma_model(const BeamPlan& plan)
{
    const int M = plan.n_beams();
    LinkModel model;
    model.interferers.resize(2 * M);
    model.prefactor.assign(2 * M, 0.5);
    for (int m = 0; m < M; ++m)
        for (int l = 0; l < M; ++l)
            if (l != m)
                for (int i = 0; i < 2; ++i) model.interferers[slot_of(m, i)].push_back(slot_of(l, i));
    return model;
}

RVec scheme3_rates(const DetectionMatrix& V, const PowerAllocation& P, const BeamPlan& plan,
                   const SystemConfig& config)
{
    return rates_for(scheme3_model(plan), V, P, plan, config);
}

RVec scheme4_rates(const DetectionMatrix& V, const PowerAllocation& P, const BeamPlan& plan,
                   const SystemConfig& config)
{
    return rates_for(scheme4_model(plan), V, P, plan, config);
}

RVec oma_rates(const DetectionMatrix& V, const PowerAllocation& P, const BeamPlan& plan,
               const SystemConfig& config)
{
    return rates_for(oma_model(plan), V, P, plan, config);
}

}  // namespace mmnoma
