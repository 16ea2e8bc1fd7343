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

#ifndef MMNOMA_BASELINES_HPP
#define MMNOMA_BASELINES_HPP

#include "mmnoma/noma_core.hpp"

namespace mmnoma {

// Reference schemes. They share the SINR kernel with the proposed schemes;
// only the interference sets and slot shares differ.

/// Two-stage order: every strong user is decoded first with all weak users
/// as interference, then the weak users are decoded with SIC among
/// themselves (weaker weak users remain as interference).
LinkModel scheme3_model(const BeamPlan& plan);

/// No cross-cluster weak-user cancellation: each strong user sees every weak
/// user, each weak user sees the weak users of all other beams.
LinkModel scheme4_model(const BeamPlan& plan);

/// TDMA within a beam: strong users share the first half-slot, weak users the
/// second. Co-scheduled users on other beams interfere.
LinkModel oma_model(const BeamPlan& plan);

RVec scheme3_rates(const DetectionMatrix& V, const PowerAllocation& P, const BeamPlan& plan,
                   const SystemConfig& config);
RVec scheme4_rates(const DetectionMatrix& V, const PowerAllocation& P, const BeamPlan& plan,
                   const SystemConfig& config);
RVec oma_rates(const DetectionMatrix& V, const PowerAllocation& P, const BeamPlan& plan,
               const SystemConfig& config);

}  // namespace mmnoma

#endif  // MMNOMA_BASELINES_HPP
