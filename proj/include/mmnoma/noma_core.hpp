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

#ifndef MMNOMA_NOMA_CORE_HPP
#define MMNOMA_NOMA_CORE_HPP

#include <vector>

#include "mmnoma/clustering.hpp"

namespace mmnoma {

// Row m is the detection vector v_m (length M) applied to the effective
// channels of beam m's users.
using DetectionMatrix = CMat;

// Entry u = 2*m + i is P_mi in watts.
using PowerAllocation = RVec;

/// Global SIC order by effective-channel strength.
struct DecodingOrder {
    std::vector<int> ordering;           // slots, strongest first
    std::vector<int> position;           // position[u] = index of u in ordering
    std::vector<std::vector<int>> weaker;  // U(u): slots decoded after u

    bool precedes(int a, int b) const { return position[a] < position[b]; }
};

/// Sort by ||h_bar|| descending; ties keep slot order.
DecodingOrder decoding_order(const std::vector<CVec>& effective_channels);

/// Who interferes with whom, and what share of the slot each user gets.
/// Every scheme (global SIC, ZF, baselines, OMA) is one of these.
struct LinkModel {
    std::vector<std::vector<int>> interferers;  // per slot
    std::vector<double> prefactor;              // rate scaling, 1 or 1/2

    int n_users() const { return static_cast<int>(interferers.size()); }
};

/// Scheme 1: interference from every user decoded later, U(m,i).
LinkModel global_sic_model(const DecodingOrder& order);

/// ZF schemes: only weak users decoded later interfere, U_2(m,i).
LinkModel zf_weak_model(const DecodingOrder& order);

double noise_level(const CVec& v, const CMat& W, const SystemConfig& config);

/// |v_m h_bar_u|^2 P_u / (sum over interferers + noise), m = beam of u.
double sinr(const DetectionMatrix& V, const PowerAllocation& P,
            const std::vector<CVec>& h_bar, const std::vector<int>& interferers, int user,
            double noise);

inline int beam_of(int slot) { return slot / 2; }

double rate(double gamma);
double total_power(double p, const SystemConfig& config);
double ee(double rate_bits, double total_power_watts);

struct LinkMetrics {
    RVec sinr;
    RVec rate;
    RVec ee;
    double min_rate = 0.0;
    double sum_rate = 0.0;
    double min_ee = 0.0;
};

LinkMetrics evaluate_links(const LinkModel& model, const DetectionMatrix& V,
                           const PowerAllocation& P, const std::vector<CVec>& h_bar,
                           const CMat& W, const SystemConfig& config);

// min over users of [rate - eta * P_total]
double fractional_objective(const LinkMetrics& metrics, const PowerAllocation& P, double eta,
                            const SystemConfig& config);

/// ZF detection on the strong users' effective channels, rows rescaled so
/// that ||v_m W|| = 1. Throws DegenerateChannel when cond(H) > 1e12.
DetectionMatrix zf_detection(const std::vector<CVec>& strong_channels, const CMat& W);

/// Per-user ZF SINR with interference restricted to weaker weak users.
RVec zf_sinr(const DetectionMatrix& V, const PowerAllocation& P,
             const std::vector<CVec>& h_bar, const DecodingOrder& order, const CMat& W,
             const SystemConfig& config);

struct IterationCounters {
    int outer = 0;         // bisection steps
    int alternation = 0;   // V/P alternation rounds
    int sca = 0;           // detection subproblem solves
    int cccp = 0;          // power subproblem solves
    int newton = 0;        // Newton steps across all solves

    IterationCounters& operator+=(const IterationCounters& other);
};

struct Solution {
    DetectionMatrix V;
    PowerAllocation P;
    RVec rates;
    RVec ees;
    double min_ee = 0.0;
    double min_rate = 0.0;
    double sum_rate = 0.0;
    double eta = 0.0;        // bisection root (or the eta the inner loop ran at)
    double objective = 0.0;  // min_u [rate - eta P_total] at (V, P)
    IterationCounters counters;
    std::vector<double> outer_trace;  // L(eta') per bisection step
    std::vector<double> inner_trace;  // z per inner iteration, last evaluation
};

Solution make_solution(const LinkModel& model, const DetectionMatrix& V, const PowerAllocation& P,
                       const std::vector<CVec>& h_bar, const CMat& W, const SystemConfig& config,
                       double eta);

}  // namespace mmnoma

#endif  // MMNOMA_NOMA_CORE_HPP
