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

#ifndef MMNOMA_MAXMIN_HPP
#define MMNOMA_MAXMIN_HPP

#include <functional>
#include <string>
#include <vector>

#include "mmnoma/subproblems.hpp"

namespace mmnoma {

enum class Scheme { Scheme1, Scheme2, Scheme3, Scheme4, Oma };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);  // "scheme1".."scheme4", "oma"

/// Everything a solver needs about one drop.
struct Scenario {
    SystemConfig config;
    BeamPlan plan;
    std::vector<CVec> h_bar;  // slot order
    DecodingOrder order;
    DetectionMatrix V_zf;
};

/// Throws DegenerateChannel when ZF detection does not exist.
Scenario make_scenario(const SystemConfig& config, BeamPlan plan);

struct MaxminSettings {
    double epsilon = 1e-3;     // bisection tolerance on |L|, bit/J/Hz
    double inner_tol = 1e-5;   // |dz| <= inner_tol * max(1, |z|)
    int max_rounds = 30;       // V/P alternation
    int max_sca = 30;
    int max_cccp = 30;
    int max_outer = 60;
    SolverOptions solver;
};

struct PowerStep {
    PowerAllocation P;
    double z = 0.0;
    std::vector<double> trace;  // surrogate optimum per CCCP iteration
    IterationCounters counters;
};

/// CCCP over P with V fixed, starting from P_hat.
/// Throws Infeasible when the first subproblem has no feasible point.
PowerStep cccp_power_step(double eta, const DetectionMatrix& V, const PowerAllocation& P_hat,
                           const LinkModel& model, const Scenario& scenario,
                           const MaxminSettings& settings);

struct DetectionStep {
    DetectionPoint point;
    double z = 0.0;
    std::vector<double> trace;  // surrogate optimum per SCA iteration
    IterationCounters counters;
};

/// SCA over (V, T, Q) with P fixed to P_tilde.
DetectionStep sca_detection_step(double eta, const PowerAllocation& P_tilde,
                                   const DetectionPoint& initial, const LinkModel& model,
                                   const Scenario& scenario, const MaxminSettings& settings);

struct InnerResult {
    DetectionMatrix V;
    PowerAllocation P;
    double z = 0.0;  // min_u [R_u - eta P_total_u] at (V, P)
    std::vector<double> trace;  // z after every alternation round (round 0 = ZF power step)
    std::vector<std::vector<double>> detection_traces;
    std::vector<std::vector<double>> power_traces;
    IterationCounters counters;
};

/// Scheme 1 inner problem at a fixed eta: ZF/p_max start, then alternate
/// detection and power steps while z improves.
InnerResult inner_loop_scheme1(double eta, const Scenario& scenario,
                               const MaxminSettings& settings);

/// Same, warm-started from a known (V0, P0) instead of the ZF start.
InnerResult inner_loop_scheme1(double eta, const Scenario& scenario,
                               const MaxminSettings& settings, const DetectionMatrix& V0,
                               const PowerAllocation& P0);

/// Power-only inner problem for a fixed detection matrix (schemes 2-4, OMA).
InnerResult inner_loop_power_only(double eta, const DetectionMatrix& V, const LinkModel& model,
                                  const Scenario& scenario, const MaxminSettings& settings);

LinkModel scheme_model(Scheme scheme, const Scenario& scenario);

struct LEvaluation {
    double L = 0.0;
    Solution solution;
    InnerResult inner;
};

LEvaluation evaluate_L(double eta, const Scenario& scenario, Scheme scheme,
                       const MaxminSettings& settings);

/// min over users of the interference-free single-user EE optimum. No
/// feasible allocation can give every user more than this.
double eta_upper_bound(const Scenario& scenario, const LinkModel& model);

/// Bisection on an arbitrary L. Stops when |L(eta')| < epsilon or the
/// bracket is narrower than epsilon.
struct BisectionTrace {
    double eta = 0.0;
    int iterations = 0;
    double low = 0.0;
    double high = 0.0;
    std::vector<double> etas;
    std::vector<double> values;
};

BisectionTrace bisect(const std::function<double(double)>& L, double low, double high,
                      double epsilon, int max_iterations = 200);

/// Full scheme: bracket [0, eta_upper_bound], bisection on evaluate_L.
Solution bisection(const Scenario& scenario, Scheme scheme, const MaxminSettings& settings);

Solution scheme1_solve(const Scenario& scenario, const MaxminSettings& settings);
Solution scheme2_solve(const Scenario& scenario, const MaxminSettings& settings);

}  // namespace mmnoma

#endif  // MMNOMA_MAXMIN_HPP
