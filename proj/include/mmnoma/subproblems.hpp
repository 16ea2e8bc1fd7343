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

#ifndef MMNOMA_SUBPROBLEMS_HPP
#define MMNOMA_SUBPROBLEMS_HPP

#include <vector>

#include "mmnoma/cvx_solver.hpp"
#include "mmnoma/noma_core.hpp"

namespace mmnoma {

using RowCVec = Eigen::RowVectorXcd;

// u(v) = v H v^H p with H = h h^H, i.e. |v h|^2 p.
double u_value(const RowCVec& v, const CVec& h_bar, double p);

/// First-order expansion of u around v_hat:
///   u_hat(v) = u(v_hat) + <grad, v - v_hat>,  <a, b> = 2 Re{a b^H},
/// with grad = p v_hat H. Since u is convex, u_hat(v) <= u(v).
struct LinearizedU {
    RowCVec expansion;
    RowCVec gradient;
    double value = 0.0;

    double operator()(const RowCVec& v) const;
};

LinearizedU linearize_u(const RowCVec& v_hat, const CVec& h_bar, double p_tilde);

/// Convex upper bound of t*q, tight at (t_hat, q_hat):
///   (t_hat / 2 q_hat) q^2 + (q_hat / 2 t_hat) t^2.
/// Throws InvalidInput unless t_hat > 0 and q_hat > 0.
double f_hat(double t, double q, double t_hat, double q_hat);

// R2_u(P) = log2(sum_{U(u)} |v h|^2 P + noise), the interference part of the rate.
double r2_value(const DetectionMatrix& V, const PowerAllocation& P,
                const std::vector<CVec>& h_bar, const std::vector<int>& interferers, int user,
                double noise);

/// Tangent of the concave R2 at P_hat. gradient[k] is d R2 / d P_k in 1/W;
/// entries outside the interferer set are zero.
struct LinearizedR2 {
    PowerAllocation expansion;
    RVec gradient;
    double value = 0.0;

    double operator()(const PowerAllocation& P) const;
};

LinearizedR2 linearize_r2(const DetectionMatrix& V, const PowerAllocation& P_hat,
                          const std::vector<CVec>& h_bar, const std::vector<int>& interferers,
                          int user, double noise);

/// Expansion point of the detection subproblem. T is the SINR lower bound,
/// Q the interference-plus-noise upper bound in watts.
struct DetectionPoint {
    DetectionMatrix V;
    RVec T;
    RVec Q;
};

// Exact SINR numerators/denominators at (V, P): T = SINR, Q = denominator.
DetectionPoint exact_detection_point(const DetectionMatrix& V, const PowerAllocation& P,
                                     const LinkModel& model, const std::vector<CVec>& h_bar,
                                     const CMat& W, const SystemConfig& config);

/// Variable layout of the detection subproblem:
/// [Re v_1, Im v_1, ..., Re v_M, Im v_M, t_1..t_2M, q_1..q_2M, z].
/// q is stored in units of the noise power.
struct DetectionLayout {
    int M = 0;

    int n_vars() const { return 2 * M * M + 4 * M + 1; }
    int v_re(int m, int k) const { return 2 * M * m + k; }
    int v_im(int m, int k) const { return 2 * M * m + M + k; }
    int t(int u) const { return 2 * M * M + u; }
    int q(int u) const { return 2 * M * M + 2 * M + u; }
    int z() const { return 2 * M * M + 4 * M; }
};

/// Convex restriction around `expansion` with P fixed to P_tilde. Per user:
/// rate-vs-z (LogRate), t >= min SINR (Affine), interference <= q
/// (QuadraticUpper), u_hat >= f_hat (LinearizedSurrogate); per beam the
/// ||v W||^2 <= 1 ball. Throws InvalidInput on a non-positive t or q.
ConvexSubproblem build_detection_subproblem(double eta, const PowerAllocation& P_tilde,
                                            const DetectionPoint& expansion,
                                            const SystemConfig& config, const LinkModel& model,
                                            const std::vector<CVec>& h_bar, const CMat& W);

DetectionPoint decode_detection(const RVec& x, int M, const SystemConfig& config);

/// Layout of the power subproblem: [p_1..p_2M, z], p = P / p_max.
struct PowerLayout {
    int n_users = 0;

    int n_vars() const { return n_users + 1; }
    int p(int u) const { return u; }
    int z() const { return n_users; }
};

/// CCCP restriction around P_hat with V fixed: concave R1 minus the tangent of
/// R2 (LogRate), the min-SINR constraint written linearly (Affine) and the
/// power box (Box, two per user).
ConvexSubproblem build_power_subproblem(double eta, const DetectionMatrix& V,
                                        const PowerAllocation& P_hat, const SystemConfig& config,
                                        const LinkModel& model, const std::vector<CVec>& h_bar,
                                        const CMat& W);

PowerAllocation decode_power(const RVec& x, const SystemConfig& config);

}  // namespace mmnoma

#endif  // MMNOMA_SUBPROBLEMS_HPP
