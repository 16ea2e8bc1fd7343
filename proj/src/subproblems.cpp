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

#include "mmnoma/subproblems.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mmnoma {

namespace {

cdouble response(const RowCVec& v, const CVec& h) { return (v * h).value(); }

// Real-split coefficients of l(c) = h^T c for c = x + j y:
// Re l = alpha'[x; y], Im l = beta'[x; y].
void split_linear(const CVec& h, RVec& alpha, RVec& beta)
{
    const int M = static_cast<int>(h.size());
    alpha.resize(2 * M);
    beta.resize(2 * M);
    alpha << h.real(), -h.imag();
    beta << h.imag(), h.real();
}

// Adds scale * |h^T v_m|^2 as a quadratic form on the v_m block of the layout.
void add_response_square(RMat& quad, const DetectionLayout& layout, int m, const CVec& h,
                         double scale)
{
    RVec alpha, beta;
    split_linear(h, alpha, beta);
    const RMat block = scale * (alpha * alpha.transpose() + beta * beta.transpose());
    const int base = layout.v_re(m, 0);
    quad.block(base, base, 2 * layout.M, 2 * layout.M) += block;
}

std::string user_name(int u) { return "(" + std::to_string(u / 2 + 1) + "," + std::to_string(u % 2 + 1) + ")"; }

}  // namespace

double u_value(const RowCVec& v, const CVec& h_bar, double p) { return std::norm(response(v, h_bar)) * p; }

double LinearizedU::operator()(const RowCVec& v) const
{
    const RowCVec d = v - expansion;
    return value + 2.0 * (gradient.array() * d.conjugate().array()).sum().real();
}

LinearizedU linearize_u(const RowCVec& v_hat, const CVec& h_bar, double p_tilde)
{
    LinearizedU out;
    out.expansion = v_hat;
    out.value = u_value(v_hat, h_bar, p_tilde);
    // grad = p v_hat h h^H
    out.gradient = (p_tilde * response(v_hat, h_bar)) * h_bar.adjoint();
    return out;
}

double f_hat(double t, double q, double t_hat, double q_hat)
{
    if (!(t_hat > 0.0) || !(q_hat > 0.0))
        throw InvalidInput("f_hat: expansion point must be strictly positive");
    return t_hat / (2.0 * q_hat) * q * q + q_hat / (2.0 * t_hat) * t * t;
}

namespace {

double interference(const DetectionMatrix& V, const PowerAllocation& P, const std::vector<CVec>& h_bar,
                    const std::vector<int>& interferers, int user)
{
    const RowCVec v = V.row(beam_of(user));
    double sum = 0.0;
    for (int j : interferers) sum += std::norm(response(v, h_bar[j])) * P(j);
    return sum;
}

}  // namespace

double r2_value(const DetectionMatrix& V, const PowerAllocation& P, const std::vector<CVec>& h_bar,
                const std::vector<int>& interferers, int user, double noise)
{
    return std::log2(interference(V, P, h_bar, interferers, user) + noise);
}

double LinearizedR2::operator()(const PowerAllocation& P) const
{
    return value + gradient.dot(P - expansion);
}

LinearizedR2 linearize_r2(const DetectionMatrix& V, const PowerAllocation& P_hat,
                          const std::vector<CVec>& h_bar, const std::vector<int>& interferers,
                          int user, double noise)
{
    LinearizedR2 out;
    out.expansion = P_hat;
    const double level = interference(V, P_hat, h_bar, interferers, user) + noise;
    out.value = std::log2(level);
    out.gradient = RVec::Zero(P_hat.size());
    const RowCVec v = V.row(beam_of(user));
    for (int j : interferers)
        out.gradient(j) = std::norm(response(v, h_bar[j])) / (level * std::numbers::ln2);
    return out;
}

DetectionPoint exact_detection_point(const DetectionMatrix& V, const PowerAllocation& P,
                                     const LinkModel& model, const std::vector<CVec>& h_bar,
                                     const CMat& W, const SystemConfig& config)
{
    const int n = model.n_users();
    DetectionPoint point{V, RVec(n), RVec(n)};
    for (int u = 0; u < n; ++u) {
        const RowCVec v = V.row(beam_of(u));
        const double noise = noise_level(v.transpose(), W, config);
        const double den = interference(V, P, h_bar, model.interferers[u], u) + noise;
        point.Q(u) = den;
        point.T(u) = std::norm(response(v, h_bar[u])) * P(u) / den;
    }
    return point;
}

ConvexSubproblem build_detection_subproblem(double eta, const PowerAllocation& P_tilde,
                                            const DetectionPoint& expansion,
                                            const SystemConfig& config, const LinkModel& model,
                                            const std::vector<CVec>& h_bar, const CMat& W)
{
    const int M = static_cast<int>(W.rows());
    const int n_users = model.n_users();
    const DetectionLayout layout{M};
    const int n = layout.n_vars();
    const double noise = config.noise_power;
    if (expansion.T.size() != n_users || expansion.Q.size() != n_users || expansion.V.rows() != M)
        throw InvalidInput("build_detection_subproblem: expansion point has wrong dimensions");
    for (int u = 0; u < n_users; ++u)
        if (!(expansion.T(u) > 0.0) || !(expansion.Q(u) > 0.0))
            throw InvalidInput("build_detection_subproblem: t_hat and q_hat must be positive (user " +
                               user_name(u) + ")");

    ConvexSubproblem prob;
    prob.family = "detection";
    prob.objective = RVec::Zero(n);
    prob.objective(layout.z()) = 1.0;
    prob.names.resize(n);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < M; ++k) {
            prob.names[layout.v_re(m, k)] = "Re v" + std::to_string(m + 1) + "[" + std::to_string(k + 1) + "]";
            prob.names[layout.v_im(m, k)] = "Im v" + std::to_string(m + 1) + "[" + std::to_string(k + 1) + "]";
        }
    for (int u = 0; u < n_users; ++u) {
        prob.names[layout.t(u)] = "t" + user_name(u);
        prob.names[layout.q(u)] = "q" + user_name(u) + "/noise";
    }
    prob.names[layout.z()] = "z";

    auto blank = [&](ConstraintTag tag, std::string label) {
        Constraint c;
        c.tag = tag;
        c.label = std::move(label);
        c.lin = RVec::Zero(n);
        return c;
    };
    auto add_noise_form = [&](RMat& quad, int m) {
        for (int col = 0; col < W.cols(); ++col) add_response_square(quad, layout, m, W.col(col), 1.0);
    };

    for (int u = 0; u < n_users; ++u) {
        const int m = beam_of(u);
        const double pref = model.prefactor[u];
        const std::string who = user_name(u);

        // rate(t) >= z + eta * P_total
        Constraint rate_c = blank(ConstraintTag::LogRate, "log-rate " + who);
        rate_c.lin(layout.z()) = 1.0;
        rate_c.offset = eta * total_power(P_tilde(u), config);
        rate_c.log_weight = pref / std::numbers::ln2;
        rate_c.log_lin = RVec::Zero(n);
        rate_c.log_lin(layout.t(u)) = 1.0;
        rate_c.log_offset = 1.0;
        prob.constraints.push_back(std::move(rate_c));

        // t >= minimum SINR
        Constraint min_c = blank(ConstraintTag::Affine, "min-sinr " + who);
        min_c.lin(layout.t(u)) = -1.0;
        min_c.offset = min_sinr(config, pref);
        prob.constraints.push_back(std::move(min_c));

        // sum_{U(u)} |v h|^2 P / noise + noise' <= q
        Constraint intf = blank(ConstraintTag::QuadraticUpper, "interference " + who);
        intf.quad = RMat::Zero(n, n);
        for (int j : model.interferers[u]) add_response_square(intf.quad, layout, m, h_bar[j], P_tilde(j) / noise);
        if (config.exact_noise)
            add_noise_form(intf.quad, m);
        else
            intf.offset = 1.0;
        intf.lin(layout.q(u)) = -1.0;
        prob.constraints.push_back(std::move(intf));

        // f_hat(t, q) <= u_hat(v)
        const double t_hat = expansion.T(u);
        const double q_hat = expansion.Q(u) / noise;
        const RowCVec v_hat = expansion.V.row(m);
        const LinearizedU lin_u = linearize_u(v_hat, h_bar[u], P_tilde(u) / noise);
        Constraint surr = blank(ConstraintTag::LinearizedSurrogate, "surrogate " + who);
        surr.quad = RMat::Zero(n, n);
        surr.quad(layout.q(u), layout.q(u)) = t_hat / (2.0 * q_hat);
        surr.quad(layout.t(u), layout.t(u)) = q_hat / (2.0 * t_hat);
        double constant = lin_u.value;
        for (int k = 0; k < M; ++k) {
            const double gr = lin_u.gradient(k).real();
            const double gi = lin_u.gradient(k).imag();
            surr.lin(layout.v_re(m, k)) = -2.0 * gr;
            surr.lin(layout.v_im(m, k)) = -2.0 * gi;
            constant -= 2.0 * (gr * v_hat(k).real() + gi * v_hat(k).imag());
        }
        surr.offset = -constant;
        prob.constraints.push_back(std::move(surr));
    }

    for (int m = 0; m < M; ++m) {
        Constraint ball = blank(ConstraintTag::NormBall, "norm-ball v" + std::to_string(m + 1));
        ball.quad = RMat::Zero(n, n);
        add_noise_form(ball.quad, m);
        ball.offset = -1.0;
        prob.constraints.push_back(std::move(ball));
    }

    RVec start(n);
    double z0 = std::numeric_limits<double>::infinity();
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < M; ++k) {
            start(layout.v_re(m, k)) = expansion.V(m, k).real();
            start(layout.v_im(m, k)) = expansion.V(m, k).imag();
        }
    for (int u = 0; u < n_users; ++u) {
        start(layout.t(u)) = expansion.T(u);
        start(layout.q(u)) = expansion.Q(u) / noise;
        z0 = std::min(z0, model.prefactor[u] * std::log2(1.0 + expansion.T(u)) -
                              eta * total_power(P_tilde(u), config));
    }
    start(layout.z()) = z0;
    prob.start = start;
    return prob;
}

DetectionPoint decode_detection(const RVec& x, int M, const SystemConfig& config)
{
    const DetectionLayout layout{M};
    if (x.size() != layout.n_vars()) throw InvalidInput("decode_detection: wrong vector length");
    DetectionPoint point{CMat(M, M), RVec(2 * M), RVec(2 * M)};
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < M; ++k) point.V(m, k) = {x(layout.v_re(m, k)), x(layout.v_im(m, k))};
    for (int u = 0; u < 2 * M; ++u) {
        point.T(u) = x(layout.t(u));
        point.Q(u) = x(layout.q(u)) * config.noise_power;
    }
    return point;
}

ConvexSubproblem build_power_subproblem(double eta, const DetectionMatrix& V,
                                        const PowerAllocation& P_hat, const SystemConfig& config,
                                        const LinkModel& model, const std::vector<CVec>& h_bar,
                                        const CMat& W)
{
    const int n_users = model.n_users();
    const PowerLayout layout{n_users};
    const int n = layout.n_vars();
    const double noise = config.noise_power;
    const double p_max = config.p_max;
    if (P_hat.size() != n_users) throw InvalidInput("build_power_subproblem: P_hat has wrong length");

    ConvexSubproblem prob;
    prob.family = "power";
    prob.objective = RVec::Zero(n);
    prob.objective(layout.z()) = 1.0;
    prob.names.resize(n);
    for (int u = 0; u < n_users; ++u) prob.names[layout.p(u)] = "P" + user_name(u) + "/p_max";
    prob.names[layout.z()] = "z";

    auto blank = [&](ConstraintTag tag, std::string label) {
        Constraint c;
        c.tag = tag;
        c.label = std::move(label);
        c.lin = RVec::Zero(n);
        return c;
    };

    RVec start(n);
    double z0 = std::numeric_limits<double>::infinity();
    for (int u = 0; u < n_users; ++u) start(layout.p(u)) = std::clamp(P_hat(u) / p_max, 0.0, 1.0);
    const PowerAllocation P_start = start.head(n_users) * p_max;

    for (int u = 0; u < n_users; ++u) {
        const RowCVec v = V.row(beam_of(u));
        const double pref = model.prefactor[u];
        const double noise_phys = noise_level(v.transpose(), W, config);
        const double noise_n = noise_phys / noise;
        const std::string who = user_name(u);
        auto gain = [&](int j) { return std::norm(response(v, h_bar[j])) * p_max / noise; };

        // pref [R1(P) - R2_lin(P)] >= z + eta P_total
        const LinearizedR2 r2 = linearize_r2(V, P_hat, h_bar, model.interferers[u], u, noise_phys);
        Constraint rate_c = blank(ConstraintTag::LogRate, "log-rate " + who);
        rate_c.lin(layout.z()) = 1.0;
        rate_c.lin(layout.p(u)) += eta * config.amp_inefficiency * p_max;
        double offset = eta * config.circuit_power + pref * (r2.value - std::log2(noise));
        for (int j : model.interferers[u]) {
            rate_c.lin(layout.p(j)) += pref * r2.gradient(j) * p_max;
            offset -= pref * r2.gradient(j) * P_hat(j);
        }
        rate_c.offset = offset;
        rate_c.log_weight = pref / std::numbers::ln2;
        rate_c.log_lin = RVec::Zero(n);
        for (int j : model.interferers[u]) rate_c.log_lin(layout.p(j)) = gain(j);
        rate_c.log_lin(layout.p(u)) = gain(u);
        rate_c.log_offset = noise_n;
        prob.constraints.push_back(std::move(rate_c));

        // |v h_u|^2 P_u >= theta * (interference + noise), kept linear
        const double theta = min_sinr(config, pref);
        Constraint min_c = blank(ConstraintTag::Affine, "min-rate " + who);
        for (int j : model.interferers[u]) min_c.lin(layout.p(j)) = theta * gain(j);
        min_c.lin(layout.p(u)) = -gain(u);
        min_c.offset = theta * noise_n;
        prob.constraints.push_back(std::move(min_c));

        Constraint upper = blank(ConstraintTag::Box, "p-max " + who);
        upper.lin(layout.p(u)) = 1.0;
        upper.offset = -1.0;
        prob.constraints.push_back(std::move(upper));
        Constraint lower = blank(ConstraintTag::Box, "p-nonneg " + who);
        lower.lin(layout.p(u)) = -1.0;
        prob.constraints.push_back(std::move(lower));

        const double signal = std::norm(response(v, h_bar[u])) * P_start(u);
        const double den = interference(V, P_start, h_bar, model.interferers[u], u) + noise_phys;
        const double r1 = std::log2(den + signal);
        const double r2_lin = r2(P_start);
        z0 = std::min(z0, pref * (r1 - r2_lin) - eta * total_power(P_start(u), config));
    }
    start(layout.z()) = z0;
    prob.start = start;
    return prob;
}

PowerAllocation decode_power(const RVec& x, const SystemConfig& config)
{
    return x.head(x.size() - 1) * config.p_max;
}

}  // namespace mmnoma
