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

#include "mmnoma/noma_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmnoma {

DecodingOrder decoding_order(const std::vector<CVec>& effective_channels)
{
    const int n = static_cast<int>(effective_channels.size());
    std::vector<double> norms(n);
    for (int u = 0; u < n; ++u) norms[u] = effective_channels[u].norm();

    DecodingOrder order;
    order.ordering.resize(n);
    std::iota(order.ordering.begin(), order.ordering.end(), 0);
    std::stable_sort(order.ordering.begin(), order.ordering.end(),
                     [&](int a, int b) { return norms[a] > norms[b]; });
    order.position.resize(n);
    for (int k = 0; k < n; ++k) order.position[order.ordering[k]] = k;
    order.weaker.resize(n);
    for (int k = 0; k < n; ++k)
        order.weaker[order.ordering[k]].assign(order.ordering.begin() + k + 1, order.ordering.end());
    return order;
}

LinkModel global_sic_model(const DecodingOrder& order)
{
    LinkModel model;
    model.interferers = order.weaker;
    model.prefactor.assign(order.weaker.size(), 1.0);
    return model;
}

LinkModel zf_weak_model(const DecodingOrder& order)
{
    LinkModel model;
    const int n = static_cast<int>(order.weaker.size());
    model.interferers.resize(n);
    for (int u = 0; u < n; ++u)
        for (int j : order.weaker[u])
            if (j % 2 == 1) model.interferers[u].push_back(j);
    model.prefactor.assign(n, 1.0);
    return model;
}

double noise_level(const CVec& v, const CMat& W, const SystemConfig& config)
{
    if (!config.exact_noise) return config.noise_power;
    return (v.transpose() * W).squaredNorm() * config.noise_power;
}

double sinr(const DetectionMatrix& V, const PowerAllocation& P, const std::vector<CVec>& h_bar,
            const std::vector<int>& interferers, int user, double noise)
{
    const auto v = V.row(beam_of(user));
    const double signal = std::norm(v.dot(h_bar[user].conjugate())) * P(user);
    double interference = 0.0;
    for (int j : interferers) interference += std::norm(v.dot(h_bar[j].conjugate())) * P(j);
    return signal / (interference + noise);
}

double rate(double gamma) { return std::log2(1.0 + gamma); }

double total_power(double p, const SystemConfig& config)
{
    return config.circuit_power + config.amp_inefficiency * p;
}

double ee(double rate_bits, double total_power_watts) { return rate_bits / total_power_watts; }

LinkMetrics evaluate_links(const LinkModel& model, const DetectionMatrix& V,
                           const PowerAllocation& P, const std::vector<CVec>& h_bar,
                           const CMat& W, const SystemConfig& config)
{
    const int n = model.n_users();
    LinkMetrics out;
    out.sinr.resize(n);
    out.rate.resize(n);
    out.ee.resize(n);
    for (int u = 0; u < n; ++u) {
        const CVec v = V.row(beam_of(u)).transpose();
        const double noise = noise_level(v, W, config);
        out.sinr(u) = sinr(V, P, h_bar, model.interferers[u], u, noise);
        out.rate(u) = model.prefactor[u] * rate(out.sinr(u));
        out.ee(u) = ee(out.rate(u), total_power(P(u), config));
    }
    out.min_rate = out.rate.minCoeff();
    out.sum_rate = out.rate.sum();
    out.min_ee = out.ee.minCoeff();
    return out;
}

double fractional_objective(const LinkMetrics& metrics, const PowerAllocation& P, double eta,
                            const SystemConfig& config)
{
    double z = std::numeric_limits<double>::infinity();
    for (int u = 0; u < metrics.rate.size(); ++u)
        z = std::min(z, metrics.rate(u) - eta * total_power(P(u), config));
    return z;
}

DetectionMatrix zf_detection(const std::vector<CVec>& strong_channels, const CMat& W)
{
    const int M = static_cast<int>(strong_channels.size());
    if (M == 0 || W.rows() != M) throw InvalidInput("zf_detection: need one strong user per beam");
    CMat H(M, M);
    for (int m = 0; m < M; ++m) {
        if (strong_channels[m].size() != M) throw InvalidInput("zf_detection: h_bar must have length M");
        H.col(m) = strong_channels[m];
    }
    Eigen::JacobiSVD<CMat> svd(H);
    const RVec s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    if (!(smallest > 0.0) || s(0) / smallest > 1e12)
        throw DegenerateChannel("zf_detection: strong-user channel matrix is singular");

    // (H^H H)^{-1} H^H reduces to H^{-1} for square H.
    DetectionMatrix V = (H.adjoint() * H).partialPivLu().solve(H.adjoint());
    for (int m = 0; m < M; ++m) {
        const double scale = (V.row(m) * W).norm();
        V.row(m) /= scale;
    }
    return V;
}

RVec zf_sinr(const DetectionMatrix& V, const PowerAllocation& P, const std::vector<CVec>& h_bar,
             const DecodingOrder& order, const CMat& W, const SystemConfig& config)
{
    const LinkModel model = zf_weak_model(order);
    RVec out(model.n_users());
    for (int u = 0; u < model.n_users(); ++u) {
        const CVec v = V.row(beam_of(u)).transpose();
        out(u) = sinr(V, P, h_bar, model.interferers[u], u, noise_level(v, W, config));
    }
    return out;
}

IterationCounters& IterationCounters::operator+=(const IterationCounters& other)
{
    outer += other.outer;
    alternation += other.alternation;
    sca += other.sca;
    cccp += other.cccp;
    newton += other.newton;
    return *this;
}

Solution make_solution(const LinkModel& model, const DetectionMatrix& V, const PowerAllocation& P,
                       const std::vector<CVec>& h_bar, const CMat& W, const SystemConfig& config,
                       double eta)
{
    const LinkMetrics m = evaluate_links(model, V, P, h_bar, W, config);
    Solution s;
    s.V = V;
    s.P = P;
    s.rates = m.rate;
    s.ees = m.ee;
    s.min_ee = m.min_ee;
    s.min_rate = m.min_rate;
    s.sum_rate = m.sum_rate;
    s.eta = eta;
    s.objective = fractional_objective(m, P, eta, config);
    return s;
}

}  // namespace mmnoma
