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

#include "mmnoma/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmnoma {

RVec measure_beam_strength(const Codebook& codebook, const CVec& h)
{
    if (codebook.F.rows() != h.size())
        throw InvalidInput("measure_beam_strength: codebook has " +
                           std::to_string(codebook.F.rows()) + " antennas, h has " +
                           std::to_string(h.size()));
    const CVec response = codebook.F.adjoint() * h;
    return response.cwiseAbs2();
}

std::vector<int> select_beams(int codebook_size, int n_rf, int family)
{
    if (n_rf < 1 || codebook_size < 1 || codebook_size % n_rf != 0)
        throw InvalidInput("select_beams: n_rf must divide codebook_size");
    const int spacing = codebook_size / n_rf;
    if (family < 1 || family > spacing)
        throw InvalidInput("select_beams: family must lie in [1, K/M]");
    std::vector<int> beams(n_rf);
    for (int m = 0; m < n_rf; ++m) beams[m] = family + m * spacing;
    return beams;
}

CMat beam_matrix(const Codebook& codebook, const std::vector<int>& beams)
{
    CMat W(beams.size(), codebook.n_antennas());
    for (std::size_t m = 0; m < beams.size(); ++m) {
        const int k = beams[m];
        if (k < 1 || k > codebook.size()) throw InvalidInput("beam_matrix: index out of range");
        W.row(m) = codebook.F.col(k - 1).adjoint();
    }
    return W;
}

std::vector<CVec> BeamPlan::effective_channels() const
{
    std::vector<CVec> out;
    out.reserve(users.size());
    for (const auto& u : users) out.push_back(u.h_bar);
    return out;
}

std::pair<int, int> pick_pair(const std::vector<double>& gains)
{
    if (gains.size() < 2) throw InvalidInput("pick_pair: need at least two candidates");
    std::pair<int, int> best{0, 1};
    double best_gap = -1.0;
    for (std::size_t a = 0; a < gains.size(); ++a) {
        for (std::size_t b = a + 1; b < gains.size(); ++b) {
            const double gap = std::abs(gains[a] - gains[b]);
            if (gap > best_gap) {
                best_gap = gap;
                best = {static_cast<int>(a), static_cast<int>(b)};
            }
        }
    }
    return best;
}

int strongest_selected_beam(const RVec& strengths, const std::vector<int>& beams)
{
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < beams.size(); ++m) {
        const double s = strengths(beams[m] - 1);
        if (s > best_value) {
            best_value = s;
            best = static_cast<int>(m);
        }
    }
    return best;
}

BeamPlan cluster_users(const Codebook& codebook, const std::vector<int>& beams,
                       const ChannelSet& channels)
{
    BeamPlan plan;
    plan.beams = beams;
    plan.W = beam_matrix(codebook, beams);

    const int n_beams = static_cast<int>(beams.size());
    std::vector<std::vector<int>> candidates(n_beams);
    for (std::size_t c = 0; c < channels.users.size(); ++c) {
        const RVec strengths = measure_beam_strength(codebook, channels.users[c].h);
        candidates[strongest_selected_beam(strengths, beams)].push_back(static_cast<int>(c));
    }

    plan.users.resize(2 * n_beams);
    for (int m = 0; m < n_beams; ++m) {
        const auto& cand = candidates[m];
        if (cand.size() < 2)
            throw InfeasibleScenario("beam f_" + std::to_string(beams[m]) + " attracts " +
                                     std::to_string(cand.size()) + " user(s), need 2");
        std::vector<double> norms;
        std::vector<CVec> h_bars;
        for (int c : cand) {
            h_bars.push_back(effective_channel(plan.W, channels.users[c].h));
            norms.push_back(h_bars.back().norm());
        }
        auto [a, b] = pick_pair(norms);
        if (norms[b] > norms[a]) std::swap(a, b);
        plan.users[slot_of(m, 0)] = ServedUser{cand[a], m, 0, h_bars[a]};
        plan.users[slot_of(m, 1)] = ServedUser{cand[b], m, 1, h_bars[b]};
    }
    return plan;
}

}  // namespace mmnoma
