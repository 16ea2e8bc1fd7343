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

#ifndef MMNOMA_CLUSTERING_HPP
#define MMNOMA_CLUSTERING_HPP

#include <utility>
#include <vector>

#include "mmnoma/channel.hpp"

namespace mmnoma {

/// Received strength |f_k^H h|^2 for every codebook beam.
RVec measure_beam_strength(const Codebook& codebook, const CVec& h);

/// Interleaved beam family: {family, family + K/M, ...}, 1-based as in the
/// codebook numbering f_1..f_K.
std::vector<int> select_beams(int codebook_size, int n_rf, int family);

/// Analog beam matrix with row m = f_{k_m}^H for 1-based indices.
CMat beam_matrix(const Codebook& codebook, const std::vector<int>& beams);

/// Users are stored in slot order: slot u = 2*m + i, i = 0 strong, i = 1 weak.
struct ServedUser {
    int channel_index;  // index into the ChannelSet the plan was built from
    int beam;           // m, 0-based slot in the selected beam list
    int rank;           // i, 0 = strong, 1 = weak
    CVec h_bar;         // effective channel W h, length M
};

struct BeamPlan {
    std::vector<int> beams;  // 1-based codebook indices
    CMat W;                  // M x N
    std::vector<ServedUser> users;

    int n_beams() const { return static_cast<int>(beams.size()); }
    int n_users() const { return static_cast<int>(users.size()); }
    std::vector<CVec> effective_channels() const;
};

inline int slot_of(int beam, int rank) { return 2 * beam + rank; }

// Pair with the largest |gains[a] - gains[b]|, returned as (a, b) with a < b.
// Ties keep the lexicographically smallest pair.
std::pair<int, int> pick_pair(const std::vector<double>& gains);

// Index of the selected beam with the highest strength; ties go to the
// lowest selected slot.
int strongest_selected_beam(const RVec& strengths, const std::vector<int>& beams);

/// Attach every user to its strongest selected beam, keep the max-disparity
/// pair per beam and order it strong/weak by ||h_bar||.
/// Throws InfeasibleScenario when a beam ends up with fewer than two users.
BeamPlan cluster_users(const Codebook& codebook, const std::vector<int>& beams,
                       const ChannelSet& channels);

}  // namespace mmnoma

#endif  // MMNOMA_CLUSTERING_HPP
