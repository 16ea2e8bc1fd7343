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

#ifndef MMNOMA_CHANNEL_HPP
#define MMNOMA_CHANNEL_HPP

#include <optional>
#include <vector>

#include "mmnoma/common.hpp"
#include "mmnoma/rng.hpp"

namespace mmnoma {

/// ULA response a(theta): entry n is exp(j 2 pi spacing n sin(theta)) / sqrt(N).
CVec steering_vector(double theta, int n_antennas, double spacing = 0.5);

/// DFT codebook; column k (0-based) is the beam pattern f_{k+1}.
struct Codebook {
    CMat F;  // N x K

    int n_antennas() const { return static_cast<int>(F.rows()); }
    int size() const { return static_cast<int>(F.cols()); }
    CVec beam(int index0) const { return F.col(index0); }
};

Codebook dft_codebook(int n_antennas, int codebook_size);

// Angle whose steering vector coincides with codebook column `index0`
// (0-based), taking the branch in [-pi/2, pi/2].
double beam_direction(int index0, int codebook_size, double spacing);

/// One user's multipath channel. h is kept in sync with (gains, aoas).
struct UserChannel {
    std::vector<cdouble> gains;  // alpha^g
    std::vector<double> aoas;    // theta^g, radians
    CVec h;                      // length N
};

struct ChannelSet {
    std::vector<UserChannel> users;
};

// h = sqrt(N/G) * sum_g alpha^g a(theta^g).
CVec assemble_channel(const std::vector<cdouble>& gains, const std::vector<double>& aoas,
                      int n_antennas, double spacing);

// Draws G paths with alpha ~ CN(0,1) and theta ~ U[-pi, pi]. When
// `dominant_aoa` is given, the first path arrives from that angle instead.
UserChannel draw_user_channel(const SystemConfig& config, Rng& rng,
                              std::optional<double> dominant_aoa = std::nullopt);

/// 2M users with fully random geometry; user u uses stream (seed, u).
ChannelSet generate_channels(const SystemConfig& config, std::uint64_t rng_seed);

/// h_bar = W h, with row m of W equal to f_{k_m}^H.
CVec effective_channel(const CMat& W, const CVec& h);

}  // namespace mmnoma

#endif  // MMNOMA_CHANNEL_HPP
