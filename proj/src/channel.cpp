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

#include "mmnoma/channel.hpp"

#include <cmath>
#include <numbers>

namespace mmnoma {

CVec steering_vector(double theta, int n_antennas, double spacing)
{
    CVec a(n_antennas);
    const double phase = 2.0 * std::numbers::pi * spacing * std::sin(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    for (int n = 0; n < n_antennas; ++n) a(n) = std::polar(scale, phase * n);
    return a;
}

Codebook dft_codebook(int n_antennas, int codebook_size)
{
    if (n_antennas < 1 || codebook_size < 1)
        throw InvalidInput("dft_codebook: sizes must be positive");
    Codebook cb;
    cb.F.resize(n_antennas, codebook_size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    for (int k = 0; k < codebook_size; ++k) {
        for (int n = 0; n < n_antennas; ++n) {
            // Reduce k*n mod K first so the phase stays exact for large indices.
            const long long r = (static_cast<long long>(k) * n) % codebook_size;
            cb.F(n, k) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(r) /
                                               static_cast<double>(codebook_size));
        }
    }
    return cb;
}

double beam_direction(int index0, int codebook_size, double spacing)
{
    double frac = static_cast<double>(index0) / codebook_size;
    frac -= std::floor(frac + 0.5);  // wrap to [-0.5, 0.5)
    const double s = std::clamp(frac / spacing, -1.0, 1.0);
    return std::asin(s);
}

CVec assemble_channel(const std::vector<cdouble>& gains, const std::vector<double>& aoas,
                      int n_antennas, double spacing)
{
    if (gains.size() != aoas.size() || gains.empty())
        throw InvalidInput("assemble_channel: gains and aoas must be non-empty and equal length");
    CVec h = CVec::Zero(n_antennas);
    for (std::size_t g = 0; g < gains.size(); ++g)
        h += gains[g] * steering_vector(aoas[g], n_antennas, spacing);
    h *= std::sqrt(static_cast<double>(n_antennas) / static_cast<double>(gains.size()));
    return h;
}

UserChannel draw_user_channel(const SystemConfig& config, Rng& rng,
                              std::optional<double> dominant_aoa)
{
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    UserChannel user;
    user.gains.reserve(config.n_paths);
    user.aoas.reserve(config.n_paths);
    for (int g = 0; g < config.n_paths; ++g) {
        user.gains.push_back(complex_gaussian(rng));
        const double theta = angle(rng);
        user.aoas.push_back(g == 0 && dominant_aoa ? *dominant_aoa : theta);
    }
    user.h = assemble_channel(user.gains, user.aoas, config.n_antennas, config.antenna_spacing);
    return user;
}

ChannelSet generate_channels(const SystemConfig& config, std::uint64_t rng_seed)
{
    config.validate();
    ChannelSet set;
    for (int u = 0; u < config.n_users(); ++u) {
        Rng rng = make_stream(rng_seed, {static_cast<std::uint64_t>(u)});
        set.users.push_back(draw_user_channel(config, rng));
    }
    return set;
}

CVec effective_channel(const CMat& W, const CVec& h)
{
    if (W.cols() != h.size())
        throw InvalidInput("effective_channel: W has " + std::to_string(W.cols()) +
                           " columns but h has length " + std::to_string(h.size()));
    return W * h;
}

}  // namespace mmnoma
