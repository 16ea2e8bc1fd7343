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

#include "mmnoma/common.hpp"

#include <cmath>
#include <sstream>

namespace mmnoma {

double SystemConfig::snr_db() const { return 10.0 * std::log10(p_max / noise_power); }

SystemConfig SystemConfig::with_snr_db(double snr) const
{
    SystemConfig out = *this;
    out.p_max = noise_power * std::pow(10.0, snr / 10.0);
    return out;
}

void SystemConfig::validate() const
{
    std::ostringstream why;
    if (n_antennas < 1) why << "n_antennas must be positive; ";
    if (n_rf < 1) why << "n_rf must be positive; ";
    if (n_rf > n_antennas) why << "n_rf must not exceed n_antennas; ";
    if (codebook_size < n_antennas) why << "codebook_size must be >= n_antennas; ";
    if (n_rf >= 1 && codebook_size % n_rf != 0) why << "n_rf must divide codebook_size; ";
    if (n_paths < 1) why << "n_paths must be positive; ";
    if (!(noise_power > 0.0)) why << "noise_power must be positive; ";
    if (!(circuit_power > 0.0)) why << "circuit_power must be positive; ";
    if (!(amp_inefficiency > 1.0)) why << "amp_inefficiency must exceed 1; ";
    if (!(r_min >= 0.0)) why << "r_min must be non-negative; ";
    if (!(p_max > 0.0)) why << "p_max must be positive; ";
    if (!(antenna_spacing > 0.0)) why << "antenna_spacing must be positive; ";
    const std::string msg = why.str();
    if (!msg.empty()) throw InvalidInput("invalid SystemConfig: " + msg);
}

double min_sinr(const SystemConfig& config, double prefactor)
{
    const double level = std::exp2(config.r_min / prefactor);
    return config.standard_min_rate ? level - 1.0 : level;
}

}  // namespace mmnoma
