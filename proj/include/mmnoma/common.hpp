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

#ifndef MMNOMA_COMMON_HPP
#define MMNOMA_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace mmnoma {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Error hierarchy. Everything derives from mmnoma::Error so callers that only
// care about "this drop failed" can catch a single type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// A selected beam has fewer than two candidate users.
class InfeasibleScenario : public Error {
public:
    using Error::Error;
};

// Strong-user effective channel matrix is (numerically) singular.
class DegenerateChannel : public Error {
public:
    using Error::Error;
};

// Minimum-rate constraints cannot be met, or a subproblem had no interior.
class Infeasible : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Scenario constants shared by every module.
struct SystemConfig {
    int n_antennas = 32;     // N
    int n_rf = 4;            // M, one beam per RF chain, two users per beam
    int codebook_size = 32;  // K
    int n_paths = 3;         // G
    double noise_power = 1e-3;            // watts
    double circuit_power = 0.1;           // Pc, watts
    double amp_inefficiency = 1.0 / 0.38; // xi
    double r_min = 0.2;                   // bits/s/Hz
    double p_max = 1e-2;                  // watts per user
    double antenna_spacing = 0.5;         // d / lambda

    // Post-combining noise ||v_m W||^2 * noise_power instead of noise_power.
    bool exact_noise = false;
    // Min-rate as SINR >= 2^R - 1 instead of SINR >= 2^R.
    bool standard_min_rate = false;

    int n_users() const { return 2 * n_rf; }

    double snr_db() const;
    SystemConfig with_snr_db(double snr_db) const;

    // Throws InvalidInput on violation.
    void validate() const;
};

// SINR a user must reach to satisfy its minimum rate. `prefactor` is the
// fraction of the slot the user transmits in (1 for NOMA, 0.5 for OMA).
double min_sinr(const SystemConfig& config, double prefactor = 1.0);

}  // namespace mmnoma

#endif  // MMNOMA_COMMON_HPP
