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

#ifndef MMNOMA_HARNESS_HPP
#define MMNOMA_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmnoma/maxmin.hpp"

namespace mmnoma {

struct ExperimentSpec {
    SystemConfig config;
    std::vector<double> snr_db{0.0, 10.0, 20.0};  // SNR = p_max / noise_power
    int n_drops = 200;
    std::vector<Scheme> schemes{Scheme::Scheme1, Scheme::Scheme2};
    std::uint64_t seed = 1;
    // Any of: min_ee, sum_se, min_rate, iteration_counts.
    std::vector<std::string> metrics{"min_ee", "sum_se", "min_rate"};
    bool traces = false;
    int workers = 1;
    int users_per_beam = 4;  // candidates spawned around each selected beam
    int beam_family = 1;
    int max_attempts = 50;   // redraws per drop before it is reported missing
    MaxminSettings settings;

    void validate() const;
};

/// Key/value configuration (`key = value`, `#` comments). Keys use the
/// SystemConfig / ExperimentSpec field names; lists are comma separated.
ExperimentSpec parse_experiment(std::istream& in, ExperimentSpec base = {});
ExperimentSpec load_experiment(const std::string& path, ExperimentSpec base = {});
// Applies a single key (accepts dashes in place of underscores).
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// Channels and clustering for one (drop, attempt) at the given SNR. Streams
/// depend on (seed, drop, attempt, user) only, so every SNR sees the same
/// geometry. Throws InfeasibleScenario / DegenerateChannel for unusable draws.
Scenario drop_scenario(const ExperimentSpec& spec, double snr_db, int drop, int attempt);

/// First usable attempt of a drop; throws InfeasibleScenario when all
/// max_attempts draws are unusable.
Scenario first_usable_scenario(const ExperimentSpec& spec, double snr_db, int drop);

struct DropOutcome {
    bool effective = false;
    int rejections = 0;
    // scheme name -> metric -> value
    std::map<std::string, std::map<std::string, double>> values;
    std::map<std::string, std::vector<double>> outer_traces;
    std::map<std::string, std::vector<double>> inner_traces;
};

/// One drop at one SNR: draw users, cluster, solve every scheme. Rejected
/// attempts (empty beams, singular ZF, unreachable min rate) are redrawn.
DropOutcome run_drop(const ExperimentSpec& spec, double snr_db, int drop);

struct ResultRow {
    double snr_db = 0.0;
    std::string scheme;
    std::string metric;
    double mean = 0.0;
    double stderr_mean = 0.0;
    int n_effective_drops = 0;

    bool operator==(const ResultRow&) const = default;
};

struct TraceRecord {
    double snr_db = 0.0;
    int drop = 0;
    std::string scheme;
    std::vector<double> outer;
    std::vector<double> inner;

    bool operator==(const TraceRecord&) const = default;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<TraceRecord> traces;

    bool operator==(const ResultTable&) const = default;
    // nullptr when absent.
    const ResultRow* find(double snr_db, const std::string& scheme,
                          const std::string& metric) const;
};

ResultTable run(const ExperimentSpec& spec);

// Rounds to 12 significant digits, the precision used on disk.
double round_sig12(double value);

void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out, bool include_traces);
ResultTable read_json(std::istream& in);

enum class OutputFormat { Csv, Json };

/// Writes to `path`; throws IoError naming the path on failure.
void emit(const ResultTable& table, OutputFormat format, const std::string& path,
          bool include_traces = false);

/// Directory from MMNOMA_OUTPUT_DIR, or "." when unset.
std::string default_output_dir();

}  // namespace mmnoma

#endif  // MMNOMA_HARNESS_HPP
