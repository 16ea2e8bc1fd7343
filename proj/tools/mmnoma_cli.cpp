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

// mmnoma: experiment driver.
//
//   mmnoma run      [--config FILE] [--<setting> VALUE ...] [--format csv|json] [-o PATH]
//   mmnoma oracle   [--seed S] [--grid-points G] [--snr-db X] [--instances K]
//   mmnoma codebook [--n-antennas N] [--codebook-size K] [--points P] [-o PATH]
//
// Output files default to $MMNOMA_OUTPUT_DIR (or the working directory).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>

#include "mmnoma/clustering.hpp"
#include "mmnoma/harness.hpp"
#include "mmnoma/oracle.hpp"

namespace {

using namespace mmnoma;

const std::vector<std::string> kSettings{
    "n-antennas", "n-rf",      "codebook-size",  "n-paths",     "noise-power",  "circuit-power",
    "amp-inefficiency", "r-min", "antenna-spacing", "exact-noise", "standard-min-rate", "snr-db",
    "n-drops",    "scheme",    "seed",           "metrics",     "workers",      "users-per-beam",
    "beam-family", "max-attempts", "epsilon",    "inner-tol",   "max-rounds",   "max-sca",
    "max-cccp",   "max-outer", "solver-tol",     "max-newton"};

std::string in_output_dir(const std::string& name)
{
    return (std::filesystem::path(default_output_dir()) / name).string();
}

int cmd_run(const std::string& config_path, const std::map<std::string, std::string>& overrides,
            bool traces, const std::string& format, std::string output)
{
    ExperimentSpec spec;
    if (!config_path.empty()) spec = load_experiment(config_path, spec);
    for (const auto& [key, value] : overrides)
        if (!value.empty()) apply_setting(spec, key, value);
    if (traces) spec.traces = true;

    const OutputFormat fmt = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (output.empty()) output = in_output_dir(fmt == OutputFormat::Json ? "results.json" : "results.csv");
    const ResultTable table = run(spec);
    emit(table, fmt, output, spec.traces);
    for (const auto& row : table.rows)
        if (row.metric == "missing_drops" && row.mean > 0)
            std::cerr << "warning: " << row.mean << " drop(s) rejected at " << row.snr_db << " dB\n";
    std::cout << "wrote " << table.rows.size() << " rows to " << output << "\n";
    return 0;
}

int cmd_oracle(std::uint64_t seed, int grid_points, double snr_db, int instances, int n_antennas)
{
    ExperimentSpec spec;
    spec.config.n_antennas = n_antennas;
    spec.config.codebook_size = n_antennas;
    spec.config.n_rf = 2;
    spec.seed = seed;
    spec.n_drops = instances;
    spec.users_per_beam = 2;
    const SystemConfig cfg = spec.config.with_snr_db(snr_db);
    const std::vector<double> grid = oracle_grid(cfg.p_max, grid_points);

    std::printf("instance,scheme2_min_ee,oracle_min_ee,cell_bound,within_bound\n");
    int failures = 0;
    for (int k = 0; k < instances; ++k) {
        try {
            const Scenario sc = first_usable_scenario(spec, snr_db, k);
            const LinkModel model = scheme_model(Scheme::Scheme2, sc);
            const Solution sol = scheme2_solve(sc, spec.settings);
            const OracleResult orc = grid_maxmin_ee(sc.V_zf, sc.h_bar, model, sc.plan.W, cfg, grid);
            const double bound = ee_cell_bound(sc.V_zf, sc.h_bar, model, sc.plan.W, cfg, grid, sol.P);
            const bool ok = std::abs(sol.min_ee - orc.value) <= bound + spec.settings.epsilon;
            failures += !ok;
            std::printf("%d,%.9g,%.9g,%.3g,%s\n", k, sol.min_ee, orc.value, bound, ok ? "yes" : "no");
        } catch (const Error& e) {
            std::printf("%d,,,,skipped (%s)\n", k, e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_codebook(int n_antennas, int codebook_size, int points, std::string output)
{
    const Codebook cb = dft_codebook(n_antennas, codebook_size);
    if (output.empty()) output = in_output_dir("codebook.csv");
    std::ofstream out(output);
    if (!out) throw IoError("cannot open '" + output + "' for writing");
    out << "theta_rad";
    for (int k = 1; k <= cb.size(); ++k) out << ",beam" << k;
    out << "\n";
    char buf[64];
    for (int p = 0; p < points; ++p) {
        const double theta = -std::numbers::pi / 2 + std::numbers::pi * p / (points - 1);
        const CVec a = steering_vector(theta, n_antennas);
        std::snprintf(buf, sizeof buf, "%.9g", theta);
        out << buf;
        for (int k = 0; k < cb.size(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.9g", std::norm(cb.beam(k).dot(a)));
            out << buf;
        }
        out << "\n";
    }
    std::cout << "wrote " << points << " angles x " << cb.size() << " beams to " << output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Max-min energy-efficient uplink mmWave MIMO-NOMA toolkit"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Monte-Carlo sweep over SNR and schemes");
    std::string config_path, format = "csv", output;
    bool traces = false;
    std::map<std::string, std::string> overrides;
    run->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    for (const auto& key : kSettings) run->add_option("--" + key, overrides[key]);
    run->add_flag("--traces", traces, "record L and z traces (JSON output)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("-o,--output", output, "output file");

    auto* oracle = app.add_subcommand("oracle", "Scheme 2 against the exhaustive power grid on tiny drops");
    std::uint64_t seed = 1;
    int grid_points = 20, instances = 5, n_antennas = 8;
    double snr_db = 10.0;
    oracle->add_option("--seed", seed);
    oracle->add_option("--grid-points", grid_points);
    oracle->add_option("--snr-db", snr_db);
    oracle->add_option("--instances", instances);
    oracle->add_option("--n-antennas", n_antennas);

    auto* codebook = app.add_subcommand("codebook", "Beam gain patterns |f_k^H a(theta)|^2 as CSV");
    int cb_antennas = 32, cb_size = 32, points = 721;
    std::string cb_output;
    codebook->add_option("--n-antennas", cb_antennas);
    codebook->add_option("--codebook-size", cb_size);
    codebook->add_option("--points", points)->check(CLI::Range(2, 1000000));
    codebook->add_option("-o,--output", cb_output);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config_path, overrides, traces, format, output);
        if (*oracle) return cmd_oracle(seed, grid_points, snr_db, instances, n_antennas);
        if (*codebook) return cmd_codebook(cb_antennas, cb_size, points, cb_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
