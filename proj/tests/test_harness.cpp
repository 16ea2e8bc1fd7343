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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mmnoma/harness.hpp"
#include "fixtures.hpp"

using namespace mmnoma;

namespace {

ExperimentSpec small_run()
{
    ExperimentSpec spec = mmnoma::fixtures::desk_spec(8, 2, 17);
    spec.snr_db = {0.0, 10.0};
    spec.n_drops = 2;
    spec.schemes = {Scheme::Scheme2, Scheme::Oma};
    spec.metrics = {"min_ee", "sum_se"};
    return spec;
}

std::string csv_of(const ResultTable& t)
{
    std::ostringstream out;
    write_csv(t, out);
    return out.str();
}

}  // namespace

TEST(Config, ParsesKeyValueFile)
{
    std::istringstream in(R"(# sweep
n_antennas = 16
codebook-size = 16
n_rf = 2
snr_db = -10, 0, 10.5
schemes = scheme1, oma
n_drops = 3
r_min = 0.1
traces = true
epsilon = 1e-4
)");
    const ExperimentSpec spec = parse_experiment(in);
    EXPECT_EQ(spec.config.n_antennas, 16);
    EXPECT_EQ(spec.config.codebook_size, 16);
    EXPECT_EQ(spec.snr_db, (std::vector<double>{-10.0, 0.0, 10.5}));
    EXPECT_EQ(spec.schemes, (std::vector<Scheme>{Scheme::Scheme1, Scheme::Oma}));
    EXPECT_EQ(spec.n_drops, 3);
    EXPECT_DOUBLE_EQ(spec.config.r_min, 0.1);
    EXPECT_TRUE(spec.traces);
    EXPECT_DOUBLE_EQ(spec.settings.epsilon, 1e-4);
    EXPECT_NO_THROW(spec.validate());
}

TEST(Config, RejectsBadInput)
{
    ExperimentSpec spec;
    EXPECT_THROW(apply_setting(spec, "no_such_key", "1"), InvalidInput);
    EXPECT_THROW(apply_setting(spec, "n_drops", "many"), InvalidInput);
    EXPECT_THROW(apply_setting(spec, "scheme", "scheme7"), InvalidInput);
    std::istringstream in("n_drops 3\n");
    EXPECT_THROW(parse_experiment(in), InvalidInput);
    spec.n_drops = 0;
    EXPECT_THROW(spec.validate(), InvalidInput);
    EXPECT_THROW(load_experiment("/nonexistent/dir/cfg.txt"), IoError);
}

TEST(Run, DeterministicAcrossRunsAndWorkers)
{
    ExperimentSpec spec = small_run();
    const std::string a = csv_of(run(spec));
    const std::string b = csv_of(run(spec));
    EXPECT_EQ(a, b);
    spec.workers = 3;
    EXPECT_EQ(csv_of(run(spec)), a);
}

TEST(Run, TableShape)
{
    const ExperimentSpec spec = small_run();
    const ResultTable t = run(spec);
    // 2 SNRs x (2 schemes x 2 metrics + 2 bookkeeping rows).
    EXPECT_EQ(t.rows.size(), 2u * (2 * 2 + 2));
    const ResultRow* row = t.find(10.0, "scheme2", "min_ee");
    ASSERT_NE(row, nullptr);
    EXPECT_EQ(row->n_effective_drops, 2);
    EXPECT_GT(row->mean, 0.0);
    EXPECT_NE(t.find(0.0, "all", "rejected_drops"), nullptr);
    EXPECT_EQ(t.find(0.0, "scheme1", "min_ee"), nullptr);
}

TEST(Run, SameGeometryAtEverySnr)
{
    const ExperimentSpec spec = small_run();
    const Scenario a = first_usable_scenario(spec, 0.0, 1);
    const Scenario b = first_usable_scenario(spec, 20.0, 1);
    for (std::size_t u = 0; u < a.h_bar.size(); ++u) EXPECT_TRUE((a.h_bar[u].array() == b.h_bar[u].array()).all());
    EXPECT_NE(a.config.p_max, b.config.p_max);
}

TEST(Run, ImpossibleMinRateReportsMissingCell)
{
    ExperimentSpec spec = small_run();
    spec.config.r_min = 40.0;
    spec.max_attempts = 2;
    spec.snr_db = {0.0};
    spec.n_drops = 1;
    const ResultTable t = run(spec);
    EXPECT_EQ(t.find(0.0, "scheme2", "min_ee")->n_effective_drops, 0);
    EXPECT_EQ(t.find(0.0, "all", "missing_drops")->mean, 1.0);
    EXPECT_EQ(t.find(0.0, "all", "rejected_drops")->mean, 2.0);
}

TEST(Run, IterationCountsAndTraces)
{
    ExperimentSpec spec = small_run();
    spec.snr_db = {10.0};
    spec.n_drops = 1;
    spec.schemes = {Scheme::Scheme1};
    spec.metrics = {"iteration_counts"};
    spec.traces = true;
    const ResultTable t = run(spec);
    ASSERT_NE(t.find(10.0, "scheme1", "iterations_outer"), nullptr);
    EXPECT_GT(t.find(10.0, "scheme1", "iterations_newton")->mean, 0.0);
    ASSERT_EQ(t.traces.size(), 1u);
    EXPECT_FALSE(t.traces[0].outer.empty());
    EXPECT_TRUE(mmnoma::fixtures::non_decreasing(t.traces[0].inner, 1e-8));
}

TEST(Emit, EmptyTableIsHeaderOnly)
{
    EXPECT_EQ(csv_of(ResultTable{}), "snr_db,scheme,metric,mean,stderr,n_effective_drops\n");
}

TEST(Emit, OneRow)
{
    ResultTable t;
    t.rows.push_back({10.0, "scheme1", "min_ee", 12.5, 0.25, 7});
    EXPECT_EQ(csv_of(t), "snr_db,scheme,metric,mean,stderr,n_effective_drops\n10,scheme1,min_ee,12.5,0.25,7\n");
}

TEST(Emit, JsonRoundTrip)
{
    ExperimentSpec spec = small_run();
    spec.traces = true;
    const ResultTable t = run(spec);
    std::stringstream buf;
    write_json(t, buf, true);
    EXPECT_EQ(read_json(buf), t);
}

TEST(Emit, RoundingToTwelveDigits)
{
    EXPECT_EQ(round_sig12(1.0 / 3.0), 0.333333333333);
    EXPECT_EQ(round_sig12(0.0), 0.0);
    ResultTable t;
    t.rows.push_back({0.0, "s", "m", round_sig12(2.0 / 3.0), round_sig12(1e-7 / 3.0), 1});
    std::stringstream buf;
    write_json(t, buf, false);
    EXPECT_EQ(read_json(buf), t);
}

TEST(Emit, UnwritablePathNamesThePath)
{
    try {
        emit(ResultTable{}, OutputFormat::Csv, "/nonexistent/dir/out.csv");
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.csv"), std::string::npos);
    }
}

TEST(Emit, WritesFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "mmnoma_emit_test";
    std::filesystem::create_directories(dir);
    ResultTable t;
    t.rows.push_back({10.0, "scheme1", "min_ee", 12.5, 0.25, 7});
    emit(t, OutputFormat::Json, (dir / "r.json").string());
    std::ifstream in(dir / "r.json");
    EXPECT_EQ(read_json(in), t);
    std::filesystem::remove_all(dir);
}

TEST(Emit, OutputDirectoryFromEnvironment)
{
    ::setenv("MMNOMA_OUTPUT_DIR", "/tmp/mmnoma-out", 1);
    EXPECT_EQ(default_output_dir(), "/tmp/mmnoma-out");
    ::unsetenv("MMNOMA_OUTPUT_DIR");
    EXPECT_EQ(default_output_dir(), ".");
}
