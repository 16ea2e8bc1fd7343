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

#include "mmnoma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mmnoma/clustering.hpp"

namespace mmnoma {

void ExperimentSpec::validate() const
{
    config.validate();
    if (snr_db.empty()) throw InvalidInput("experiment: snr_db list is empty");
    if (n_drops < 1) throw InvalidInput("experiment: n_drops must be >= 1");
    if (schemes.empty()) throw InvalidInput("experiment: no schemes selected");
    if (workers < 1) throw InvalidInput("experiment: workers must be >= 1");
    if (users_per_beam < 2) throw InvalidInput("experiment: users_per_beam must be >= 2");
    if (max_attempts < 1) throw InvalidInput("experiment: max_attempts must be >= 1");
    if (beam_family < 1 || beam_family > config.codebook_size / config.n_rf)
        throw InvalidInput("experiment: beam_family out of range");
    static const std::vector<std::string> known{"min_ee", "sum_se", "min_rate", "iteration_counts"};
    for (const auto& m : metrics)
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw InvalidInput("experiment: unknown metric '" + m + "'");
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw InvalidInput("setting '" + key + "': not a number: " + value);
    return v;
}

long long to_int(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || *end != '\0') throw InvalidInput("setting '" + key + "': not an integer: " + value);
    return v;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw InvalidInput("setting '" + key + "': not a boolean: " + value);
}

}  // namespace

void apply_setting(ExperimentSpec& spec, const std::string& raw_key, const std::string& raw_value)
{
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(raw_value);
    SystemConfig& c = spec.config;
    MaxminSettings& s = spec.settings;

    const std::map<std::string, std::function<void()>> table{
        {"n_antennas", [&] { c.n_antennas = int(to_int(key, value)); }},
        {"n_rf", [&] { c.n_rf = int(to_int(key, value)); }},
        {"codebook_size", [&] { c.codebook_size = int(to_int(key, value)); }},
        {"n_paths", [&] { c.n_paths = int(to_int(key, value)); }},
        {"noise_power", [&] { c.noise_power = to_double(key, value); }},
        {"circuit_power", [&] { c.circuit_power = to_double(key, value); }},
        {"amp_inefficiency", [&] { c.amp_inefficiency = to_double(key, value); }},
        {"r_min", [&] { c.r_min = to_double(key, value); }},
        {"p_max", [&] { c.p_max = to_double(key, value); }},
        {"antenna_spacing", [&] { c.antenna_spacing = to_double(key, value); }},
        {"exact_noise", [&] { c.exact_noise = to_bool(key, value); }},
        {"standard_min_rate", [&] { c.standard_min_rate = to_bool(key, value); }},
        {"snr_db",
         [&] {
             spec.snr_db.clear();
             for (const auto& v : split_list(value)) spec.snr_db.push_back(to_double(key, v));
         }},
        {"n_drops", [&] { spec.n_drops = int(to_int(key, value)); }},
        {"schemes",
         [&] {
             spec.schemes.clear();
             for (const auto& v : split_list(value)) spec.schemes.push_back(parse_scheme(v));
         }},
        {"seed", [&] { spec.seed = static_cast<std::uint64_t>(to_int(key, value)); }},
        {"metrics", [&] { spec.metrics = split_list(value); }},
        {"traces", [&] { spec.traces = to_bool(key, value); }},
        {"workers", [&] { spec.workers = int(to_int(key, value)); }},
        {"users_per_beam", [&] { spec.users_per_beam = int(to_int(key, value)); }},
        {"beam_family", [&] { spec.beam_family = int(to_int(key, value)); }},
        {"max_attempts", [&] { spec.max_attempts = int(to_int(key, value)); }},
        {"epsilon", [&] { s.epsilon = to_double(key, value); }},
        {"inner_tol", [&] { s.inner_tol = to_double(key, value); }},
        {"max_rounds", [&] { s.max_rounds = int(to_int(key, value)); }},
        {"max_sca", [&] { s.max_sca = int(to_int(key, value)); }},
        {"max_cccp", [&] { s.max_cccp = int(to_int(key, value)); }},
        {"max_outer", [&] { s.max_outer = int(to_int(key, value)); }},
        {"solver_tol", [&] { s.solver.tol = to_double(key, value); }},
        {"max_newton", [&] { s.solver.max_newton = int(to_int(key, value)); }},
    };
    std::string lookup = key;
    if (lookup == "scheme") lookup = "schemes";
    const auto it = table.find(lookup);
    if (it == table.end()) throw InvalidInput("unknown setting '" + raw_key + "'");
    it->second();
}

ExperimentSpec parse_experiment(std::istream& in, ExperimentSpec base)
{
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

ExperimentSpec load_experiment(const std::string& path, ExperimentSpec base)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_experiment(in, std::move(base));
}

// ---------------------------------------------------------------------------
// Drops

namespace {

bool wants(const ExperimentSpec& spec, const std::string& metric)
{
    return std::find(spec.metrics.begin(), spec.metrics.end(), metric) != spec.metrics.end();
}

// Candidates spawned around every selected beam: first path along the beam
// with a small jitter inside its main lobe, remaining paths random.
ChannelSet draw_drop(const ExperimentSpec& spec, const std::vector<int>& beams, int drop, int attempt)
{
    const SystemConfig& c = spec.config;
    ChannelSet set;
    int user = 0;
    for (int b : beams) {
        const double centre = std::sin(beam_direction(b - 1, c.codebook_size, c.antenna_spacing));
        const double lobe = 1.0 / (c.codebook_size * c.antenna_spacing);
        for (int k = 0; k < spec.users_per_beam; ++k, ++user) {
            Rng rng = make_stream(spec.seed, {std::uint64_t(drop), std::uint64_t(attempt), std::uint64_t(user)});
            std::uniform_real_distribution<double> jitter(-0.4 * lobe, 0.4 * lobe);
            const double s = std::clamp(centre + jitter(rng), -1.0, 1.0);
            set.users.push_back(draw_user_channel(c, rng, std::asin(s)));
        }
    }
    return set;
}

}  // namespace

Scenario drop_scenario(const ExperimentSpec& spec, double snr_db, int drop, int attempt)
{
    const SystemConfig cfg = spec.config.with_snr_db(snr_db);
    const Codebook codebook = dft_codebook(cfg.n_antennas, cfg.codebook_size);
    const std::vector<int> beams = select_beams(cfg.codebook_size, cfg.n_rf, spec.beam_family);
    return make_scenario(cfg, cluster_users(codebook, beams, draw_drop(spec, beams, drop, attempt)));
}

Scenario first_usable_scenario(const ExperimentSpec& spec, double snr_db, int drop)
{
    for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
        try {
            return drop_scenario(spec, snr_db, drop, attempt);
        } catch (const InfeasibleScenario&) {
        } catch (const DegenerateChannel&) {
        }
    }
    throw InfeasibleScenario("drop " + std::to_string(drop) + ": no usable draw in " +
                             std::to_string(spec.max_attempts) + " attempts");
}

DropOutcome run_drop(const ExperimentSpec& spec, double snr_db, int drop)
{
    const bool need_ee = wants(spec, "min_ee") || wants(spec, "iteration_counts") || spec.traces;
    const bool need_se = wants(spec, "sum_se") || wants(spec, "min_rate");

    DropOutcome out;
    for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
        DropOutcome trial;
        try {
            const Scenario sc = drop_scenario(spec, snr_db, drop, attempt);
            for (Scheme scheme : spec.schemes) {
                const std::string name = to_string(scheme);
                auto& values = trial.values[name];
                if (need_ee) {
                    const Solution sol = bisection(sc, scheme, spec.settings);
                    values["min_ee"] = sol.min_ee;
                    values["iterations_outer"] = sol.counters.outer;
                    values["iterations_alternation"] = sol.counters.alternation;
                    values["iterations_sca"] = sol.counters.sca;
                    values["iterations_cccp"] = sol.counters.cccp;
                    values["iterations_newton"] = sol.counters.newton;
                    trial.outer_traces[name] = sol.outer_trace;
                    trial.inner_traces[name] = sol.inner_trace;
                }
                if (need_se) {
                    const LEvaluation ev = evaluate_L(0.0, sc, scheme, spec.settings);
                    values["sum_se"] = ev.solution.sum_rate;
                    values["min_rate"] = ev.solution.min_rate;
                }
            }
        } catch (const InfeasibleScenario&) {
            ++out.rejections;
            continue;
        } catch (const DegenerateChannel&) {
            ++out.rejections;
            continue;
        } catch (const Infeasible&) {
            ++out.rejections;
            continue;
        }
        trial.effective = true;
        trial.rejections = out.rejections;
        return trial;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation

double round_sig12(double value)
{
    if (!std::isfinite(value) || value == 0.0) return value;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return std::strtod(buf, nullptr);
}

const ResultRow* ResultTable::find(double snr_db, const std::string& scheme, const std::string& metric) const
{
    for (const auto& r : rows)
        if (r.snr_db == snr_db && r.scheme == scheme && r.metric == metric) return &r;
    return nullptr;
}

namespace {

std::vector<std::string> metric_columns(const ExperimentSpec& spec)
{
    std::vector<std::string> out;
    for (const auto& m : spec.metrics) {
        if (m == "iteration_counts") {
            for (const char* k : {"iterations_outer", "iterations_alternation", "iterations_sca",
                                  "iterations_cccp", "iterations_newton"})
                out.push_back(k);
        } else {
            out.push_back(m);
        }
    }
    return out;
}

std::vector<double> round_all(const std::vector<double>& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (double x : v) out.push_back(round_sig12(x));
    return out;
}

}  // namespace

ResultTable run(const ExperimentSpec& spec)
{
    spec.validate();
    const int n_snr = static_cast<int>(spec.snr_db.size());
    const int n_tasks = n_snr * spec.n_drops;
    std::vector<DropOutcome> outcomes(n_tasks);
    std::vector<std::string> errors(n_tasks);

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < n_tasks; t = next++) {
            try {
                outcomes[t] = run_drop(spec, spec.snr_db[t / spec.n_drops], t % spec.n_drops);
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    const int n_workers = std::min(spec.workers, n_tasks);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);

    ResultTable table;
    const std::vector<std::string> columns = metric_columns(spec);
    for (int s = 0; s < n_snr; ++s) {
        const double snr = round_sig12(spec.snr_db[s]);
        int effective = 0, rejected = 0;
        for (int d = 0; d < spec.n_drops; ++d) {
            const DropOutcome& o = outcomes[s * spec.n_drops + d];
            rejected += o.rejections;
            if (o.effective) ++effective;
        }
        for (Scheme scheme : spec.schemes) {
            const std::string name = to_string(scheme);
            for (const auto& metric : columns) {
                std::vector<double> xs;
                for (int d = 0; d < spec.n_drops; ++d) {
                    const DropOutcome& o = outcomes[s * spec.n_drops + d];
                    if (o.effective) xs.push_back(o.values.at(name).at(metric));
                }
                ResultRow row{snr, name, metric, 0.0, 0.0, static_cast<int>(xs.size())};
                if (!xs.empty()) {
                    double mean = 0.0;
                    for (double x : xs) mean += x;
                    mean /= double(xs.size());
                    double var = 0.0;
                    for (double x : xs) var += (x - mean) * (x - mean);
                    row.mean = round_sig12(mean);
                    if (xs.size() > 1) row.stderr_mean = round_sig12(std::sqrt(var / double(xs.size() - 1) / double(xs.size())));
                }
                table.rows.push_back(row);
            }
        }
        table.rows.push_back({snr, "all", "rejected_drops", double(rejected), 0.0, effective});
        table.rows.push_back({snr, "all", "missing_drops", double(spec.n_drops - effective), 0.0, effective});
        if (spec.traces)
            for (int d = 0; d < spec.n_drops; ++d) {
                const DropOutcome& o = outcomes[s * spec.n_drops + d];
                if (!o.effective) continue;
                for (Scheme scheme : spec.schemes) {
                    const std::string name = to_string(scheme);
                    if (!o.outer_traces.count(name)) continue;
                    table.traces.push_back(
                        {snr, d, name, round_all(o.outer_traces.at(name)), round_all(o.inner_traces.at(name))});
                }
            }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(const ResultTable& table, std::ostream& out)
{
    out << "snr_db,scheme,metric,mean,stderr,n_effective_drops\n";
    for (const auto& r : table.rows)
        out << fmt12(r.snr_db) << ',' << r.scheme << ',' << r.metric << ',' << fmt12(r.mean) << ','
            << fmt12(r.stderr_mean) << ',' << r.n_effective_drops << '\n';
}

void write_json(const ResultTable& table, std::ostream& out, bool include_traces)
{
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : table.rows)
        doc["rows"].push_back({{"snr_db", r.snr_db},
                               {"scheme", r.scheme},
                               {"metric", r.metric},
                               {"mean", r.mean},
                               {"stderr", r.stderr_mean},
                               {"n_effective_drops", r.n_effective_drops}});
    if (include_traces) {
        doc["traces"] = nlohmann::ordered_json::array();
        for (const auto& t : table.traces)
            doc["traces"].push_back({{"snr_db", t.snr_db},
                                     {"drop", t.drop},
                                     {"scheme", t.scheme},
                                     {"outer", t.outer},
                                     {"inner", t.inner}});
    }
    out << doc.dump(2) << '\n';
}

ResultTable read_json(std::istream& in)
{
    ResultTable table;
    try {
        const nlohmann::json doc = nlohmann::json::parse(in);
        for (const auto& r : doc.at("rows"))
            table.rows.push_back({r.at("snr_db").get<double>(), r.at("scheme").get<std::string>(),
                                  r.at("metric").get<std::string>(), r.at("mean").get<double>(),
                                  r.at("stderr").get<double>(), r.at("n_effective_drops").get<int>()});
        if (doc.contains("traces"))
            for (const auto& t : doc.at("traces"))
                table.traces.push_back({t.at("snr_db").get<double>(), t.at("drop").get<int>(),
                                        t.at("scheme").get<std::string>(),
                                        t.at("outer").get<std::vector<double>>(),
                                        t.at("inner").get<std::vector<double>>()});
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed result JSON: ") + e.what());
    }
    return table;
}

void emit(const ResultTable& table, OutputFormat format, const std::string& path, bool include_traces)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (format == OutputFormat::Csv)
        write_csv(table, out);
    else
        write_json(table, out, include_traces);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string default_output_dir()
{
    const char* dir = std::getenv("MMNOMA_OUTPUT_DIR");
    return dir && *dir ? dir : ".";
}

}  // namespace mmnoma
