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

#include "mmnoma/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "mmnoma/baselines.hpp"

namespace mmnoma {

const char* to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::Scheme1: return "scheme1";
    case Scheme::Scheme2: return "scheme2";
    case Scheme::Scheme3: return "scheme3";
    case Scheme::Scheme4: return "scheme4";
    case Scheme::Oma: return "oma";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name)
{
    for (Scheme s : {Scheme::Scheme1, Scheme::Scheme2, Scheme::Scheme3, Scheme::Scheme4, Scheme::Oma})
        if (name == to_string(s)) return s;
    throw InvalidInput("unknown scheme '" + name + "'");
}

Scenario make_scenario(const SystemConfig& config, BeamPlan plan)
{
    Scenario s;
    s.config = config;
    s.h_bar = plan.effective_channels();
    s.order = decoding_order(s.h_bar);
    std::vector<CVec> strong;
    for (int m = 0; m < plan.n_beams(); ++m) strong.push_back(s.h_bar[slot_of(m, 0)]);
    s.V_zf = zf_detection(strong, plan.W);
    s.plan = std::move(plan);
    return s;
}

namespace {

bool settled(double z_new, double z_old, double tol)
{
    return std::abs(z_new - z_old) <= tol * std::max(1.0, std::abs(z_new));
}

double true_objective(double eta, const DetectionMatrix& V, const PowerAllocation& P,
                      const LinkModel& model, const Scenario& sc)
{
    const LinkMetrics m = evaluate_links(model, V, P, sc.h_bar, sc.plan.W, sc.config);
    return fractional_objective(m, P, eta, sc.config);
}

}  // namespace

PowerStep cccp_power_step(double eta, const DetectionMatrix& V, const PowerAllocation& P_hat,
                           const LinkModel& model, const Scenario& scenario,
                           const MaxminSettings& settings)
{
    PowerStep out;
    out.P = P_hat;
    for (int it = 0; it < settings.max_cccp; ++it) {
        const ConvexSubproblem prob =
            build_power_subproblem(eta, V, out.P, scenario.config, model, scenario.h_bar, scenario.plan.W);
        const SolveResult res = solve(prob, settings.solver);
        ++out.counters.cccp;
        out.counters.newton += res.newton_steps;
        if (!res.ok()) {
            if (it == 0) throw Infeasible("power subproblem has no feasible point (minimum rate unreachable)");
            break;
        }
        out.P = decode_power(res.x, scenario.config);
        out.trace.push_back(res.objective);
        if (it > 0 && settled(res.objective, out.trace[it - 1], settings.inner_tol)) break;
    }
    out.z = out.trace.back();
    return out;
}

DetectionStep sca_detection_step(double eta, const PowerAllocation& P_tilde,
                                   const DetectionPoint& initial, const LinkModel& model,
                                   const Scenario& scenario, const MaxminSettings& settings)
{
    DetectionStep out;
    out.point = initial;
    const int M = scenario.plan.n_beams();
    for (int it = 0; it < settings.max_sca; ++it) {
        const ConvexSubproblem prob = build_detection_subproblem(eta, P_tilde, out.point, scenario.config,
                                                                 model, scenario.h_bar, scenario.plan.W);
        const SolveResult res = solve(prob, settings.solver);
        ++out.counters.sca;
        out.counters.newton += res.newton_steps;
        if (!res.ok()) {
            if (it == 0) throw Infeasible("detection subproblem has no feasible point");
            break;
        }
        out.point = decode_detection(res.x, M, scenario.config);
        out.trace.push_back(res.objective);
        if (it > 0 && settled(res.objective, out.trace[it - 1], settings.inner_tol)) break;
    }
    out.z = out.trace.back();
    return out;
}

namespace {

InnerResult run_scheme1(double eta, const Scenario& sc, const MaxminSettings& settings,
                        const std::optional<std::pair<DetectionMatrix, PowerAllocation>>& warm)
{
    const LinkModel model = global_sic_model(sc.order);
    InnerResult out;
    if (warm) {
        out.V = warm->first;
        out.P = warm->second;
    } else {
        out.V = sc.V_zf;
        const PowerStep first = cccp_power_step(
            eta, out.V, PowerAllocation::Constant(model.n_users(), sc.config.p_max), model, sc, settings);
        out.P = first.P;
        out.power_traces.push_back(first.trace);
        out.counters += first.counters;
    }
    out.z = true_objective(eta, out.V, out.P, model, sc);
    out.trace.push_back(out.z);

    for (int round = 0; round < settings.max_rounds; ++round) {
        ++out.counters.alternation;
        DetectionMatrix V_next;
        PowerAllocation P_next;
        try {
            const DetectionPoint init =
                exact_detection_point(out.V, out.P, model, sc.h_bar, sc.plan.W, sc.config);
            const DetectionStep ds = sca_detection_step(eta, out.P, init, model, sc, settings);
            out.detection_traces.push_back(ds.trace);
            out.counters += ds.counters;
            V_next = ds.point.V;
            const PowerStep ps = cccp_power_step(eta, V_next, out.P, model, sc, settings);
            out.power_traces.push_back(ps.trace);
            out.counters += ps.counters;
            P_next = ps.P;
        } catch (const Infeasible&) {
            break;
        }
        const double z_next = true_objective(eta, V_next, P_next, model, sc);
        if (z_next < out.z) break;  // keep the better pair
        const bool done = settled(z_next, out.z, settings.inner_tol);
        out.V = V_next;
        out.P = P_next;
        out.z = z_next;
        out.trace.push_back(z_next);
        if (done) break;
    }
    return out;
}

}  // namespace

InnerResult inner_loop_scheme1(double eta, const Scenario& scenario, const MaxminSettings& settings)
{
    return run_scheme1(eta, scenario, settings, std::nullopt);
}

InnerResult inner_loop_scheme1(double eta, const Scenario& scenario, const MaxminSettings& settings,
                               const DetectionMatrix& V0, const PowerAllocation& P0)
{
    return run_scheme1(eta, scenario, settings, std::make_pair(V0, P0));
}

InnerResult inner_loop_power_only(double eta, const DetectionMatrix& V, const LinkModel& model,
                                  const Scenario& scenario, const MaxminSettings& settings)
{
    InnerResult out;
    out.V = V;
    const PowerStep ps = cccp_power_step(
        eta, V, PowerAllocation::Constant(model.n_users(), scenario.config.p_max), model, scenario, settings);
    out.P = ps.P;
    out.power_traces.push_back(ps.trace);
    out.counters += ps.counters;
    out.z = true_objective(eta, V, out.P, model, scenario);
    out.trace.push_back(out.z);
    return out;
}

LinkModel scheme_model(Scheme scheme, const Scenario& scenario)
{
    switch (scheme) {
    case Scheme::Scheme1: return global_sic_model(scenario.order);
    case Scheme::Scheme2: return zf_weak_model(scenario.order);
    case Scheme::Scheme3: return scheme3_model(scenario.plan);
    case Scheme::Scheme4: return scheme4_model(scenario.plan);
    case Scheme::Oma: return oma_model(scenario.plan);
    }
    throw InvalidInput("scheme_model: unknown scheme");
}

LEvaluation evaluate_L(double eta, const Scenario& scenario, Scheme scheme, const MaxminSettings& settings)
{
    const LinkModel model = scheme_model(scheme, scenario);
    LEvaluation out;
    out.inner = scheme == Scheme::Scheme1 ? inner_loop_scheme1(eta, scenario, settings)
                                          : inner_loop_power_only(eta, scenario.V_zf, model, scenario, settings);
    out.solution = make_solution(model, out.inner.V, out.inner.P, scenario.h_bar, scenario.plan.W,
                                 scenario.config, eta);
    out.solution.counters = out.inner.counters;
    out.solution.inner_trace = out.inner.trace;
    out.L = out.solution.objective;
    return out;
}

double eta_upper_bound(const Scenario& scenario, const LinkModel& model)
{
    const SystemConfig& cfg = scenario.config;
    const CMat& W = scenario.plan.W;
    // |v h|^2 <= ||v W||^2 h^H (W W^H)^{-1} h and ||v W|| <= 1.
    const Eigen::LDLT<CMat> gram((W * W.adjoint()).eval());
    double bound = std::numeric_limits<double>::infinity();
    for (int u = 0; u < model.n_users(); ++u) {
        const CVec& h = scenario.h_bar[u];
        const double gain = std::abs(h.dot(gram.solve(h)));
        const double a = gain / cfg.noise_power;
        const double pref = model.prefactor[u];
        auto ee_at = [&](double p) { return pref * std::log2(1.0 + a * p) / total_power(p, cfg); };
        // single-user EE is quasi-concave in p: golden-section search
        double lo = 0.0, hi = cfg.p_max;
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 200; ++it) {
            const double x1 = hi - phi * (hi - lo);
            const double x2 = lo + phi * (hi - lo);
            if (ee_at(x1) < ee_at(x2))
                lo = x1;
            else
                hi = x2;
        }
        const double best = std::max({ee_at(lo), ee_at(hi), ee_at(cfg.p_max)});
        bound = std::min(bound, best);
    }
    return bound * (1.0 + 1e-9) + 1e-12;
}

BisectionTrace bisect(const std::function<double(double)>& L, double low, double high, double epsilon,
                      int max_iterations)
{
    BisectionTrace tr;
    tr.low = low;
    tr.high = high;
    for (int it = 0; it < max_iterations; ++it) {
        const double mid = 0.5 * (tr.low + tr.high);
        const double value = L(mid);
        tr.eta = mid;
        tr.etas.push_back(mid);
        tr.values.push_back(value);
        ++tr.iterations;
        if (std::abs(value) < epsilon) break;
        if (value > 0.0)
            tr.low = mid;
        else
            tr.high = mid;
        if (tr.high - tr.low < epsilon) break;
    }
    return tr;
}

Solution bisection(const Scenario& scenario, Scheme scheme, const MaxminSettings& settings)
{
    const LinkModel model = scheme_model(scheme, scenario);
    // Report the best allocation seen, not merely the last one evaluated.
    std::optional<Solution> best;
    IterationCounters total;
    auto L = [&](double eta) {
        LEvaluation ev = evaluate_L(eta, scenario, scheme, settings);
        total += ev.solution.counters;
        if (!best || ev.solution.min_ee > best->min_ee) best = ev.solution;
        return ev.L;
    };
    const BisectionTrace tr = bisect(L, 0.0, eta_upper_bound(scenario, model), settings.epsilon,
                                     settings.max_outer);
    Solution sol = *best;
    sol.eta = tr.eta;
    sol.counters = total;
    sol.counters.outer = tr.iterations;
    sol.outer_trace = tr.values;
    return sol;
}

Solution scheme1_solve(const Scenario& scenario, const MaxminSettings& settings)
{
    return bisection(scenario, Scheme::Scheme1, settings);
}

Solution scheme2_solve(const Scenario& scenario, const MaxminSettings& settings)
{
    return bisection(scenario, Scheme::Scheme2, settings);
}

}  // namespace mmnoma
