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

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "mmnoma/cvx_solver.hpp"

namespace mmnoma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bounds {
    RVec lower;
    RVec upper;

    RVec project(const RVec& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

bool is_bound(const Constraint& c, int& index)
{
    if (c.has_quad() || c.has_log()) return false;
    int nz = 0;
    for (int i = 0; i < c.lin.size(); ++i)
        if (c.lin(i) != 0.0) {
            index = i;
            ++nz;
        }
    return nz == 1;
}

struct Lagrangian {
    const ConvexSubproblem& problem;
    const std::vector<int>& general;
    const RVec& lambda;
    double rho;
    const RVec& scale;

    double value(const RVec& y) const
    {
        const RVec x = scale.cwiseProduct(y);
        double v = -problem.objective.dot(x);
        for (std::size_t k = 0; k < general.size(); ++k) {
            const double g = problem.constraints[general[k]].value(x);
            if (!std::isfinite(g)) return kInf;
            const double s = std::max(0.0, lambda(k) + rho * g);
            v += (s * s - lambda(k) * lambda(k)) / (2.0 * rho);
        }
        return v;
    }

    RVec gradient(const RVec& y) const
    {
        const RVec x = scale.cwiseProduct(y);
        RVec grad = -problem.objective;
        for (std::size_t k = 0; k < general.size(); ++k) {
            const auto& c = problem.constraints[general[k]];
            const double s = std::max(0.0, lambda(k) + rho * c.value(x));
            if (s > 0.0) grad += s * c.gradient(x);
        }
        return grad.cwiseProduct(scale);
    }
};

// Projected limited-memory quasi-Newton on a box (two-metric projection):
// variables held at a bound by the gradient get a plain gradient step, the
// rest an L-BFGS step, and the line search runs along the projected path.
// Falls back to a projected gradient step when the quasi-Newton direction
// does not give descent. Returns true once the projected-gradient step is
// below `tol` or the value stops changing at working precision.
bool minimize_projected(const Lagrangian& lag, const Bounds& box, RVec& x, int max_iter, double tol,
                        int& iterations)
{
    constexpr std::size_t kMemory = 12;
    const int n = static_cast<int>(x.size());
    std::deque<std::pair<RVec, RVec>> pairs;  // (s, y)
    constexpr int kWindow = 100;
    RVec grad = lag.gradient(x);
    double f = lag.value(x);
    double f_window = f;
    for (int it = 0; it < max_iter; ++it) {
        const RVec pg = box.project(x - grad) - x;
        const double pg_norm = pg.lpNorm<Eigen::Infinity>();
        if (pg_norm <= tol) return true;
        // No measurable decrease over a whole window: stationary to roundoff.
        if (it > 0 && it % kWindow == 0) {
            if (f_window - f <= 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f))) return true;
            f_window = f;
        }

        const double eps = std::min(1e-3, pg_norm);
        std::vector<bool> held(n, false);
        for (int i = 0; i < n; ++i)
            held[i] = (x(i) <= box.lower(i) + eps && grad(i) > 0.0) ||
                      (x(i) >= box.upper(i) - eps && grad(i) < 0.0);
        auto mask = [&](RVec v) {
            for (int i = 0; i < n; ++i)
                if (held[i]) v(i) = 0.0;
            return v;
        };

        // two-loop recursion on the free variables
        RVec q = mask(grad);
        std::vector<double> alpha(pairs.size());
        for (std::size_t k = pairs.size(); k-- > 0;) {
            const RVec s = mask(pairs[k].first), y = mask(pairs[k].second);
            const double sy = s.dot(y);
            alpha[k] = sy > 0.0 ? s.dot(q) / sy : 0.0;
            q -= alpha[k] * y;
        }
        if (!pairs.empty()) {
            const RVec s = mask(pairs.back().first), y = mask(pairs.back().second);
            const double yy = y.squaredNorm();
            if (yy > 0.0 && s.dot(y) > 0.0) q *= s.dot(y) / yy;
        } else {
            q /= std::max(1.0, grad.lpNorm<Eigen::Infinity>());
        }
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const RVec s = mask(pairs[k].first), y = mask(pairs[k].second);
            const double sy = s.dot(y);
            if (sy > 0.0) q += s * (alpha[k] - y.dot(q) / sy);
        }
        RVec d = -q;
        for (int i = 0; i < n; ++i)
            if (held[i]) d(i) = -grad(i);

        auto search = [&](const RVec& dir, RVec& cand, double& fc) {
            double a = 1.0;
            for (int bt = 0; bt < 60; ++bt, a *= 0.5) {
                cand = box.project(x + a * dir);
                fc = lag.value(cand);
                if (fc <= f + 1e-4 * grad.dot(cand - x) && fc < kInf) return true;
            }
            return false;
        };
        RVec cand;
        double fc = kInf;
        bool moved = grad.dot(d) < 0.0 && search(d, cand, fc);
        if (!moved) {
            pairs.clear();
            moved = search(pg, cand, fc);
        }
        if (!moved) return false;
        ++iterations;

        const RVec new_grad = lag.gradient(cand);
        RVec s = cand - x, y = new_grad - grad;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
            pairs.emplace_back(std::move(s), std::move(y));
            if (pairs.size() > kMemory) pairs.pop_front();
        }
        x = cand;
        f = fc;
        grad = new_grad;
    }
    return false;
}

}  // namespace

SolveResult solve_first_order(const ConvexSubproblem& problem, const FirstOrderOptions& options)
{
    const int n = problem.n_vars();
    Bounds box{RVec::Constant(n, -kInf), RVec::Constant(n, kInf)};
    std::vector<int> general;
    for (int i = 0; i < problem.n_constraints(); ++i) {
        const auto& c = problem.constraints[i];
        int k = -1;
        if (is_bound(c, k)) {
            const double limit = -c.offset / c.lin(k);
            if (c.lin(k) > 0.0)
                box.upper(k) = std::min(box.upper(k), limit);
            else
                box.lower(k) = std::max(box.lower(k), limit);
        } else {
            general.push_back(i);
        }
    }

    SolveResult result;
    RVec x = problem.start.size() == n ? problem.start : RVec::Zero(n);
    if ((box.lower.array() > box.upper.array()).any()) {
        result.status = SolveStatus::Infeasible;
        result.x = x;
        result.objective = problem.objective_value(x);
        result.max_violation = problem.max_violation(x);
        return result;
    }
    x = box.project(x);

    RVec lambda = RVec::Zero(general.size());
    double rho = options.rho0;
    double prev_violation = kInf;
    double inner_tol = 1e-2;
    int iterations = 0;
    bool converged = false;
    RMat hess(n, n);

    for (int outer = 0; outer < options.max_outer; ++outer) {
        // Jacobi scaling from the diagonal curvature of the augmented
        // Lagrangian at the current point.
        RVec diag = RVec::Zero(n);
        for (std::size_t k = 0; k < general.size(); ++k) {
            const auto& c = problem.constraints[general[k]];
            const RVec g = c.gradient(x);
            if (!g.allFinite()) continue;
            diag += rho * g.cwiseAbs2();
            hess.setZero();
            c.add_hessian(x, 1.0, hess);
            diag += (lambda(k) + rho * std::max(0.0, c.value(x)) + 1.0) * hess.diagonal().cwiseAbs();
        }
        RVec scale(n);
        for (int i = 0; i < n; ++i) scale(i) = diag(i) > 0.0 ? 1.0 / std::sqrt(diag(i)) : 1.0;
        const Bounds scaled{box.lower.cwiseQuotient(scale), box.upper.cwiseQuotient(scale)};
        RVec y = x.cwiseQuotient(scale);

        const Lagrangian lag{problem, general, lambda, rho, scale};
        const bool stationary = minimize_projected(lag, scaled, y, options.max_inner, inner_tol, iterations);
        x = scale.cwiseProduct(y);

        double violation = 0.0;
        double complementarity = 0.0;
        for (std::size_t k = 0; k < general.size(); ++k) {
            const double g = problem.constraints[general[k]].value(x);
            violation = std::max(violation, g);
            lambda(k) = std::max(0.0, lambda(k) + rho * g);
            complementarity = std::max(complementarity, std::abs(std::min(-g, lambda(k))));
        }
        if (stationary && inner_tol <= options.step_tol && violation < options.feas_tol &&
            complementarity < 1e-8) {
            converged = true;
            break;
        }
        // Raising rho only helps once the inner problem was actually solved.
        if (stationary && violation > options.feas_tol && violation > 0.25 * prev_violation)
            rho = std::min(rho * 10.0, 1e10);
        prev_violation = violation;
        inner_tol = std::max(options.step_tol, inner_tol * 0.1);
    }

    result.status = converged ? SolveStatus::Optimal : SolveStatus::MaxIter;
    result.x = x;
    result.objective = problem.objective_value(x);
    result.max_violation = problem.max_violation(x);
    result.newton_steps = iterations;
    return result;
}

}  // namespace mmnoma
