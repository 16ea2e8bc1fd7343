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

#include "mmnoma/cvx_solver.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace mmnoma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(ConstraintTag tag)
{
    switch (tag) {
    case ConstraintTag::Affine: return "affine";
    case ConstraintTag::LogRate: return "log-rate";
    case ConstraintTag::QuadraticUpper: return "convex-quadratic-upper";
    case ConstraintTag::LinearizedSurrogate: return "linearized-surrogate";
    case ConstraintTag::NormBall: return "norm-ball";
    case ConstraintTag::Box: return "box";
    }
    return "unknown";
}

const char* to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIter: return "max-iter";
    }
    return "unknown";
}

bool Constraint::in_domain(const RVec& x) const
{
    return !has_log() || log_lin.dot(x) + log_offset > 0.0;
}

double Constraint::value(const RVec& x) const
{
    double v = lin.dot(x) + offset;
    if (has_quad()) v += x.dot(quad * x);
    if (has_log()) {
        const double arg = log_lin.dot(x) + log_offset;
        if (!(arg > 0.0)) return kInf;
        v -= log_weight * std::log(arg);
    }
    return v;
}

RVec Constraint::gradient(const RVec& x) const
{
    RVec g = lin;
    if (has_quad()) g.noalias() += 2.0 * (quad * x);
    if (has_log()) g -= (log_weight / (log_lin.dot(x) + log_offset)) * log_lin;
    return g;
}

void Constraint::add_hessian(const RVec& x, double scale, RMat& hess) const
{
    if (has_quad()) hess.noalias() += (2.0 * scale) * quad;
    if (has_log()) {
        const double arg = log_lin.dot(x) + log_offset;
        hess.noalias() += (scale * log_weight / (arg * arg)) * (log_lin * log_lin.transpose());
    }
}

double ConvexSubproblem::max_violation(const RVec& x) const
{
    double worst = -kInf;
    for (const auto& c : constraints) worst = std::max(worst, c.value(x));
    return worst;
}

bool ConvexSubproblem::strictly_feasible(const RVec& x) const { return max_violation(x) < 0.0; }

bool ConvexSubproblem::feasible(const RVec& x, double tol) const
{
    return max_violation(x) <= tol;
}

void dump(const ConvexSubproblem& problem, std::ostream& out)
{
    out << std::setprecision(12);
    out << "family " << problem.family << "\n";
    out << "variables " << problem.n_vars() << "\n";
    for (int i = 0; i < problem.n_vars(); ++i) {
        out << "  " << i << ' ' << (i < static_cast<int>(problem.names.size()) ? problem.names[i] : "x")
            << " objective " << problem.objective(i);
        if (problem.start.size() == problem.n_vars()) out << " start " << problem.start(i);
        out << "\n";
    }
    out << "constraints " << problem.n_constraints() << "\n";
    for (const auto& c : problem.constraints) {
        out << "  [" << to_string(c.tag) << "] " << c.label;
        if (problem.start.size() == problem.n_vars()) out << " value_at_start " << c.value(problem.start);
        out << "\n    lin";
        for (int i = 0; i < c.lin.size(); ++i)
            if (c.lin(i) != 0.0) out << ' ' << i << ':' << c.lin(i);
        out << "\n    offset " << c.offset << "\n";
        if (c.has_quad()) {
            out << "    quad";
            for (int i = 0; i < c.quad.rows(); ++i)
                for (int j = 0; j < c.quad.cols(); ++j)
                    if (c.quad(i, j) != 0.0) out << ' ' << i << ',' << j << ':' << c.quad(i, j);
            out << "\n";
        }
        if (c.has_log()) {
            out << "    log weight " << c.log_weight << " offset " << c.log_offset << " lin";
            for (int i = 0; i < c.log_lin.size(); ++i)
                if (c.log_lin(i) != 0.0) out << ' ' << i << ':' << c.log_lin(i);
            out << "\n";
        }
    }
}

namespace {

// Barrier for: minimize -c'x subject to g_i(x) < 0.
struct Barrier {
    const ConvexSubproblem& problem;

    double value(const RVec& x, double t) const
    {
        double v = -t * problem.objective.dot(x);
        for (const auto& c : problem.constraints) {
            const double g = c.value(x);
            if (!(g < 0.0)) return kInf;
            v -= std::log(-g);
        }
        return v;
    }

    void derivatives(const RVec& x, double t, RVec& grad, RMat& hess) const
    {
        const int n = problem.n_vars();
        grad = -t * problem.objective;
        hess.setZero(n, n);
        for (const auto& c : problem.constraints) {
            const double g = c.value(x);
            const RVec gi = c.gradient(x);
            grad += gi / (-g);
            hess.noalias() += (gi * gi.transpose()) / (g * g);
            c.add_hessian(x, 1.0 / (-g), hess);
        }
    }
};

enum class CenterOutcome { Centered, Budget, Stalled, EarlyStop };

template <class Stop>
CenterOutcome center(const Barrier& barrier, RVec& x, double t, int& steps, int max_steps,
                     Stop&& early_stop)
{
    constexpr double alpha = 0.01;
    constexpr double beta = 0.5;
    RVec grad;
    RMat hess;
    while (true) {
        if (early_stop(x)) return CenterOutcome::EarlyStop;
        if (steps >= max_steps) return CenterOutcome::Budget;
        barrier.derivatives(x, t, grad, hess);
        Eigen::LDLT<RMat> ldlt(hess);
        RVec dx = ldlt.solve(-grad);
        if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
            const double reg = 1e-10 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
            hess.diagonal().array() += reg;
            dx = hess.ldlt().solve(-grad);
            if (!dx.allFinite()) return CenterOutcome::Stalled;
        }
        const double slope = grad.dot(dx);
        const double f0 = barrier.value(x, t);
        // Below the roundoff floor of f0 no step can make measurable progress.
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f0);
        if (-slope / 2.0 <= std::max(1e-11, floor)) return CenterOutcome::Centered;
        double s = 1.0;
        double f1 = barrier.value(x + s * dx, t);
        while (f1 > f0 + alpha * s * slope) {
            s *= beta;
            if (s < 1e-16) return CenterOutcome::Stalled;
            f1 = barrier.value(x + s * dx, t);
        }
        if (!(f1 < f0)) return CenterOutcome::Centered;
        x += s * dx;
        ++steps;
    }
}

double kkt_residual(const ConvexSubproblem& problem, const RVec& x, double t)
{
    RVec r = -problem.objective;
    for (const auto& c : problem.constraints) {
        const double g = c.value(x);
        r += c.gradient(x) / (t * -g);
    }
    return r.lpNorm<Eigen::Infinity>();
}

// Finds a strictly feasible point by minimizing s subject to g_i(x) <= s.
bool phase_one(const ConvexSubproblem& problem, RVec& x, int& steps, const SolverOptions& options)
{
    const int n = problem.n_vars();
    ConvexSubproblem aux;
    aux.family = problem.family + "/phase-I";
    aux.objective = RVec::Zero(n + 1);
    aux.objective(n) = -1.0;
    for (const auto& c : problem.constraints) {
        Constraint a = c;
        a.lin.conservativeResize(n + 1);
        a.lin(n) = -1.0;
        if (a.has_quad()) {
            a.quad.conservativeResize(n + 1, n + 1);
            a.quad.row(n).setZero();
            a.quad.col(n).setZero();
        }
        if (a.has_log()) {
            a.log_lin.conservativeResize(n + 1);
            a.log_lin(n) = 0.0;
        }
        aux.constraints.push_back(std::move(a));
    }
    // Epigraph variables are free in phase I; a wide ball around the start
    // keeps the auxiliary barrier bounded below.
    {
        Constraint ball;
        ball.tag = ConstraintTag::QuadraticUpper;
        ball.label = "phase-I ball";
        ball.quad = RMat::Identity(n + 1, n + 1);
        ball.quad(n, n) = 0.0;
        ball.lin = RVec::Zero(n + 1);
        ball.lin.head(n) = -2.0 * x;
        const double radius = 1e3 * (1.0 + x.norm());
        ball.offset = x.squaredNorm() - radius * radius;
        aux.constraints.push_back(std::move(ball));
    }

    const double worst = problem.max_violation(x);
    if (!std::isfinite(worst)) return false;
    RVec y(n + 1);
    y.head(n) = x;
    y(n) = worst + std::max(1.0, std::abs(worst));

    const Barrier barrier{aux};
    const int m = aux.n_constraints();
    auto found = [&](const RVec& cand) {
        return cand(n) < -options.interior_margin && problem.max_violation(cand.head(n)) < -options.interior_margin;
    };
    double t = options.t0;
    while (true) {
        const auto outcome = center(barrier, y, t, steps, options.max_newton, found);
        if (outcome == CenterOutcome::EarlyStop) {
            x = y.head(n);
            return true;
        }
        if (outcome == CenterOutcome::Budget) return false;
        if (m / t < options.tol) return false;  // converged with s* >= 0
        t *= options.mu;
    }
}

}  // namespace

SolveResult solve(const ConvexSubproblem& problem, const SolverOptions& options)
{
    const int n = problem.n_vars();
    const int m = problem.n_constraints();
    SolveResult result;
    result.x = problem.start.size() == n ? problem.start : RVec::Zero(n);

    const bool start_ok = problem.start.size() == n && problem.feasible(problem.start, options.start_tol);
    auto fall_back = [&](SolveResult r) {
        if (start_ok && (!r.ok() || problem.objective_value(problem.start) > r.objective)) {
            r.x = problem.start;
            r.objective = problem.objective_value(problem.start);
            r.max_violation = problem.max_violation(problem.start);
            r.used_start = true;
            if (!r.ok()) {
                r.status = SolveStatus::Optimal;
                r.gap = kInf;
            }
        }
        return r;
    };

    RVec x = result.x;
    int steps = 0;
    // A start on the boundary makes the barrier crawl; push it inside first.
    if (!(problem.max_violation(x) < -options.interior_margin)) {
        if (!phase_one(problem, x, steps, options)) {
            result.status = SolveStatus::Infeasible;
            result.newton_steps = steps;
            return fall_back(result);
        }
    }

    const Barrier barrier{problem};
    auto unbounded = [&](const RVec& cand) { return problem.objective_value(cand) > 1e12; };
    double t = options.t0;
    while (true) {
        const auto outcome = center(barrier, x, t, steps, options.max_newton, unbounded);
        if (outcome == CenterOutcome::EarlyStop) {
            result.status = SolveStatus::Unbounded;
            break;
        }
        if (outcome == CenterOutcome::Budget) {
            result.status = SolveStatus::MaxIter;
            break;
        }
        if (m / t < options.tol) {
            result.status = SolveStatus::Optimal;
            break;
        }
        t *= options.mu;
    }
    result.x = x;
    result.objective = problem.objective_value(x);
    result.gap = m / t;
    result.kkt_residual = kkt_residual(problem, x, t);
    result.max_violation = problem.max_violation(x);
    result.newton_steps = steps;
    return fall_back(result);
}

}  // namespace mmnoma
