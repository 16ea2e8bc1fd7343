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

#ifndef MMNOMA_CVX_SOLVER_HPP
#define MMNOMA_CVX_SOLVER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mmnoma/common.hpp"

namespace mmnoma {

// Closed catalog of constraint shapes. The tag names what the constraint
// models; convexity comes from the shape every tag shares (see Constraint).
enum class ConstraintTag {
    Affine,
    LogRate,              // affine - w log(affine) <= 0
    QuadraticUpper,       // PSD quadratic form <= affine
    LinearizedSurrogate,  // convex quadratic <= affine minorant
    NormBall,             // ||row W||^2 <= 1
    Box,                  // single-variable bound
};

const char* to_string(ConstraintTag tag);

/// g(x) = x'Qx + a'x + b - w log(d'x + e) <= 0, with Q PSD and w >= 0.
/// Terms that are absent are left empty (Q of size 0, w = 0).
struct Constraint {
    ConstraintTag tag = ConstraintTag::Affine;
    std::string label;
    RMat quad;
    RVec lin;
    double offset = 0.0;
    double log_weight = 0.0;
    RVec log_lin;
    double log_offset = 0.0;

    bool has_quad() const { return quad.size() > 0; }
    bool has_log() const { return log_weight != 0.0; }
    bool in_domain(const RVec& x) const;
    double value(const RVec& x) const;
    RVec gradient(const RVec& x) const;
    // Accumulates scale * Hessian into `hess`.
    void add_hessian(const RVec& x, double scale, RMat& hess) const;
};

/// maximize objective'x subject to every constraint.
struct ConvexSubproblem {
    std::string family;
    std::vector<std::string> names;  // one per variable
    RVec objective;
    std::vector<Constraint> constraints;
    RVec start;  // suggested starting point (may sit on the boundary)

    int n_vars() const { return static_cast<int>(objective.size()); }
    int n_constraints() const { return static_cast<int>(constraints.size()); }
    double objective_value(const RVec& x) const { return objective.dot(x); }
    // max_i g_i(x); +inf outside the log domain.
    double max_violation(const RVec& x) const;
    bool strictly_feasible(const RVec& x) const;
    bool feasible(const RVec& x, double tol) const;
};

// Writes a plain-text description (variables, start point, constraints).
void dump(const ConvexSubproblem& problem, std::ostream& out);

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

const char* to_string(SolveStatus status);

struct SolverOptions {
    double tol = 1e-6;       // duality gap m/t at termination
    double mu = 10.0;        // barrier parameter growth
    int max_newton = 200;    // Newton steps per solve, phase I included
    double t0 = 1.0;
    double start_tol = 1e-9; // slack accepted when falling back to `start`
    double interior_margin = 1e-6;  // min -g_i before the barrier phase starts
};

struct SolveResult {
    SolveStatus status = SolveStatus::MaxIter;
    RVec x;
    double objective = 0.0;
    double gap = 0.0;
    double kkt_residual = 0.0;
    double max_violation = 0.0;
    int newton_steps = 0;
    bool used_start = false;  // start point beat the barrier iterate

    bool ok() const { return status == SolveStatus::Optimal || status == SolveStatus::MaxIter; }
};

/// Log-barrier interior point with damped Newton steps and backtracking.
/// A strictly feasible point is found by a phase-I problem when `start` is
/// not one. If `start` is feasible (within start_tol) and scores better than
/// the barrier iterate, it is returned instead.
SolveResult solve(const ConvexSubproblem& problem, const SolverOptions& options = {});

struct FirstOrderOptions {
    int max_outer = 60;
    int max_inner = 200000;
    double feas_tol = 1e-9;
    double step_tol = 1e-8;  // final projected-gradient tolerance
    double rho0 = 10.0;
};

/// Independent cross-check: augmented Lagrangian with a projected
/// limited-memory quasi-Newton inner loop (two-metric projection, gradient
/// fallback). Single-variable bounds become projections. Gradient-only.
SolveResult solve_first_order(const ConvexSubproblem& problem,
                              const FirstOrderOptions& options = {});

}  // namespace mmnoma

#endif  // MMNOMA_CVX_SOLVER_HPP
