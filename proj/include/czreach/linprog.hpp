// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_LINPROG_HPP_
#define CZREACH_LINPROG_HPP_

#include <Eigen/Dense>

namespace czreach::lp
{

/**
 * min objective' * x  s.t.  eq_lhs * x = eq_rhs,  box_lo <= x <= box_hi.
 *
 * Bounds may be infinite. The default box for constrained-zonotope
 * factor problems is [-1, 1]^n, see unit_box().
 */
struct LinearProgram
{
    Eigen::VectorXd objective;
    Eigen::MatrixXd eq_lhs;
    Eigen::VectorXd eq_rhs;
    Eigen::VectorXd box_lo;
    Eigen::VectorXd box_hi;

    /// LP over the unit box with the given equalities.
    static LinearProgram unit_box(const Eigen::VectorXd& objective, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b);

    Eigen::Index num_vars() const { return objective.size(); }
    Eigen::Index num_rows() const { return eq_lhs.rows(); }
};

enum class LpStatus
{
    Optimal,
    Infeasible,
    Unbounded
};

struct LpOutcome
{
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Eigen::VectorXd point;
    /// Minimum L1 equality residual found by phase one.
    double residual = 0.0;
    int iterations = 0;

    bool optimal() const { return status == LpStatus::Optimal; }
};

struct LpSettings
{
    /// Allowed L1 equality violation for a problem to count as feasible.
    double feas_tol = 1e-9;
    /// Reduced-cost tolerance for optimality.
    double opt_tol = 1e-8;
    double pivot_tol = 1e-11;
    /// Switch to Bland's rule after bland_factor * (n + m) iterations.
    int bland_factor = 3;
};

/**
 * Dense bounded-variable primal simplex: phase one on artificial variables
 * minimizing the L1 residual, then phase two on the true objective.
 *
 * Throws DimensionMismatch on inconsistent sizes and NumericalFailure when
 * the final basis cannot be verified even after a restart with Bland's rule.
 */
LpOutcome solve(const LinearProgram& lp, const LpSettings& settings = {});

/// Minimum of ||A x - b||_1 over the box, i.e. phase one only.
double min_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi, const LpSettings& settings = {});

/// True iff {x : A x = b, lo <= x <= hi} is non-empty to settings.feas_tol.
bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lo,
              const Eigen::VectorXd& hi, const LpSettings& settings = {});

} // namespace czreach::lp

#endif
