// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_REACH_HPP_
#define CZREACH_REACH_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "czreach/factorable.hpp"
#include "czreach/linprog.hpp"
#include "czreach/sets.hpp"

namespace czreach
{

/**
 * Discrete-time system x_k = f(x_{k-1}, w_{k-1}) with x_0 in X0 and w in W.
 *
 * The graph inputs are (x_1..x_nx, w_1..w_nw) in that order and its
 * outputs are the nx components of f. With n_w = 0 the disturbance set is
 * ignored.
 */
struct ReachProblem
{
    FactorGraph dynamics;
    Eigen::Index n_x = 0;
    Eigen::Index n_w = 0;
    ConstrainedZonotope X0;
    ConstrainedZonotope W;
    int horizon = 0;

    /// Throws DimensionMismatch when the pieces do not fit together.
    void validate() const;
};

struct ReachOptions
{
    Eigen::Index max_gens = 8;
    Eigen::Index max_cons = 20;
    SigmaMode sigma_mode = SigmaMode::IntervalBound;
    /// Apply reduce() after every step.
    bool reduce = true;
    lp::LpSettings lp;
};

struct StepStats
{
    int step = 0;
    Eigen::Index gens_pre = 0;
    Eigen::Index cons_pre = 0;
    Eigen::Index gens_post = 0;
    Eigen::Index cons_post = 0;
    /// Halfspaces and equalities of the lifted polytope (zero for baselines).
    Eigen::Index halfspaces = 0;
    Eigen::Index equalities = 0;
    double milliseconds = 0.0;
};

struct ReachResult
{
    /// X_0 .. X_k for every completed step.
    std::vector<ConstrainedZonotope> enclosures;
    std::vector<double> radii;
    /// One entry per completed step k >= 1.
    std::vector<StepStats> stats;
    /// Set when the run stopped early; the step that failed and why.
    std::optional<int> failed_step;
    std::string error;
    bool numerical_failure = false;

    bool complete() const { return !failed_step.has_value(); }
};

struct PropagateInfo
{
    Eigen::Index halfspaces = 0;
    Eigen::Index equalities = 0;
};

/**
 * Enclosure of f(X) as E_f((X x Z~) intersected with P), where Z~ holds the
 * natural interval bounds of the non-input factors over the interval hull
 * of X and P is the lifted polytope built on those bounds.
 */
ConstrainedZonotope propagate_cz(const FactorGraph& g, const ConstrainedZonotope& X,
                                 SigmaMode sigma_mode = SigmaMode::IntervalBound,
                                 const lp::LpSettings& settings = {}, PropagateInfo* info = nullptr);

/// E_f(X x Z~) without the lifted polytope.
ConstrainedZonotope propagate_interval_only(const FactorGraph& g, const ConstrainedZonotope& X,
                                            const lp::LpSettings& settings = {});

/// The proposed recursion: propagate_cz over X_{k-1} x W, then reduce.
ReachResult reach(const ReachProblem& problem, const ReachOptions& options = {});

/// Natural interval extension of f iterated over boxes, starting from hull(X0).
std::vector<IntervalVector> baseline_ia(const ReachProblem& problem, const lp::LpSettings& settings = {});

/// baseline_ia with every box stored as a constrained zonotope, never reduced.
ReachResult baseline_ia_sets(const ReachProblem& problem, const ReachOptions& options = {});

/**
 * Mean-value extension on constrained zonotopes:
 * f(m) + mid(J)(X - m) + box(rad(J) |hull(X) - m|), with m the hull
 * midpoint and J the interval Jacobian over the hull.
 */
ReachResult baseline_czmv(const ReachProblem& problem, const ReachOptions& options = {});

/// Sum of the radii of the interval hull. Throws EmptySet.
double radius_1norm(const ConstrainedZonotope& Z, const lp::LpSettings& settings = {});
double radius_1norm(const IntervalVector& box);

} // namespace czreach

#endif
