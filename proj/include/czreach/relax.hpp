// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_RELAX_HPP_
#define CZREACH_RELAX_HPP_

#include <cstddef>

#include <Eigen/Dense>

#include "czreach/factorable.hpp"
#include "czreach/interval.hpp"
#include "czreach/sets.hpp"

namespace czreach
{

// Polyhedral enclosures Q_j of single factors z_j = g_j(z) in the lifted
// space R^{n_z}. Every function returns an HPolytope with n_z columns whose
// rows touch only the columns of z_j and its operands. Indices are 0-based.

/// z_j = z_a + z_b as one equality row.
HPolytope relax_sum(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j);
/// z_j = z_a - z_b as one equality row.
HPolytope relax_sub(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j);
/// z_j = p z_a + q as one equality row.
HPolytope relax_affine(Eigen::Index n_z, std::size_t a, std::size_t j, double p, double q);
/// z_j = value as one equality row.
HPolytope relax_constant(Eigen::Index n_z, std::size_t j, double value);

/// McCormick envelope of z_j = z_a z_b over Za x Zb (four rows).
HPolytope relax_mul(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j, const Interval& Za,
                    const Interval& Zb);

/**
 * z_j = z_a / z_b, written as the bilinear identity z_a = z_b z_j and
 * enclosed by its McCormick envelope over Zb x (Za / Zb).
 * Throws DivisionByZeroInterval when 0 is in Zb.
 */
HPolytope relax_div(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j, const Interval& Za,
                    const Interval& Zb);

// Univariate enclosures: tangents at lb, mid and ub on the convex (or
// concave) side and the secant on the other. A degenerate Za (width below
// 1e-12) gives a single equality; below 1e-8 the mid tangent is dropped.

HPolytope relax_exp(Eigen::Index n_z, std::size_t a, std::size_t j, const Interval& Za);
/// Throws DomainError unless Za.lo() > 0.
HPolytope relax_log(Eigen::Index n_z, std::size_t a, std::size_t j, const Interval& Za);
/// Requires q even and q >= 2.
HPolytope relax_even_pow(Eigen::Index n_z, std::size_t a, std::size_t j, int q, const Interval& Za);

/**
 * z_j = z_a^q for odd q >= 3.
 *
 * Sign-definite Za is handled like the even power (lb >= 0) or the
 * logarithm (ub <= 0). When lb < 0 < ub the convex envelope follows the
 * secant from lb to the tangency point r = -lb * rho_q and then the
 * function, so the lower rows are that secant and the tangent at ub; the
 * upper rows mirror this with s = -ub * rho_q. If the tangency point falls
 * outside Za the secant across Za is used together with the bound
 * z_j >= lb^q (resp. z_j <= ub^q), so the mixed case always has four rows.
 */
HPolytope relax_odd_pow(Eigen::Index n_z, std::size_t a, std::size_t j, int q, const Interval& Za);

/**
 * Root rho in (0, 1) of (q - 1) rho^q + q rho^(q-1) - 1 = 0 for odd q >= 3,
 * by Newton's method safeguarded with bisection (50 iterations, tolerance
 * 1e-10). Throws NumericalFailure if it does not converge.
 */
double odd_power_tangency_ratio(int q);

/// Q_j for factor j of g given enclosures Z of all factors (empty for inputs).
HPolytope relax_factor(const FactorGraph& g, std::size_t j, const IntervalVector& Z);

struct LiftedPolytope
{
    /// P in R^{n_z}: the intersection of all Q_j.
    HPolytope poly;
    /// Factor enclosures Z the relaxation was built on.
    IntervalVector factor_bounds;
};

/// P from natural interval bounds Z = eval_interval(g, X).
LiftedPolytope build_lifted_polytope(const FactorGraph& g, const IntervalVector& X);
/// P from precomputed factor bounds.
LiftedPolytope build_lifted_polytope_from_bounds(const FactorGraph& g, const IntervalVector& Z);

struct RowCounts
{
    Eigen::Index halfspaces = 0;
    Eigen::Index equalities = 0;
};

/// Rows of P for non-degenerate factor bounds, from the node kinds alone.
RowCounts lifted_row_counts(const FactorGraph& g);

} // namespace czreach

#endif
