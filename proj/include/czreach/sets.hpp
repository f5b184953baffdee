// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_SETS_HPP_
#define CZREACH_SETS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "czreach/interval.hpp"
#include "czreach/linprog.hpp"

namespace czreach
{

/**
 * Constrained zonotope in CG-rep:
 * Z = { c + G xi : ||xi||_inf <= 1, A xi = b }.
 *
 * G is n x n_g, A is n_c x n_g. With n_c = 0 this is a plain zonotope.
 */
class ConstrainedZonotope
{
    public:
        ConstrainedZonotope() = default;

        /// Unconstrained zonotope (G, c).
        ConstrainedZonotope(Eigen::MatrixXd G, Eigen::VectorXd c);

        /// Throws DimensionMismatch on inconsistent block sizes.
        ConstrainedZonotope(Eigen::MatrixXd G, Eigen::VectorXd c, Eigen::MatrixXd A, Eigen::VectorXd b);

        const Eigen::MatrixXd& G() const { return G_; }
        const Eigen::VectorXd& c() const { return c_; }
        const Eigen::MatrixXd& A() const { return A_; }
        const Eigen::VectorXd& b() const { return b_; }

        Eigen::Index dim() const { return c_.size(); }
        Eigen::Index num_gens() const { return G_.cols(); }
        Eigen::Index num_cons() const { return A_.rows(); }

        bool is_zonotope() const { return A_.rows() == 0; }

        /// Point c + G xi for a factor vector xi (no feasibility check).
        Eigen::VectorXd point(const Eigen::VectorXd& xi) const;

    private:
        Eigen::MatrixXd G_;
        Eigen::VectorXd c_;
        Eigen::MatrixXd A_;
        Eigen::VectorXd b_;
};

/**
 * Convex polytope in H-rep with explicit equalities:
 * P = { x : H x <= k, Aeq x = beq }.
 */
class HPolytope
{
    public:
        HPolytope() = default;

        /// The whole space R^n (no rows).
        explicit HPolytope(Eigen::Index n);

        HPolytope(Eigen::MatrixXd H, Eigen::VectorXd k, Eigen::MatrixXd Aeq, Eigen::VectorXd beq);

        const Eigen::MatrixXd& H() const { return H_; }
        const Eigen::VectorXd& k() const { return k_; }
        const Eigen::MatrixXd& Aeq() const { return Aeq_; }
        const Eigen::VectorXd& beq() const { return beq_; }

        Eigen::Index dim() const { return H_.cols(); }
        Eigen::Index num_halfspaces() const { return H_.rows(); }
        Eigen::Index num_equalities() const { return Aeq_.rows(); }

        bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;

    private:
        Eigen::MatrixXd H_;
        Eigen::VectorXd k_;
        Eigen::MatrixXd Aeq_;
        Eigen::VectorXd beq_;
};

enum class SigmaMode
{
    /// sigma_i = (H c)_i - sum_j |(H G)_ij|, ignores the constraints.
    IntervalBound,
    /// sigma_i = min of (H z)_i over Z, one LP per halfspace.
    LpTight
};

// construction and exact set operations

ConstrainedZonotope cz_from_interval(const IntervalVector& x);
ConstrainedZonotope cartesian_product(const ConstrainedZonotope& Z, const ConstrainedZonotope& W);
ConstrainedZonotope linear_image(const Eigen::MatrixXd& R, const ConstrainedZonotope& Z);
ConstrainedZonotope minkowski_sum(const ConstrainedZonotope& Z, const ConstrainedZonotope& W);

/// { z in Z : R z in Y }.
ConstrainedZonotope generalized_intersection(const ConstrainedZonotope& Z, const ConstrainedZonotope& Y,
                                             const Eigen::MatrixXd& R);

HPolytope hpoly_intersection(const HPolytope& P, const HPolytope& Q);

/**
 * Z intersected with the H-rep polytope P, as a constrained zonotope.
 *
 * The inequality block is rewritten as H z in [sigma, k] with the interval
 * expressed in G-rep, which adds one generator and one constraint per
 * halfspace. sigma must be a lower bound of H z over Z. Entries with
 * sigma_i > k_i are clipped to k_i, which leaves the result empty as it
 * should be.
 */
ConstrainedZonotope intersect_hpoly(const ConstrainedZonotope& Z, const HPolytope& P,
                                    const Eigen::VectorXd& sigma);
ConstrainedZonotope intersect_hpoly(const ConstrainedZonotope& Z, const HPolytope& P,
                                    SigmaMode mode = SigmaMode::IntervalBound,
                                    const lp::LpSettings& settings = {});

Eigen::VectorXd sigma_lower_bound(const ConstrainedZonotope& Z, const Eigen::MatrixXd& H, SigmaMode mode,
                                  const lp::LpSettings& settings = {});

// LP-backed queries

struct HullWitness
{
    IntervalVector box;
    /// Members of Z attaining the lower / upper face of each coordinate.
    std::vector<Eigen::VectorXd> lower_points;
    std::vector<Eigen::VectorXd> upper_points;
};

/// Tightest axis-aligned box around Z via 2n LPs. Throws EmptySet.
IntervalVector interval_hull(const ConstrainedZonotope& Z, const lp::LpSettings& settings = {});
HullWitness interval_hull_with_witnesses(const ConstrainedZonotope& Z, const lp::LpSettings& settings = {});

/// Membership by feasibility of [G; A] xi = [x - c; b] over the unit box, to tol (L1 residual).
bool contains_point(const ConstrainedZonotope& Z, const Eigen::VectorXd& x, double tol = 1e-9);

/// False when B_inf(A, b) is empty to settings.feas_tol.
bool is_empty(const ConstrainedZonotope& Z, const lp::LpSettings& settings = {});

/// Support point argmax_{z in Z} d'z. Throws EmptySet.
Eigen::VectorXd support_point(const ConstrainedZonotope& Z, const Eigen::VectorXd& direction,
                              const lp::LpSettings& settings = {});

// complexity reduction

struct ReduceStats
{
    int pruned_generators = 0;
    int pruned_constraints = 0;
    int eliminated_constraints = 0;
    int girard_removed = 0;
    /// The support template was tighter than the elimination result.
    bool used_template = false;
};

/**
 * Outer approximation Z' of Z with at most max_gens generators and max_cons
 * constraints; Z itself when it already fits.
 *
 * Linearly dependent constraint rows are dropped and the factors are
 * rescaled onto LP bounds of B_inf(A, b), both exact. Constraints are then removed by eliminating one factor per
 * constraint, preferring pairs whose dropped box bound is inactive on that
 * enclosure. Remaining excess generators are removed by order reduction of
 * the lifted zonotope ([G; A], [c; -b]), or by further elimination while the
 * lifted dimension exceeds the budget. When any of this loses information
 * the result is compared with a support template (the interval hull cut by
 * slabs along fixed directions, all bounds from LPs over Z) and the tighter
 * of the two is returned. Requires max_gens >= dim(Z).
 */
ConstrainedZonotope reduce(const ConstrainedZonotope& Z, Eigen::Index max_gens, Eigen::Index max_cons,
                           ReduceStats* stats = nullptr);

/// Drops all-zero generator columns and trivially satisfied zero constraint rows (exact).
ConstrainedZonotope prune_zeros(const ConstrainedZonotope& Z);

/// Interval enclosure of B_inf(A, b) by constraint propagation.
IntervalVector factor_enclosure(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int sweeps = 10);

/// Removes one constraint and one factor (outer approximation).
ConstrainedZonotope eliminate_one_constraint(const ConstrainedZonotope& Z);

/// Girard order reduction for the unconstrained case.
ConstrainedZonotope girard_reduce(const ConstrainedZonotope& Z, Eigen::Index max_gens);

} // namespace czreach

#endif
