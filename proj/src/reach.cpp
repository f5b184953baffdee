// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/reach.hpp"

#include <chrono>
#include <string>

#include "czreach/errors.hpp"
#include "czreach/relax.hpp"

namespace czreach
{

namespace
{

IntervalVector tail(const IntervalVector& Z, std::size_t from)
{
    return IntervalVector(Z.begin() + static_cast<std::ptrdiff_t>(from), Z.end());
}

/// X_{k-1} x W, or X_{k-1} alone without disturbances.
ConstrainedZonotope domain_of(const ReachProblem& p, const ConstrainedZonotope& X)
{
    if (p.n_w == 0)
        return X;
    return cartesian_product(X, p.W);
}

IntervalVector output_box(const FactorGraph& g, const IntervalVector& Z)
{
    IntervalVector out;
    for (std::size_t o : g.outputs())
        out.push_back(Z[o]);
    return out;
}

template <class Step>
ReachResult run_recursion(const ReachProblem& problem, const ReachOptions& options, Step step)
{
    problem.validate();
    ReachResult result;
    result.enclosures.push_back(problem.X0);
    result.radii.push_back(radius_1norm(problem.X0, options.lp));
    for (int k = 1; k <= problem.horizon; ++k)
    {
        const auto t0 = std::chrono::steady_clock::now();
        StepStats s;
        s.step = k;
        try
        {
            const ConstrainedZonotope D = domain_of(problem, result.enclosures.back());
            ConstrainedZonotope next = step(D, s);
            s.gens_pre = next.num_gens();
            s.cons_pre = next.num_cons();
            if (options.reduce)
                next = czreach::reduce(next, options.max_gens, options.max_cons);
            s.gens_post = next.num_gens();
            s.cons_post = next.num_cons();
            const double rad = radius_1norm(next, options.lp);
            s.milliseconds =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            result.enclosures.push_back(std::move(next));
            result.radii.push_back(rad);
            result.stats.push_back(s);
        }
        catch (const Error& e)
        {
            result.failed_step = k;
            result.error = "step " + std::to_string(k) + ": " + e.what();
            result.numerical_failure = dynamic_cast<const NumericalFailure*>(&e) != nullptr;
            break;
        }
        catch (const std::exception& e)
        {
            // non-finite interval bounds surface as std::invalid_argument
            result.failed_step = k;
            result.error = "step " + std::to_string(k) + ": " + e.what();
            result.numerical_failure = true;
            break;
        }
    }
    return result;
}

} // namespace

void ReachProblem::validate() const
{
    if (n_x <= 0)
        throw DimensionMismatch("ReachProblem: n_x must be positive");
    if (n_w < 0)
        throw DimensionMismatch("ReachProblem: n_w must be non-negative");
    if (static_cast<Eigen::Index>(dynamics.num_inputs()) != n_x + n_w)
        throw DimensionMismatch("ReachProblem: dynamics take " + std::to_string(dynamics.num_inputs()) +
                                " inputs, expected n_x + n_w = " + std::to_string(n_x + n_w));
    if (static_cast<Eigen::Index>(dynamics.num_outputs()) != n_x)
        throw DimensionMismatch("ReachProblem: dynamics have " + std::to_string(dynamics.num_outputs()) +
                                " outputs, expected n_x = " + std::to_string(n_x));
    if (X0.dim() != n_x)
        throw DimensionMismatch("ReachProblem: initial set has dimension " + std::to_string(X0.dim()));
    if (n_w > 0 && W.dim() != n_w)
        throw DimensionMismatch("ReachProblem: disturbance set has dimension " + std::to_string(W.dim()));
    if (horizon < 0)
        throw DimensionMismatch("ReachProblem: horizon must be non-negative");
}

ConstrainedZonotope propagate_cz(const FactorGraph& g, const ConstrainedZonotope& X, SigmaMode sigma_mode,
                                 const lp::LpSettings& settings, PropagateInfo* info)
{
    if (X.dim() != static_cast<Eigen::Index>(g.num_inputs()))
        throw DimensionMismatch("propagate_cz: set dimension does not match the graph inputs");
    const IntervalVector box = interval_hull(X, settings);
    const IntervalVector Z = eval_interval(g, box);
    const LiftedPolytope P = build_lifted_polytope_from_bounds(g, Z);
    const ConstrainedZonotope lifted = cartesian_product(X, cz_from_interval(tail(Z, g.num_inputs())));
    const ConstrainedZonotope cut = intersect_hpoly(lifted, P.poly, sigma_mode, settings);
    if (info != nullptr)
    {
        info->halfspaces = P.poly.num_halfspaces();
        info->equalities = P.poly.num_equalities();
    }
    return linear_image(g.output_selector(), cut);
}

ConstrainedZonotope propagate_interval_only(const FactorGraph& g, const ConstrainedZonotope& X,
                                            const lp::LpSettings& settings)
{
    if (X.dim() != static_cast<Eigen::Index>(g.num_inputs()))
        throw DimensionMismatch("propagate_interval_only: set dimension does not match the graph inputs");
    const IntervalVector Z = eval_interval(g, interval_hull(X, settings));
    const ConstrainedZonotope lifted = cartesian_product(X, cz_from_interval(tail(Z, g.num_inputs())));
    return linear_image(g.output_selector(), lifted);
}

ReachResult reach(const ReachProblem& problem, const ReachOptions& options)
{
    return run_recursion(problem, options,
                         [&](const ConstrainedZonotope& D, StepStats& s)
                         {
                             PropagateInfo info;
                             ConstrainedZonotope next =
                                 propagate_cz(problem.dynamics, D, options.sigma_mode, options.lp, &info);
                             s.halfspaces = info.halfspaces;
                             s.equalities = info.equalities;
                             return next;
                         });
}

std::vector<IntervalVector> baseline_ia(const ReachProblem& problem, const lp::LpSettings& settings)
{
    problem.validate();
    std::vector<IntervalVector> boxes{interval_hull(problem.X0, settings)};
    const IntervalVector w = problem.n_w > 0 ? interval_hull(problem.W, settings) : IntervalVector{};
    for (int k = 1; k <= problem.horizon; ++k)
    {
        IntervalVector in = boxes.back();
        in.insert(in.end(), w.begin(), w.end());
        boxes.push_back(output_box(problem.dynamics, eval_interval(problem.dynamics, in)));
    }
    return boxes;
}

ReachResult baseline_ia_sets(const ReachProblem& problem, const ReachOptions& options)
{
    ReachOptions o = options;
    o.reduce = false;
    return run_recursion(problem, o,
                         [&](const ConstrainedZonotope& D, StepStats&)
                         {
                             const IntervalVector Z = eval_interval(problem.dynamics, interval_hull(D, o.lp));
                             return cz_from_interval(output_box(problem.dynamics, Z));
                         });
}

ReachResult baseline_czmv(const ReachProblem& problem, const ReachOptions& options)
{
    const FactorGraph& g = problem.dynamics;
    return run_recursion(
        problem, options,
        [&](const ConstrainedZonotope& D, StepStats&)
        {
            const IntervalVector box = interval_hull(D, options.lp);
            const std::vector<double> mv = midpoints(box);
            const std::vector<double> rv = radii(box);
            const Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mv.data(), D.dim());
            const IntervalMatrix J = eval_interval_jacobian(g, box);
            const Eigen::VectorXd fm = eval_real(g, m);

            const auto nx = static_cast<Eigen::Index>(J.rows());
            const auto nin = static_cast<Eigen::Index>(J.cols());
            Eigen::MatrixXd Jm(nx, nin);
            Eigen::VectorXd remainder = Eigen::VectorXd::Zero(nx);
            for (Eigen::Index i = 0; i < nx; ++i)
            {
                for (Eigen::Index j = 0; j < nin; ++j)
                {
                    const Interval& Jij = J(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                    Jm(i, j) = Jij.mid();
                    remainder(i) += Jij.rad() * rv[static_cast<std::size_t>(j)];
                }
            }
            const ConstrainedZonotope lin = linear_image(Jm, D);
            const ConstrainedZonotope shifted(lin.G(), lin.c() + fm - Jm * m, lin.A(), lin.b());
            const ConstrainedZonotope rem(Eigen::MatrixXd(remainder.asDiagonal()), Eigen::VectorXd::Zero(nx));
            return minkowski_sum(shifted, rem);
        });
}

double radius_1norm(const ConstrainedZonotope& Z, const lp::LpSettings& settings)
{
    return radius_1norm(interval_hull(Z, settings));
}

double radius_1norm(const IntervalVector& box)
{
    double r = 0.0;
    for (const Interval& v : box)
        r += v.rad();
    return r;
}

} // namespace czreach
