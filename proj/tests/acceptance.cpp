// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one line per criterion and exits non-zero when
// any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "czreach/cli/commands.hpp"
#include "czreach/relax.hpp"
#include "support.hpp"

using namespace czreach;
using namespace czreach::testing;

namespace
{

using Clock = std::chrono::steady_clock;

constexpr double membership_tol = 1e-6;
constexpr std::size_t audit_samples = 10'000;
constexpr std::uint64_t audit_seed = 2024;
constexpr double example1_budget_s = 60.0;
constexpr double example2_budget_s = 300.0;
constexpr double small_set_rel_tol = 0.25;
constexpr double divergence_factor = 2.0;
constexpr double boundedness_factor = 3.0;
constexpr int oracle_pairs = 200;
constexpr int oracle_queries = 1000;
constexpr int grid_points = 1000;
constexpr double relax_slack = 1e-9;
constexpr double corner_tol = 1e-12;
constexpr int jacobian_points = 100;
constexpr double fd_step = 1e-5;
constexpr double jacobian_tol = 1e-3;
constexpr int reduce_sets = 100;
constexpr std::size_t reduce_members = 1000;
constexpr Eigen::Index reduce_max_gens = 8;
constexpr Eigen::Index reduce_max_cons = 20;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Sample, propagate and check membership for one problem.
Outcome audit_problem(const ReachProblem& p, std::size_t& violations, std::size_t& checked)
{
    const ReachResult r = reach(p);
    if (!r.complete())
        return {false, "reach stopped: " + r.error};
    const cli::AuditReport a = cli::audit(p, r.enclosures, audit_samples, audit_seed, membership_tol);
    violations += a.violations();
    for (const cli::StepAudit& s : a.steps)
        checked += s.checked;
    return {true, ""};
}

Outcome criterion1()
{
    const auto t0 = Clock::now();
    std::size_t violations = 0;
    std::size_t checked = 0;
    for (double alpha : {0.1, 0.5, 1.0})
    {
        const Outcome o = audit_problem(example1(alpha, 2), violations, checked);
        if (!o.pass)
            return {false, "alpha " + fmt(alpha) + ": " + o.detail};
    }
    const double t = seconds_since(t0);
    return {violations == 0 && t < example1_budget_s,
            std::to_string(violations) + "/" + std::to_string(checked) + " violations, " + fmt(t) + " s (budget " +
                fmt(example1_budget_s) + " s)"};
}

Outcome criterion2()
{
    const auto t0 = Clock::now();
    std::size_t violations = 0;
    std::size_t checked = 0;
    const Outcome o = audit_problem(example2(50), violations, checked);
    if (!o.pass)
        return o;
    const double t = seconds_since(t0);
    return {violations == 0 && t < example2_budget_s,
            std::to_string(violations) + "/" + std::to_string(checked) + " violations, " + fmt(t) + " s (budget " +
                fmt(example2_budget_s) + " s)"};
}

Outcome criterion3()
{
    const ReachProblem p = example1(1.0, 2);
    const double alg1 = reach(p).radii.at(2);
    const double ia = radius_1norm(baseline_ia(p).at(2));
    const double czmv = baseline_czmv(p).radii.at(2);
    return {alg1 < ia && alg1 < czmv, "alg1 " + fmt(alg1) + ", ia " + fmt(ia) + ", czmv " + fmt(czmv)};
}

Outcome criterion4()
{
    const ReachProblem p = example1(0.1, 1);
    const double alg1 = reach(p).radii.at(1);
    const double czmv = baseline_czmv(p).radii.at(1);
    const double rel = std::abs(alg1 - czmv) / czmv;
    return {rel <= small_set_rel_tol,
            "alg1 " + fmt(alg1) + ", czmv " + fmt(czmv) + ", relative difference " + fmt(rel) + " (limit " +
                fmt(small_set_rel_tol) + ")"};
}

Outcome criterion5()
{
    const ReachProblem p = example2(50);
    const ReachResult r = reach(p);
    if (!r.complete())
        return {false, "reach stopped: " + r.error};
    const std::vector<IntervalVector> ia = baseline_ia(example2(20));
    if (ia.size() < 21)
        return {false, "ia stopped before step 20"};
    const double ia20 = radius_1norm(ia[20]);
    const double a5 = r.radii.at(5);
    const double a20 = r.radii.at(20);
    const double a50 = r.radii.at(50);
    const bool diverges = ia20 >= divergence_factor * a20;
    const bool bounded = a50 <= boundedness_factor * a5;
    return {diverges && bounded, "ia(20) " + fmt(ia20) + ", alg1(5) " + fmt(a5) + ", alg1(20) " + fmt(a20) +
                                     ", alg1(50) " + fmt(a50)};
}

Outcome criterion6()
{
    std::size_t steps = 0;
    std::size_t mismatches = 0;
    for (const ReachProblem& p : {example1(0.1, 2), example1(0.5, 2), example1(1.0, 2), example2(50)})
    {
        const ReachResult r = reach(p);
        if (!r.complete())
            return {false, "reach stopped: " + r.error};
        const RowCounts rc = lifted_row_counts(p.dynamics);
        const auto n_z = static_cast<Eigen::Index>(p.dynamics.size());
        Eigen::Index gens = p.X0.num_gens();
        Eigen::Index cons = p.X0.num_cons();
        for (const StepStats& s : r.stats)
        {
            ++steps;
            const Eigen::Index want_gens = gens + n_z - (p.n_x + p.n_w) + rc.halfspaces;
            const Eigen::Index want_cons = cons + rc.halfspaces + rc.equalities;
            mismatches += (s.gens_pre != want_gens || s.cons_pre != want_cons) ? 1 : 0;
            gens = s.gens_post;
            cons = s.cons_post;
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(steps) + " steps"};
}

Outcome criterion7()
{
    std::mt19937_64 rng(7);
    std::size_t disagreements = 0;
    std::size_t inside = 0;
    for (int trial = 0; trial < oracle_pairs; ++trial)
    {
        const Eigen::Index n = 2 + trial % 2;
        const RandomCz r = random_cz(n, n + 1 + trial % 4, trial % 3, rng);
        const Eigen::Index n_h = 1 + trial % 4;
        const Eigen::MatrixXd H = random_matrix(n_h, n, rng);
        const Eigen::VectorXd k = H * r.Z.c() + uniform_vector(n_h, -0.5, 1.0, rng);
        const HPolytope P(H, k, Eigen::MatrixXd(0, n), Eigen::VectorXd(0));
        const ConstrainedZonotope S =
            intersect_hpoly(r.Z, P, trial % 2 == 0 ? SigmaMode::IntervalBound : SigmaMode::LpTight);
        const IntervalVector hull = interval_hull(r.Z);
        for (int q = 0; q < oracle_queries; ++q)
        {
            Eigen::VectorXd x(n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const Interval& h = hull[static_cast<std::size_t>(i)];
                std::uniform_real_distribution<double> u(h.lo() - 0.1, h.hi() + 0.1);
                x(i) = u(rng);
            }
            const bool joint = contains_point(r.Z, x, membership_tol) && P.contains(x, membership_tol);
            const bool got = contains_point(S, x, membership_tol);
            disagreements += got != joint ? 1 : 0;
            inside += joint ? 1 : 0;
        }
    }
    return {disagreements == 0, std::to_string(disagreements) + " disagreements over " +
                                    std::to_string(oracle_pairs * oracle_queries) + " queries (" +
                                    std::to_string(inside) + " inside)"};
}

/// Largest row violation of z (positive means violated).
double max_violation(const HPolytope& P, const Eigen::VectorXd& z)
{
    double v = -std::numeric_limits<double>::infinity();
    if (P.num_halfspaces() > 0)
        v = std::max(v, (P.H() * z - P.k()).maxCoeff());
    if (P.num_equalities() > 0)
        v = std::max(v, (P.Aeq() * z - P.beq()).cwiseAbs().maxCoeff());
    return v;
}

/// Range of z_j the rows allow once the other coordinates are fixed.
Interval allowed_range(const HPolytope& P, Eigen::VectorXd z, Eigen::Index j)
{
    z(j) = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < P.num_halfspaces(); ++r)
    {
        const double h = P.H()(r, j);
        const double rest = P.k()(r) - P.H().row(r).dot(z);
        if (h > 0)
            hi = std::min(hi, rest / h);
        else if (h < 0)
            lo = std::max(lo, rest / h);
    }
    return {lo, std::max(lo, hi)};
}

struct GridCheck
{
    std::size_t points = 0;
    std::size_t violations = 0;
    double worst = -std::numeric_limits<double>::infinity();

    void add(const HPolytope& P, double a, double b, double j)
    {
        const double v = max_violation(P, Eigen::Vector3d(a, b, j));
        worst = std::max(worst, v);
        ++points;
        violations += v > relax_slack * (1.0 + std::abs(j)) ? 1 : 0;
    }
};

void univariate_grid(GridCheck& c, const HPolytope& P, const Interval& Za, const std::function<double(double)>& f)
{
    for (int i = 0; i < grid_points; ++i)
    {
        const double a = Za.lo() + Za.width() * i / (grid_points - 1.0);
        c.add(P, a, 0.0, f(a));
    }
}

void bivariate_grid(GridCheck& c, const HPolytope& P, const Interval& Za, const Interval& Zb,
                    const std::function<double(double, double)>& f)
{
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(grid_points))));
    for (int i = 0; i < side; ++i)
    {
        for (int l = 0; l < side; ++l)
        {
            const double a = Za.lo() + Za.width() * i / (side - 1.0);
            const double b = Zb.lo() + Zb.width() * l / (side - 1.0);
            c.add(P, a, b, f(a, b));
        }
    }
}

Outcome criterion8()
{
    constexpr Eigen::Index nz = 3;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> centre(-3.0, 3.0);
    std::uniform_real_distribution<double> width(0.1, 3.0);
    const auto random_interval = [&]() {
        const double a = centre(rng);
        return Interval(a, a + width(rng));
    };
    GridCheck grid;
    double corner_error = 0.0;
    for (int trial = 0; trial < 20; ++trial)
    {
        const Interval Za = random_interval();
        const Interval Zb = random_interval();
        bivariate_grid(grid, relax_sum(nz, 0, 1, 2), Za, Zb, [](double a, double b) { return a + b; });
        bivariate_grid(grid, relax_sub(nz, 0, 1, 2), Za, Zb, [](double a, double b) { return a - b; });
        const double p = centre(rng);
        const double q = centre(rng);
        univariate_grid(grid, relax_affine(nz, 0, 2, p, q), Za, [p, q](double a) { return p * a + q; });
        univariate_grid(grid, relax_constant(nz, 2, q), Za, [q](double) { return q; });

        const HPolytope M = relax_mul(nz, 0, 1, 2, Za, Zb);
        bivariate_grid(grid, M, Za, Zb, [](double a, double b) { return a * b; });
        for (double a : {Za.lo(), Za.hi()})
        {
            for (double b : {Zb.lo(), Zb.hi()})
            {
                const Interval r = allowed_range(M, Eigen::Vector3d(a, b, 0.0), 2);
                const double scale = 1.0 + std::abs(a * b);
                corner_error = std::max({corner_error, std::abs(r.lo() - a * b) / scale,
                                         std::abs(r.hi() - a * b) / scale});
            }
        }

        const Interval Zpos(0.2 + width(rng), 4.0 + width(rng));
        const Interval Zneg(-Zpos.hi(), -Zpos.lo());
        for (const Interval& Zd : {Zpos, Zneg})
            bivariate_grid(grid, relax_div(nz, 0, 1, 2, Za, Zd), Za, Zd, [](double a, double b) { return a / b; });
        const Interval Ze(Za.lo() / 2, Za.hi() / 2);
        univariate_grid(grid, relax_exp(nz, 0, 2, Ze), Ze, [](double a) { return std::exp(a); });
        const Interval Zl(0.01 + width(rng) / 3, 5.0 + width(rng) * 10);
        univariate_grid(grid, relax_log(nz, 0, 2, Zl), Zl, [](double a) { return std::log(a); });
        for (int k : {2, 4, 6})
            univariate_grid(grid, relax_even_pow(nz, 0, 2, k, Za), Za, [k](double a) { return std::pow(a, k); });
        for (int k : {3, 5, 7})
            univariate_grid(grid, relax_odd_pow(nz, 0, 2, k, Za), Za, [k](double a) { return std::pow(a, k); });
    }
    const bool pass = grid.violations == 0 && corner_error <= corner_tol;
    return {pass, std::to_string(grid.violations) + "/" + std::to_string(grid.points) +
                      " grid violations (worst " + fmt(grid.worst) + "), McCormick corner error " +
                      fmt(corner_error)};
}

Outcome criterion9()
{
    std::mt19937_64 rng(9);
    std::size_t misses = 0;
    std::size_t checks = 0;
    double worst = 0.0;
    for (const ReachProblem& p : {example1(1.0, 2), example2(50)})
    {
        const IntervalVector X = interval_hull(p.X0);
        const IntervalMatrix J = eval_interval_jacobian(p.dynamics, X);
        for (int i = 0; i < jacobian_points; ++i)
        {
            Eigen::VectorXd x(p.n_x);
            for (Eigen::Index d = 0; d < p.n_x; ++d)
            {
                const Interval& h = X[static_cast<std::size_t>(d)];
                // interior points keep the stencil inside the box
                std::uniform_real_distribution<double> u(h.lo() + fd_step, h.hi() - fd_step);
                x(d) = u(rng);
            }
            for (Eigen::Index d = 0; d < p.n_x; ++d)
            {
                Eigen::VectorXd xp = x;
                Eigen::VectorXd xm = x;
                xp(d) += fd_step;
                xm(d) -= fd_step;
                const Eigen::VectorXd fd = (eval_real(p.dynamics, xp) - eval_real(p.dynamics, xm)) / (2 * fd_step);
                for (Eigen::Index o = 0; o < fd.size(); ++o)
                {
                    const Interval& Jo = J(static_cast<std::size_t>(o), static_cast<std::size_t>(d));
                    const double excess = std::max(Jo.lo() - fd(o), fd(o) - Jo.hi());
                    worst = std::max(worst, excess);
                    misses += excess > jacobian_tol ? 1 : 0;
                    ++checks;
                }
            }
        }
    }
    return {misses == 0, std::to_string(misses) + "/" + std::to_string(checks) + " entries outside (worst excess " +
                             fmt(worst) + ")"};
}

Outcome criterion10()
{
    std::mt19937_64 rng(10);
    std::size_t violations = 0;
    std::size_t reduced = 0;
    for (int trial = 0; trial < reduce_sets; ++trial)
    {
        const Eigen::Index n = 2 + trial % 3;
        const RandomCz r = random_cz(n, 10 + trial % 20, 2 + trial % 24, rng);
        const ConstrainedZonotope out = reduce(r.Z, reduce_max_gens, reduce_max_cons);
        if (out.num_gens() > reduce_max_gens || out.num_cons() > reduce_max_cons)
            return {false, "limits exceeded on set " + std::to_string(trial)};
        reduced += (r.Z.num_gens() > reduce_max_gens || r.Z.num_cons() > reduce_max_cons) ? 1 : 0;
        for (const Eigen::VectorXd& x : sample_members(r, reduce_members, rng))
            violations += contains_point(out, x, membership_tol) ? 0 : 1;
    }
    return {violations == 0, std::to_string(violations) + " violations over " +
                                 std::to_string(reduce_sets * reduce_members) + " members (" +
                                 std::to_string(reduced) + " sets needed reduction)"};
}

} // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto t0 = Clock::now();
        Outcome o;
        try
        {
            o = criteria[i]();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %zu: %s  %s  [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
