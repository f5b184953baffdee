// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>

#include "czreach/errors.hpp"
#include "czreach/sets.hpp"

namespace czreach
{

namespace
{

constexpr double zero_tol = 1e-14;

// eliminations whose dropped bound is implied to this precision count as exact
constexpr double exact_tol = 1e-9;

// relative pivot threshold below which a constraint row counts as dependent
constexpr double rank_tol = 1e-10;

Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& M, Eigen::Index row, Eigen::Index col)
{
    const Eigen::Index r = row >= 0 ? M.rows() - 1 : M.rows();
    const Eigen::Index c = col >= 0 ? M.cols() - 1 : M.cols();
    Eigen::MatrixXd out(r, c);
    for (Eigen::Index i = 0, oi = 0; i < M.rows(); ++i)
    {
        if (i == row)
            continue;
        for (Eigen::Index j = 0, oj = 0; j < M.cols(); ++j)
        {
            if (j == col)
                continue;
            out(oi, oj++) = M(i, j);
        }
        ++oi;
    }
    return out;
}

Eigen::VectorXd drop_entry(const Eigen::VectorXd& v, Eigen::Index idx)
{
    Eigen::VectorXd out(v.size() - 1);
    for (Eigen::Index i = 0, o = 0; i < v.size(); ++i)
    {
        if (i != idx)
            out(o++) = v(i);
    }
    return out;
}

/**
 * Keeps a maximal linearly independent subset of the constraint rows. The
 * dropped rows are implied when A xi = b is consistent, so the set is
 * unchanged; otherwise the result can only grow.
 */
ConstrainedZonotope drop_dependent_rows(const ConstrainedZonotope& Z)
{
    if (Z.num_cons() <= 1)
        return Z;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z.A().transpose());
    qr.setThreshold(rank_tol);
    const Eigen::Index rank = qr.rank();
    if (rank == Z.num_cons())
        return Z;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < rank; ++i)
        rows.push_back(qr.colsPermutation().indices()(i));
    std::sort(rows.begin(), rows.end());
    Eigen::MatrixXd A(rank, Z.num_gens());
    Eigen::VectorXd b(rank);
    for (Eigen::Index i = 0; i < rank; ++i)
    {
        A.row(i) = Z.A().row(rows[static_cast<std::size_t>(i)]);
        b(i) = Z.b()(rows[static_cast<std::size_t>(i)]);
    }
    return {Z.G(), Z.c(), std::move(A), std::move(b)};
}

/**
 * Exact change of factor coordinates mapping the enclosure E of B_inf(A, b)
 * onto the unit box, followed by scaling every constraint row to unit
 * infinity norm. Returns Z itself when E is empty.
 */
ConstrainedZonotope rescale(const ConstrainedZonotope& Z, const IntervalVector& E)
{
    if (std::any_of(E.begin(), E.end(), [](const Interval& e) { return e.is_empty(); }))
        return Z;
    const Eigen::Index ng = Z.num_gens();
    Eigen::VectorXd m(ng);
    Eigen::VectorXd r(ng);
    for (Eigen::Index j = 0; j < ng; ++j)
    {
        const Interval& e = E[static_cast<std::size_t>(j)];
        m(j) = e.mid();
        r(j) = e.rad();
    }
    Eigen::MatrixXd G = Z.G() * r.asDiagonal();
    Eigen::VectorXd c = Z.c() + Z.G() * m;
    Eigen::MatrixXd A = Z.A() * r.asDiagonal();
    Eigen::VectorXd b = Z.b() - Z.A() * m;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
    {
        const double s = A.row(i).cwiseAbs().maxCoeff();
        if (s > zero_tol)
        {
            A.row(i) /= s;
            b(i) /= s;
        }
    }
    return {std::move(G), std::move(c), std::move(A), std::move(b)};
}

/// Exact factor bounds over B_inf(A, b) by 2 n_g LPs, widened by the LP tolerance.
IntervalVector factor_bounds_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
    const Eigen::Index ng = A.cols();
    IntervalVector E(static_cast<std::size_t>(ng), Interval::unit());
    for (Eigen::Index j = 0; j < ng; ++j)
    {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(ng);
        d(j) = 1.0;
        const lp::LpOutcome lo = lp::solve(lp::LinearProgram::unit_box(d, A, b));
        if (lo.status == lp::LpStatus::Infeasible)
            return IntervalVector(static_cast<std::size_t>(ng), Interval::empty());
        const lp::LpOutcome hi = lp::solve(lp::LinearProgram::unit_box(-d, A, b));
        if (!lo.optimal() || !hi.optimal())
            continue;
        const double l = std::max(-1.0, lo.value - 1e-8);
        const double u = std::min(1.0, -hi.value + 1e-8);
        if (l < u)
            E[static_cast<std::size_t>(j)] = Interval(l, u);
    }
    return E;
}

struct Candidate
{
    Eigen::Index row = -1;
    Eigen::Index col = -1;
    double cost = std::numeric_limits<double>::infinity();
    double quality = 0.0;
};

// candidates whose cost is below exact_tol compare by pivot quality only
bool better(const Candidate& x, const Candidate& y)
{
    const bool xe = x.cost <= exact_tol;
    const bool ye = y.cost <= exact_tol;
    if (xe && ye)
        return x.quality > y.quality;
    if (x.cost != y.cost)
        return x.cost < y.cost;
    return x.quality > y.quality;
}

/**
 * All admissible (constraint, factor) pivots ordered from least to most
 * lossy. The cost of a pivot is how far the range of the factor implied by
 * its constraint leaves [-1, 1] on the factor enclosure, weighted by the
 * lifted generator norm. A row of zeros is returned alone with col = -1.
 */
std::vector<Candidate> rank_eliminations(const ConstrainedZonotope& Z)
{
    const Eigen::MatrixXd& A = Z.A();
    const Eigen::VectorXd& b = Z.b();
    const Eigen::Index nc = A.rows();
    const Eigen::Index ng = A.cols();

    const IntervalVector E = factor_enclosure(A, b);
    const bool infeasible = std::any_of(E.begin(), E.end(), [](const Interval& e) { return e.is_empty(); });

    Eigen::VectorXd weight(ng);
    for (Eigen::Index j = 0; j < ng; ++j)
        weight(j) = Z.G().col(j).norm() + A.col(j).norm();

    std::vector<Candidate> out;
    for (Eigen::Index i = 0; i < nc; ++i)
    {
        const double row_max = A.row(i).cwiseAbs().maxCoeff();
        if (row_max <= zero_tol)
        {
            // 0 = b_i: either redundant or the set is empty; dropping is sound
            return {Candidate{i, -1, 0.0, 1.0}};
        }
        for (Eigen::Index j = 0; j < ng; ++j)
        {
            const double aij = A(i, j);
            if (std::abs(aij) <= 1e-10 * row_max)
                continue;
            double excess = 0.0;
            if (!infeasible)
            {
                Interval rest(0.0);
                for (Eigen::Index k = 0; k < ng; ++k)
                {
                    if (k != j && A(i, k) != 0.0)
                        rest = rest + A(i, k) * E[static_cast<std::size_t>(k)];
                }
                const Interval range = iv_scale(iv_shift(-rest, b(i)), 1.0 / aij);
                excess = std::max({0.0, range.hi() - 1.0, -1.0 - range.lo()});
            }
            double cost = excess * weight(j);
            if (!std::isfinite(cost))
                cost = std::numeric_limits<double>::infinity();
            out.push_back(Candidate{i, j, cost, std::abs(aij) / row_max});
        }
    }
    std::stable_sort(out.begin(), out.end(), better);
    return out;
}

/// Output directions used to compare candidate reductions: the axes, and for n <= 3 the diagonals.
std::vector<Eigen::VectorXd> score_directions(Eigen::Index n)
{
    std::vector<Eigen::VectorXd> dirs;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        dirs.push_back(Eigen::VectorXd::Unit(n, i));
        dirs.push_back(-Eigen::VectorXd::Unit(n, i));
    }
    if (n <= 3)
    {
        for (Eigen::Index i = 0; i < n; ++i)
        {
            for (Eigen::Index k = i + 1; k < n; ++k)
            {
                for (double s : {1.0, -1.0})
                {
                    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
                    d(i) = M_SQRT1_2;
                    d(k) = s * M_SQRT1_2;
                    dirs.push_back(d);
                    dirs.push_back(-d);
                }
            }
        }
    }
    return dirs;
}

/// Sum of support values of Z over the given directions; 0 for an empty set.
double support_score(const ConstrainedZonotope& Z, const std::vector<Eigen::VectorXd>& dirs)
{
    double total = 0.0;
    for (const Eigen::VectorXd& d : dirs)
    {
        const Eigen::VectorXd obj = -(Z.G().transpose() * d);
        const lp::LpOutcome r = lp::solve(lp::LinearProgram::unit_box(obj, Z.A(), Z.b()));
        if (r.status == lp::LpStatus::Infeasible)
            return 0.0;
        if (!r.optimal())
            return std::numeric_limits<double>::infinity();
        total += d.dot(Z.c()) - r.value;
    }
    return total;
}

ConstrainedZonotope apply_elimination(const ConstrainedZonotope& Z, const Candidate& cand)
{
    if (cand.col < 0)
    {
        // zero row
        return {Z.G(), Z.c(), drop_row_col(Z.A(), cand.row, -1), drop_entry(Z.b(), cand.row)};
    }
    const Eigen::Index i = cand.row;
    const Eigen::Index j = cand.col;
    const double aij = Z.A()(i, j);

    // xi_j = (b_i - sum_{k != j} A_ik xi_k) / a_ij, substituted everywhere
    const Eigen::RowVectorXd ri = Z.A().row(i) / aij;
    const double bi = Z.b()(i) / aij;

    Eigen::MatrixXd G = Z.G() - Z.G().col(j) * ri;
    Eigen::VectorXd c = Z.c() + Z.G().col(j) * bi;
    Eigen::MatrixXd A = Z.A() - Z.A().col(j) * ri;
    Eigen::VectorXd b = Z.b() - Z.A().col(j) * bi;

    return {drop_row_col(G, -1, j), std::move(c), drop_row_col(A, i, j), drop_entry(b, i)};
}

/**
 * Next pivot to eliminate. Exact pivots are taken directly; otherwise the
 * shortlist of the cheapest pivots is compared by the support score of the
 * set each of them produces.
 */
Candidate choose_elimination(const ConstrainedZonotope& Z)
{
    constexpr std::size_t shortlist = 8;
    const std::vector<Candidate> ranked = rank_eliminations(Z);
    if (ranked.empty())
        throw NumericalFailure("reduce: no admissible pivot for constraint elimination");
    if (ranked.front().col < 0 || ranked.front().cost <= exact_tol || ranked.size() == 1)
        return ranked.front();

    const std::vector<Eigen::VectorXd> dirs = score_directions(Z.dim());
    Candidate best = ranked.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::min(shortlist, ranked.size()); ++r)
    {
        const double score = support_score(apply_elimination(Z, ranked[r]), dirs);
        if (score < best_score - 1e-12 * (1.0 + std::abs(best_score)))
        {
            best_score = score;
            best = ranked[r];
        }
    }
    return best;
}

// Girard reduction of the lifted zonotope ([G; A], [c; -b]) down to max_gens.
ConstrainedZonotope lifted_girard(const ConstrainedZonotope& Z, Eigen::Index max_gens)
{
    const Eigen::Index n = Z.dim();
    const Eigen::Index nc = Z.num_cons();
    const Eigen::Index ng = Z.num_gens();
    const Eigen::Index d = n + nc;
    if (ng <= max_gens)
        return Z;
    if (max_gens < d)
        throw std::invalid_argument("lifted_girard: budget smaller than lifted dimension");

    Eigen::MatrixXd L(d, ng);
    L << Z.G(), Z.A();

    std::vector<double> score(static_cast<std::size_t>(ng));
    for (Eigen::Index j = 0; j < ng; ++j)
        score[static_cast<std::size_t>(j)] = L.col(j).lpNorm<1>() - L.col(j).lpNorm<Eigen::Infinity>();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(ng));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b)
                     { return score[static_cast<std::size_t>(a)] < score[static_cast<std::size_t>(b)]; });

    const Eigen::Index removed = std::min(ng, ng - max_gens + d);
    Eigen::VectorXd box = Eigen::VectorXd::Zero(d);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index r = 0; r < ng; ++r)
    {
        const Eigen::Index j = order[static_cast<std::size_t>(r)];
        if (r < removed)
            box += L.col(j).cwiseAbs();
        else
            kept.push_back(j);
    }
    std::sort(kept.begin(), kept.end());

    Eigen::Index nbox = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        nbox += box(i) > zero_tol ? 1 : 0;

    Eigen::MatrixXd Lr = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(kept.size()) + nbox);
    Eigen::Index col = 0;
    for (Eigen::Index j : kept)
        Lr.col(col++) = L.col(j);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        if (box(i) > zero_tol)
            Lr(i, col++) = box(i);
    }

    return {Lr.topRows(n), Z.c(), Lr.bottomRows(nc), Z.b()};
}

/// Unit directions spread over the half circle (n = 2) or the pairwise diagonals (n >= 3), axes excluded.
std::vector<Eigen::VectorXd> slab_directions(Eigen::Index n, Eigen::Index count)
{
    std::vector<Eigen::VectorXd> dirs;
    if (count <= 0 || n < 2)
        return dirs;
    if (n == 2)
    {
        // an even number of angles keeps both axes on the grid
        const Eigen::Index total = (count + 2) % 2 == 0 ? count + 2 : count + 1;
        for (Eigen::Index k = 1; k < total && static_cast<Eigen::Index>(dirs.size()) < count; ++k)
        {
            if (2 * k == total)
                continue;
            const double t = M_PI * static_cast<double>(k) / static_cast<double>(total);
            Eigen::VectorXd d(2);
            d << std::cos(t), std::sin(t);
            dirs.push_back(d);
        }
        return dirs;
    }
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index k = i + 1; k < n; ++k)
        {
            for (double s : {1.0, -1.0})
            {
                if (static_cast<Eigen::Index>(dirs.size()) >= count)
                    return dirs;
                Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
                d(i) = M_SQRT1_2;
                d(k) = s * M_SQRT1_2;
                dirs.push_back(d);
            }
        }
    }
    return dirs;
}

/// Bounds of d'x over Z by two LPs, widened by the LP tolerance. Empty when Z is empty.
std::optional<Interval> support_interval(const ConstrainedZonotope& Z, const Eigen::VectorXd& d)
{
    const Eigen::VectorXd obj = Z.G().transpose() * d;
    const lp::LpOutcome lo = lp::solve(lp::LinearProgram::unit_box(obj, Z.A(), Z.b()));
    const lp::LpOutcome hi = lp::solve(lp::LinearProgram::unit_box(-obj, Z.A(), Z.b()));
    if (!lo.optimal() || !hi.optimal())
        return std::nullopt;
    const double offset = d.dot(Z.c());
    const double l = offset + lo.value;
    const double u = offset - hi.value;
    const double pad = 1e-9 * (1.0 + std::max(std::abs(l), std::abs(u)));
    return Interval(std::min(l, u) - pad, std::max(l, u) + pad);
}

/**
 * Outer approximation of Z by its interval hull cut with slabs
 * lo <= d'x <= hi along extra directions, using at most max_gens generators
 * and max_cons constraints. Empty optional when Z is empty or an LP fails.
 */
std::optional<ConstrainedZonotope> support_template(const ConstrainedZonotope& Z, Eigen::Index max_gens,
                                                    Eigen::Index max_cons)
{
    const Eigen::Index n = Z.dim();
    IntervalVector box;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const auto r = support_interval(Z, Eigen::VectorXd::Unit(n, i));
        if (!r)
            return std::nullopt;
        box.push_back(*r);
    }
    const std::vector<Eigen::VectorXd> dirs = slab_directions(n, std::min(max_gens - n, max_cons));
    const auto m = static_cast<Eigen::Index>(dirs.size());
    Eigen::MatrixXd H(m, n);
    Eigen::VectorXd k(m);
    Eigen::VectorXd sigma(m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        const auto r = support_interval(Z, dirs[static_cast<std::size_t>(i)]);
        if (!r)
            return std::nullopt;
        H.row(i) = dirs[static_cast<std::size_t>(i)].transpose();
        k(i) = r->hi();
        sigma(i) = r->lo();
    }
    const HPolytope P(H, k, Eigen::MatrixXd(0, n), Eigen::VectorXd(0));
    return intersect_hpoly(cz_from_interval(box), P, sigma);
}

/// Sum of support values over the axes, the diagonals and (n = 2) a dense fan.
double fan_score(const ConstrainedZonotope& Z)
{
    const Eigen::Index n = Z.dim();
    std::vector<Eigen::VectorXd> dirs = score_directions(n);
    if (n == 2)
    {
        const std::vector<Eigen::VectorXd> fan = slab_directions(2, 30);
        for (const Eigen::VectorXd& d : fan)
        {
            dirs.push_back(d);
            dirs.push_back(-d);
        }
    }
    return support_score(Z, dirs);
}

/// Smaller interval hull first, then the fan score.
bool tighter(const ConstrainedZonotope& X, const ConstrainedZonotope& Y)
{
    const std::vector<Eigen::VectorXd> axes = score_directions(X.dim());
    const std::vector<Eigen::VectorXd> hull_dirs(axes.begin(), axes.begin() + 2 * X.dim());
    const double hx = support_score(X, hull_dirs);
    const double hy = support_score(Y, hull_dirs);
    if (std::abs(hx - hy) > 1e-9 * (1.0 + std::abs(hy)))
        return hx < hy;
    return fan_score(X) < fan_score(Y);
}

} // namespace

IntervalVector factor_enclosure(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int sweeps)
{
    const Eigen::Index nc = A.rows();
    const Eigen::Index ng = A.cols();
    IntervalVector E(static_cast<std::size_t>(ng), Interval::unit());

    for (int s = 0; s < sweeps; ++s)
    {
        double shrink = 0.0;
        for (Eigen::Index i = 0; i < nc; ++i)
        {
            for (Eigen::Index j = 0; j < ng; ++j)
            {
                const double aij = A(i, j);
                if (std::abs(aij) <= zero_tol)
                    continue;
                Interval rest(0.0);
                for (Eigen::Index k = 0; k < ng; ++k)
                {
                    if (k != j && A(i, k) != 0.0)
                        rest = rest + A(i, k) * E[static_cast<std::size_t>(k)];
                }
                const Interval implied = iv_scale(iv_shift(-rest, b(i)), 1.0 / aij);
                Interval& e = E[static_cast<std::size_t>(j)];
                const Interval next = iv_intersect(e, iv_inflate(implied, 1e-10 * (1.0 + implied.mag())));
                if (next.is_empty())
                {
                    // B_inf(A, b) is empty
                    for (auto& v : E)
                        v = Interval::empty();
                    return E;
                }
                shrink = std::max(shrink, e.width() - next.width());
                e = next;
            }
        }
        if (shrink < 1e-12)
            break;
    }
    return E;
}

ConstrainedZonotope prune_zeros(const ConstrainedZonotope& Z)
{
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < Z.num_gens(); ++j)
    {
        const double gmax = Z.dim() > 0 ? Z.G().col(j).cwiseAbs().maxCoeff() : 0.0;
        const double amax = Z.num_cons() > 0 ? Z.A().col(j).cwiseAbs().maxCoeff() : 0.0;
        if (gmax > zero_tol || amax > zero_tol)
            cols.push_back(j);
    }
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < Z.num_cons(); ++i)
    {
        double amax = 0.0;
        for (Eigen::Index j : cols)
            amax = std::max(amax, std::abs(Z.A()(i, j)));
        if (amax > zero_tol || std::abs(Z.b()(i)) > 1e-12)
            rows.push_back(i);
    }
    if (static_cast<Eigen::Index>(cols.size()) == Z.num_gens() &&
        static_cast<Eigen::Index>(rows.size()) == Z.num_cons())
        return Z;

    const auto ng = static_cast<Eigen::Index>(cols.size());
    const auto nc = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd G(Z.dim(), ng);
    Eigen::MatrixXd A(nc, ng);
    Eigen::VectorXd b(nc);
    for (Eigen::Index j = 0; j < ng; ++j)
    {
        G.col(j) = Z.G().col(cols[static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i < nc; ++i)
            A(i, j) = Z.A()(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index i = 0; i < nc; ++i)
        b(i) = Z.b()(rows[static_cast<std::size_t>(i)]);
    return {std::move(G), Z.c(), std::move(A), std::move(b)};
}

ConstrainedZonotope eliminate_one_constraint(const ConstrainedZonotope& Z)
{
    if (Z.num_cons() == 0)
        return Z;
    const Candidate cand = choose_elimination(Z);
    if (cand.row < 0)
        throw NumericalFailure("eliminate_one_constraint: no admissible pivot");
    return apply_elimination(Z, cand);
}

ConstrainedZonotope girard_reduce(const ConstrainedZonotope& Z, Eigen::Index max_gens)
{
    if (Z.num_cons() > 0)
        throw std::invalid_argument("girard_reduce: expects an unconstrained zonotope");
    if (max_gens < Z.dim())
        throw std::invalid_argument("girard_reduce: max_gens must be at least the dimension");
    return prune_zeros(lifted_girard(Z, max_gens));
}

ConstrainedZonotope reduce(const ConstrainedZonotope& Z, Eigen::Index max_gens, Eigen::Index max_cons,
                           ReduceStats* stats)
{
    if (max_gens < Z.dim())
        throw std::invalid_argument("reduce: max_gens must be at least the dimension");
    if (max_cons < 0)
        throw std::invalid_argument("reduce: max_cons must be non-negative");

    ReduceStats local;
    ReduceStats& st = stats ? *stats : local;

    if (Z.num_gens() <= max_gens && Z.num_cons() <= max_cons)
        return Z;

    const auto normalize = [](const ConstrainedZonotope& X)
    {
        if (X.num_cons() == 0)
            return prune_zeros(X);
        const ConstrainedZonotope Y = drop_dependent_rows(X);
        return prune_zeros(rescale(Y, factor_bounds_lp(Y.A(), Y.b())));
    };

    ConstrainedZonotope out = normalize(Z);
    st.pruned_generators += static_cast<int>(Z.num_gens() - out.num_gens());
    st.pruned_constraints += static_cast<int>(Z.num_cons() - out.num_cons());

    auto eliminate = [&](const Candidate& cand)
    {
        const ConstrainedZonotope elim = apply_elimination(out, cand);
        const ConstrainedZonotope next = normalize(elim);
        ++st.eliminated_constraints;
        st.pruned_generators += static_cast<int>(out.num_gens() - next.num_gens() - (cand.col >= 0 ? 1 : 0));
        st.pruned_constraints += static_cast<int>(out.num_cons() - next.num_cons() - 1);
        out = next;
    };

    while (out.num_cons() > max_cons)
        eliminate(choose_elimination(out));

    while (out.num_gens() > max_gens)
    {
        if (out.num_cons() == 0)
        {
            const Eigen::Index before = out.num_gens();
            out = prune_zeros(lifted_girard(out, max_gens));
            st.girard_removed += static_cast<int>(before - out.num_gens());
            break;
        }
        const Candidate cand = choose_elimination(out);
        const Eigen::Index lifted = out.dim() + out.num_cons();
        // lifted order reduction only while it leaves at least half the budget
        // for original generators; otherwise drop a constraint first
        if (cand.cost > exact_tol && 2 * lifted <= max_gens)
        {
            const Eigen::Index before = out.num_gens();
            out = prune_zeros(lifted_girard(out, max_gens));
            st.girard_removed += static_cast<int>(before - out.num_gens());
            break;
        }
        eliminate(cand);
    }

    if (st.eliminated_constraints == 0 && st.girard_removed == 0)
        return out;
    const std::optional<ConstrainedZonotope> alt = support_template(Z, max_gens, max_cons);
    if (alt && tighter(*alt, out))
    {
        st.used_template = true;
        return *alt;
    }
    return out;
}

} // namespace czreach
