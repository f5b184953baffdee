// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/relax.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "czreach/errors.hpp"

namespace czreach
{

namespace
{

constexpr double degenerate_width = 1e-12;
constexpr double narrow_width = 1e-8;

Eigen::Index col(std::size_t i) { return static_cast<Eigen::Index>(i); }

/// Accumulates sparse rows and produces a dense HPolytope.
class RowSet
{
    public:
        explicit RowSet(Eigen::Index n) : n_(n) {}

        Eigen::VectorXd& inequality(double rhs)
        {
            H_.emplace_back(Eigen::VectorXd::Zero(n_));
            k_.push_back(rhs);
            return H_.back();
        }

        Eigen::VectorXd& equality(double rhs)
        {
            A_.emplace_back(Eigen::VectorXd::Zero(n_));
            b_.push_back(rhs);
            return A_.back();
        }

        /// z_j >= slope * z_a + intercept.
        void lower_line(std::size_t a, std::size_t j, double slope, double intercept)
        {
            Eigen::VectorXd& r = inequality(-intercept);
            r(col(a)) += slope;
            r(col(j)) -= 1.0;
        }

        /// z_j <= slope * z_a + intercept.
        void upper_line(std::size_t a, std::size_t j, double slope, double intercept)
        {
            Eigen::VectorXd& r = inequality(intercept);
            r(col(a)) -= slope;
            r(col(j)) += 1.0;
        }

        HPolytope finish() const
        {
            Eigen::MatrixXd H(static_cast<Eigen::Index>(H_.size()), n_);
            Eigen::VectorXd k(static_cast<Eigen::Index>(k_.size()));
            for (std::size_t i = 0; i < H_.size(); ++i)
            {
                H.row(col(i)) = H_[i].transpose();
                k(col(i)) = k_[i];
            }
            Eigen::MatrixXd A(static_cast<Eigen::Index>(A_.size()), n_);
            Eigen::VectorXd b(static_cast<Eigen::Index>(b_.size()));
            for (std::size_t i = 0; i < A_.size(); ++i)
            {
                A.row(col(i)) = A_[i].transpose();
                b(col(i)) = b_[i];
            }
            return {std::move(H), std::move(k), std::move(A), std::move(b)};
        }

    private:
        Eigen::Index n_;
        std::vector<Eigen::VectorXd> H_;
        std::vector<double> k_;
        std::vector<Eigen::VectorXd> A_;
        std::vector<double> b_;
};

void check_indices(Eigen::Index n_z, std::initializer_list<std::size_t> idx)
{
    for (std::size_t i : idx)
    {
        if (col(i) >= n_z)
            throw DimensionMismatch("factor index " + std::to_string(i) + " out of range for n_z = " +
                                    std::to_string(n_z));
    }
}

/// McCormick rows for w = x y over X x Y, with coefficients accumulated when x and y coincide.
void mccormick(RowSet& rows, std::size_t w, std::size_t x, std::size_t y, const Interval& X, const Interval& Y)
{
    const double xl = X.lo();
    const double xu = X.hi();
    const double yl = Y.lo();
    const double yu = Y.hi();
    {
        // w >= yl x + xl y - xl yl
        Eigen::VectorXd& r = rows.inequality(xl * yl);
        r(col(w)) -= 1.0;
        r(col(x)) += yl;
        r(col(y)) += xl;
    }
    {
        // w >= yu x + xu y - xu yu
        Eigen::VectorXd& r = rows.inequality(xu * yu);
        r(col(w)) -= 1.0;
        r(col(x)) += yu;
        r(col(y)) += xu;
    }
    {
        // w <= yu x + xl y - xl yu
        Eigen::VectorXd& r = rows.inequality(-xl * yu);
        r(col(w)) += 1.0;
        r(col(x)) -= yu;
        r(col(y)) -= xl;
    }
    {
        // w <= yl x + xu y - xu yl
        Eigen::VectorXd& r = rows.inequality(-xu * yl);
        r(col(w)) += 1.0;
        r(col(x)) -= yl;
        r(col(y)) -= xu;
    }
}

struct Univariate
{
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// Tangent line of f at t as (slope, intercept).
std::pair<double, double> tangent(const Univariate& u, double t)
{
    const double s = u.df(t);
    return {s, u.f(t) - s * t};
}

/// Secant line of f through lo and hi as (slope, intercept).
std::pair<double, double> secant(const Univariate& u, double lo, double hi)
{
    const double flo = u.f(lo);
    const double s = (u.f(hi) - flo) / (hi - lo);
    return {s, flo - s * lo};
}

/// Single equality for a degenerate interval: z_j = f(m) + f'(m) (z_a - m).
HPolytope degenerate(Eigen::Index n_z, std::size_t a, std::size_t j, const Univariate& u, double m)
{
    RowSet rows(n_z);
    const auto [s, c] = tangent(u, m);
    Eigen::VectorXd& r = rows.equality(c);
    r(col(j)) += 1.0;
    r(col(a)) -= s;
    return rows.finish();
}

/// Tangent rows on the convex side (lower) or concave side (upper), plus the opposite secant.
HPolytope tangents_and_secant(Eigen::Index n_z, std::size_t a, std::size_t j, const Univariate& u,
                              const Interval& Za, bool convex)
{
    if (Za.width() < degenerate_width)
        return degenerate(n_z, a, j, u, Za.mid());
    RowSet rows(n_z);
    std::vector<double> points{Za.lo()};
    if (Za.width() >= narrow_width)
        points.push_back(Za.mid());
    points.push_back(Za.hi());
    for (double t : points)
    {
        const auto [s, c] = tangent(u, t);
        if (convex)
            rows.lower_line(a, j, s, c);
        else
            rows.upper_line(a, j, s, c);
    }
    const auto [s, c] = secant(u, Za.lo(), Za.hi());
    if (convex)
        rows.upper_line(a, j, s, c);
    else
        rows.lower_line(a, j, s, c);
    return rows.finish();
}

Univariate power_fn(int q)
{
    return {[q](double x) { return std::pow(x, q); },
            [q](double x) { return static_cast<double>(q) * std::pow(x, q - 1); }};
}

} // namespace

HPolytope relax_sum(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j)
{
    check_indices(n_z, {a, b, j});
    RowSet rows(n_z);
    Eigen::VectorXd& r = rows.equality(0.0);
    r(col(a)) += 1.0;
    r(col(b)) += 1.0;
    r(col(j)) -= 1.0;
    return rows.finish();
}

HPolytope relax_sub(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j)
{
    check_indices(n_z, {a, b, j});
    RowSet rows(n_z);
    Eigen::VectorXd& r = rows.equality(0.0);
    r(col(a)) += 1.0;
    r(col(b)) -= 1.0;
    r(col(j)) -= 1.0;
    return rows.finish();
}

HPolytope relax_affine(Eigen::Index n_z, std::size_t a, std::size_t j, double p, double q)
{
    check_indices(n_z, {a, j});
    RowSet rows(n_z);
    Eigen::VectorXd& r = rows.equality(-q);
    r(col(a)) += p;
    r(col(j)) -= 1.0;
    return rows.finish();
}

HPolytope relax_constant(Eigen::Index n_z, std::size_t j, double value)
{
    check_indices(n_z, {j});
    RowSet rows(n_z);
    rows.equality(value)(col(j)) = 1.0;
    return rows.finish();
}

HPolytope relax_mul(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j, const Interval& Za,
                    const Interval& Zb)
{
    check_indices(n_z, {a, b, j});
    RowSet rows(n_z);
    mccormick(rows, j, a, b, Za, Zb);
    return rows.finish();
}

HPolytope relax_div(Eigen::Index n_z, std::size_t a, std::size_t b, std::size_t j, const Interval& Za,
                    const Interval& Zb)
{
    check_indices(n_z, {a, b, j});
    const Interval Zj = iv_div(Za, Zb);
    RowSet rows(n_z);
    mccormick(rows, a, b, j, Zb, Zj);
    return rows.finish();
}

HPolytope relax_exp(Eigen::Index n_z, std::size_t a, std::size_t j, const Interval& Za)
{
    check_indices(n_z, {a, j});
    const Univariate u{[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }};
    return tangents_and_secant(n_z, a, j, u, Za, true);
}

HPolytope relax_log(Eigen::Index n_z, std::size_t a, std::size_t j, const Interval& Za)
{
    check_indices(n_z, {a, j});
    if (!(Za.lo() > 0.0))
        throw DomainError("relax_log: interval must be strictly positive");
    const Univariate u{[](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }};
    return tangents_and_secant(n_z, a, j, u, Za, false);
}

HPolytope relax_even_pow(Eigen::Index n_z, std::size_t a, std::size_t j, int q, const Interval& Za)
{
    check_indices(n_z, {a, j});
    if (q < 2 || q % 2 != 0)
        throw std::invalid_argument("relax_even_pow: exponent must be even and at least 2");
    return tangents_and_secant(n_z, a, j, power_fn(q), Za, true);
}

double odd_power_tangency_ratio(int q)
{
    if (q < 3 || q % 2 == 0)
        throw std::invalid_argument("odd_power_tangency_ratio: exponent must be odd and at least 3");
    const double qd = q;
    auto g = [&](double r) { return (qd - 1.0) * std::pow(r, q) + qd * std::pow(r, q - 1) - 1.0; };
    auto dg = [&](double r) { return qd * (qd - 1.0) * (std::pow(r, q - 1) + std::pow(r, q - 2)); };

    // g(0) = -1 < 0 < g(1) = 2q - 2 and g is increasing on [0, 1].
    double lo = 0.0;
    double hi = 1.0;
    double r = 0.5;
    for (int it = 0; it < 50; ++it)
    {
        const double gr = g(r);
        if (std::abs(gr) < 1e-10)
            return r;
        if (gr < 0.0)
            lo = r;
        else
            hi = r;
        const double d = dg(r);
        double next = d > 0.0 ? r - gr / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        r = next;
    }
    if (std::abs(g(r)) < 1e-10)
        return r;
    throw NumericalFailure("odd_power_tangency_ratio: no convergence for q = " + std::to_string(q));
}

HPolytope relax_odd_pow(Eigen::Index n_z, std::size_t a, std::size_t j, int q, const Interval& Za)
{
    check_indices(n_z, {a, j});
    if (q < 3 || q % 2 == 0)
        throw std::invalid_argument("relax_odd_pow: exponent must be odd and at least 3");
    const Univariate u = power_fn(q);
    const double lb = Za.lo();
    const double ub = Za.hi();
    if (Za.width() < degenerate_width)
        return degenerate(n_z, a, j, u, Za.mid());
    if (lb >= 0.0)
        return tangents_and_secant(n_z, a, j, u, Za, true);
    if (ub <= 0.0)
        return tangents_and_secant(n_z, a, j, u, Za, false);

    RowSet rows(n_z);
    double rho = 0.0;
    try
    {
        rho = odd_power_tangency_ratio(q);
    }
    catch (const NumericalFailure&)
    {
        // Box bounds plus the endpoint tangents that stay valid on all of Za.
        rows.lower_line(a, j, 0.0, u.f(lb));
        rows.upper_line(a, j, 0.0, u.f(ub));
        const auto [su, cu] = tangent(u, lb);
        rows.upper_line(a, j, su, cu);
        const auto [sl, cl] = tangent(u, ub);
        rows.lower_line(a, j, sl, cl);
        return rows.finish();
    }

    const double r = -lb * rho;
    if (r <= ub)
    {
        const auto [s1, c1] = secant(u, lb, r);
        rows.lower_line(a, j, s1, c1);
        const auto [s2, c2] = tangent(u, ub);
        rows.lower_line(a, j, s2, c2);
    }
    else
    {
        const auto [s1, c1] = secant(u, lb, ub);
        rows.lower_line(a, j, s1, c1);
        rows.lower_line(a, j, 0.0, u.f(lb));
    }

    const double s = -ub * rho;
    if (s >= lb)
    {
        const auto [s1, c1] = secant(u, s, ub);
        rows.upper_line(a, j, s1, c1);
        const auto [s2, c2] = tangent(u, lb);
        rows.upper_line(a, j, s2, c2);
    }
    else
    {
        const auto [s1, c1] = secant(u, lb, ub);
        rows.upper_line(a, j, s1, c1);
        rows.upper_line(a, j, 0.0, u.f(ub));
    }
    return rows.finish();
}

HPolytope relax_factor(const FactorGraph& g, std::size_t j, const IntervalVector& Z)
{
    const auto n_z = static_cast<Eigen::Index>(g.size());
    if (Z.size() != g.size())
        throw DimensionMismatch("relax_factor: bounds must cover every factor");
    const FactorNode& node = g.node(j);
    if (std::holds_alternative<InputNode>(node))
        return HPolytope(n_z);
    if (const auto* c = std::get_if<ConstantNode>(&node))
        return relax_constant(n_z, j, c->value);
    if (const auto* af = std::get_if<AffineNode>(&node))
        return relax_affine(n_z, af->a, j, af->scale, af->offset);
    if (const auto* b = std::get_if<BinaryNode>(&node))
    {
        switch (b->op)
        {
            case BinaryOp::Add: return relax_sum(n_z, b->a, b->b, j);
            case BinaryOp::Sub: return relax_sub(n_z, b->a, b->b, j);
            case BinaryOp::Mul: return relax_mul(n_z, b->a, b->b, j, Z[b->a], Z[b->b]);
            case BinaryOp::Div: return relax_div(n_z, b->a, b->b, j, Z[b->a], Z[b->b]);
        }
    }
    const auto& u = std::get<UnivariateNode>(node);
    switch (u.fn)
    {
        case UnaryFn::Exp: return relax_exp(n_z, u.a, j, Z[u.a]);
        case UnaryFn::Log: return relax_log(n_z, u.a, j, Z[u.a]);
        case UnaryFn::PowInt:
            if (u.exponent < 0)
            {
                throw std::invalid_argument("relax_factor: negative powers must be written as divisions");
            }
            if (u.exponent == 1)
                return relax_affine(n_z, u.a, j, 1.0, 0.0);
            if (u.exponent % 2 == 0)
                return relax_even_pow(n_z, u.a, j, u.exponent, Z[u.a]);
            return relax_odd_pow(n_z, u.a, j, u.exponent, Z[u.a]);
    }
    throw std::logic_error("relax_factor: unhandled node kind");
}

LiftedPolytope build_lifted_polytope_from_bounds(const FactorGraph& g, const IntervalVector& Z)
{
    const auto n_z = static_cast<Eigen::Index>(g.size());
    std::vector<HPolytope> parts;
    Eigen::Index nh = 0;
    Eigen::Index ne = 0;
    for (std::size_t j = g.num_inputs(); j < g.size(); ++j)
    {
        try
        {
            parts.push_back(relax_factor(g, j, Z));
        }
        catch (const DivisionByZeroInterval& e)
        {
            throw DivisionByZeroInterval(e.what(), j);
        }
        catch (const DomainError& e)
        {
            throw DomainError(e.what(), j);
        }
        nh += parts.back().num_halfspaces();
        ne += parts.back().num_equalities();
    }
    Eigen::MatrixXd H(nh, n_z);
    Eigen::VectorXd k(nh);
    Eigen::MatrixXd A(ne, n_z);
    Eigen::VectorXd b(ne);
    Eigen::Index ih = 0;
    Eigen::Index ie = 0;
    for (const HPolytope& Q : parts)
    {
        H.middleRows(ih, Q.num_halfspaces()) = Q.H();
        k.segment(ih, Q.num_halfspaces()) = Q.k();
        ih += Q.num_halfspaces();
        A.middleRows(ie, Q.num_equalities()) = Q.Aeq();
        b.segment(ie, Q.num_equalities()) = Q.beq();
        ie += Q.num_equalities();
    }
    return {HPolytope(std::move(H), std::move(k), std::move(A), std::move(b)), Z};
}

LiftedPolytope build_lifted_polytope(const FactorGraph& g, const IntervalVector& X)
{
    return build_lifted_polytope_from_bounds(g, eval_interval(g, X));
}

RowCounts lifted_row_counts(const FactorGraph& g)
{
    RowCounts out;
    for (std::size_t j = g.num_inputs(); j < g.size(); ++j)
    {
        const FactorNode& node = g.node(j);
        if (std::holds_alternative<ConstantNode>(node) || std::holds_alternative<AffineNode>(node))
        {
            ++out.equalities;
        }
        else if (const auto* b = std::get_if<BinaryNode>(&node))
        {
            if (b->op == BinaryOp::Add || b->op == BinaryOp::Sub)
                ++out.equalities;
            else
                out.halfspaces += 4;
        }
        else if (const auto* u = std::get_if<UnivariateNode>(&node))
        {
            if (u->fn == UnaryFn::PowInt && u->exponent == 1)
                ++out.equalities;
            else
                out.halfspaces += 4;
        }
    }
    return out;
}

} // namespace czreach
