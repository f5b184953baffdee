// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/sets.hpp"

#include <cmath>
#include <utility>

#include "czreach/errors.hpp"

namespace czreach
{

ConstrainedZonotope::ConstrainedZonotope(Eigen::MatrixXd G, Eigen::VectorXd c)
    : G_(std::move(G)), c_(std::move(c)), A_(0, G_.cols()), b_(0)
{
    if (G_.rows() != c_.size())
        throw DimensionMismatch("ConstrainedZonotope: rows(G) != len(c)");
}

ConstrainedZonotope::ConstrainedZonotope(Eigen::MatrixXd G, Eigen::VectorXd c, Eigen::MatrixXd A, Eigen::VectorXd b)
    : G_(std::move(G)), c_(std::move(c)), A_(std::move(A)), b_(std::move(b))
{
    if (G_.rows() != c_.size())
        throw DimensionMismatch("ConstrainedZonotope: rows(G) != len(c)");
    if (A_.rows() == 0 && A_.cols() == 0)
        A_.resize(0, G_.cols());
    if (A_.cols() != G_.cols())
        throw DimensionMismatch("ConstrainedZonotope: cols(A) != cols(G)");
    if (A_.rows() != b_.size())
        throw DimensionMismatch("ConstrainedZonotope: rows(A) != len(b)");
}

Eigen::VectorXd ConstrainedZonotope::point(const Eigen::VectorXd& xi) const
{
    if (xi.size() != num_gens())
        throw DimensionMismatch("ConstrainedZonotope::point: factor vector has wrong length");
    return c_ + G_ * xi;
}

HPolytope::HPolytope(Eigen::Index n) : H_(0, n), k_(0), Aeq_(0, n), beq_(0)
{
}

HPolytope::HPolytope(Eigen::MatrixXd H, Eigen::VectorXd k, Eigen::MatrixXd Aeq, Eigen::VectorXd beq)
    : H_(std::move(H)), k_(std::move(k)), Aeq_(std::move(Aeq)), beq_(std::move(beq))
{
    if (H_.rows() == 0 && H_.cols() == 0)
        H_.resize(0, Aeq_.cols());
    if (Aeq_.rows() == 0 && Aeq_.cols() == 0)
        Aeq_.resize(0, H_.cols());
    if (H_.cols() != Aeq_.cols())
        throw DimensionMismatch("HPolytope: H and Aeq act on different dimensions");
    if (H_.rows() != k_.size() || Aeq_.rows() != beq_.size())
        throw DimensionMismatch("HPolytope: row counts and offsets differ");
}

bool HPolytope::contains(const Eigen::VectorXd& x, double tol) const
{
    if (x.size() != dim())
        throw DimensionMismatch("HPolytope::contains: point dimension mismatch");
    if (num_halfspaces() > 0 && ((H_ * x - k_).array() > tol).any())
        return false;
    if (num_equalities() > 0 && ((Aeq_ * x - beq_).array().abs() > tol).any())
        return false;
    return true;
}

ConstrainedZonotope cz_from_interval(const IntervalVector& x)
{
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Interval& v = x[static_cast<std::size_t>(i)];
        if (v.is_empty())
            throw EmptySet("cz_from_interval: empty interval component");
        G(i, i) = v.rad();
        c(i) = v.mid();
    }
    return {std::move(G), std::move(c)};
}

ConstrainedZonotope cartesian_product(const ConstrainedZonotope& Z, const ConstrainedZonotope& W)
{
    const Eigen::Index n = Z.dim() + W.dim();
    const Eigen::Index ng = Z.num_gens() + W.num_gens();
    const Eigen::Index nc = Z.num_cons() + W.num_cons();

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, ng);
    G.topLeftCorner(Z.dim(), Z.num_gens()) = Z.G();
    G.bottomRightCorner(W.dim(), W.num_gens()) = W.G();
    Eigen::VectorXd c(n);
    c << Z.c(), W.c();

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc, ng);
    A.topLeftCorner(Z.num_cons(), Z.num_gens()) = Z.A();
    A.bottomRightCorner(W.num_cons(), W.num_gens()) = W.A();
    Eigen::VectorXd b(nc);
    b << Z.b(), W.b();

    return {std::move(G), std::move(c), std::move(A), std::move(b)};
}

ConstrainedZonotope linear_image(const Eigen::MatrixXd& R, const ConstrainedZonotope& Z)
{
    if (R.cols() != Z.dim())
        throw DimensionMismatch("linear_image: cols(R) != dim(Z)");
    return {R * Z.G(), R * Z.c(), Z.A(), Z.b()};
}

ConstrainedZonotope minkowski_sum(const ConstrainedZonotope& Z, const ConstrainedZonotope& W)
{
    if (Z.dim() != W.dim())
        throw DimensionMismatch("minkowski_sum: operands have different dimensions");
    const Eigen::Index ng = Z.num_gens() + W.num_gens();
    const Eigen::Index nc = Z.num_cons() + W.num_cons();

    Eigen::MatrixXd G(Z.dim(), ng);
    G << Z.G(), W.G();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc, ng);
    A.topLeftCorner(Z.num_cons(), Z.num_gens()) = Z.A();
    A.bottomRightCorner(W.num_cons(), W.num_gens()) = W.A();
    Eigen::VectorXd b(nc);
    b << Z.b(), W.b();

    return {std::move(G), Z.c() + W.c(), std::move(A), std::move(b)};
}

ConstrainedZonotope generalized_intersection(const ConstrainedZonotope& Z, const ConstrainedZonotope& Y,
                                             const Eigen::MatrixXd& R)
{
    if (R.cols() != Z.dim() || R.rows() != Y.dim())
        throw DimensionMismatch("generalized_intersection: R must be dim(Y) x dim(Z)");
    const Eigen::Index ngz = Z.num_gens();
    const Eigen::Index ngy = Y.num_gens();
    const Eigen::Index nc = Z.num_cons() + Y.num_cons() + Y.dim();

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Z.dim(), ngz + ngy);
    G.leftCols(ngz) = Z.G();

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc, ngz + ngy);
    A.topLeftCorner(Z.num_cons(), ngz) = Z.A();
    A.block(Z.num_cons(), ngz, Y.num_cons(), ngy) = Y.A();
    A.bottomLeftCorner(Y.dim(), ngz) = R * Z.G();
    A.bottomRightCorner(Y.dim(), ngy) = -Y.G();

    Eigen::VectorXd b(nc);
    b << Z.b(), Y.b(), Y.c() - R * Z.c();

    return {std::move(G), Z.c(), std::move(A), std::move(b)};
}

HPolytope hpoly_intersection(const HPolytope& P, const HPolytope& Q)
{
    if (P.dim() != Q.dim())
        throw DimensionMismatch("hpoly_intersection: polytopes live in different dimensions");
    Eigen::MatrixXd H(P.num_halfspaces() + Q.num_halfspaces(), P.dim());
    H << P.H(), Q.H();
    Eigen::VectorXd k(H.rows());
    k << P.k(), Q.k();
    Eigen::MatrixXd Aeq(P.num_equalities() + Q.num_equalities(), P.dim());
    Aeq << P.Aeq(), Q.Aeq();
    Eigen::VectorXd beq(Aeq.rows());
    beq << P.beq(), Q.beq();
    return {std::move(H), std::move(k), std::move(Aeq), std::move(beq)};
}

Eigen::VectorXd sigma_lower_bound(const ConstrainedZonotope& Z, const Eigen::MatrixXd& H, SigmaMode mode,
                                  const lp::LpSettings& settings)
{
    if (H.cols() != Z.dim())
        throw DimensionMismatch("sigma_lower_bound: cols(H) != dim(Z)");
    const Eigen::MatrixXd HG = H * Z.G();
    const Eigen::VectorXd Hc = H * Z.c();
    Eigen::VectorXd sigma = Hc - HG.cwiseAbs().rowwise().sum();
    if (mode == SigmaMode::IntervalBound || Z.num_cons() == 0)
        return sigma;

    for (Eigen::Index i = 0; i < H.rows(); ++i)
    {
        const auto out = lp::solve(lp::LinearProgram::unit_box(HG.row(i).transpose(), Z.A(), Z.b()), settings);
        if (out.status == lp::LpStatus::Infeasible)
            throw EmptySet("sigma_lower_bound: constrained zonotope is empty");
        // the LP optimum can only improve on the interval bound; back off by
        // the solver tolerance so sigma stays a valid lower bound
        const double tight = Hc(i) + out.value - 1e-9 * (1.0 + std::abs(Hc(i) + out.value));
        sigma(i) = std::max(sigma(i), tight);
    }
    return sigma;
}

ConstrainedZonotope intersect_hpoly(const ConstrainedZonotope& Z, const HPolytope& P, const Eigen::VectorXd& sigma)
{
    if (P.dim() != Z.dim())
        throw DimensionMismatch("intersect_hpoly: dim(P) != dim(Z)");
    const Eigen::Index nh = P.num_halfspaces();
    const Eigen::Index ncp = P.num_equalities();
    if (sigma.size() != nh)
        throw DimensionMismatch("intersect_hpoly: sigma must have one entry per halfspace");

    const Eigen::VectorXd s = sigma.cwiseMin(P.k());
    const Eigen::VectorXd gq = 0.5 * (P.k() - s);
    const Eigen::VectorXd cq = 0.5 * (P.k() + s);

    const Eigen::Index ng = Z.num_gens();
    const Eigen::Index nc = Z.num_cons();

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Z.dim(), ng + nh);
    G.leftCols(ng) = Z.G();

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc + nh + ncp, ng + nh);
    A.topLeftCorner(nc, ng) = Z.A();
    A.block(nc, 0, nh, ng) = P.H() * Z.G();
    A.block(nc, ng, nh, nh) = -Eigen::MatrixXd(gq.asDiagonal());
    A.bottomLeftCorner(ncp, ng) = P.Aeq() * Z.G();

    Eigen::VectorXd b(nc + nh + ncp);
    b << Z.b(), cq - P.H() * Z.c(), P.beq() - P.Aeq() * Z.c();

    return {std::move(G), Z.c(), std::move(A), std::move(b)};
}

ConstrainedZonotope intersect_hpoly(const ConstrainedZonotope& Z, const HPolytope& P, SigmaMode mode,
                                    const lp::LpSettings& settings)
{
    if (P.dim() != Z.dim())
        throw DimensionMismatch("intersect_hpoly: dim(P) != dim(Z)");
    return intersect_hpoly(Z, P, sigma_lower_bound(Z, P.H(), mode, settings));
}

HullWitness interval_hull_with_witnesses(const ConstrainedZonotope& Z, const lp::LpSettings& settings)
{
    const Eigen::Index n = Z.dim();
    HullWitness w;
    w.box.reserve(static_cast<std::size_t>(n));

    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Eigen::VectorXd gi = Z.G().row(i).transpose();
        const auto lo = lp::solve(lp::LinearProgram::unit_box(gi, Z.A(), Z.b()), settings);
        if (lo.status == lp::LpStatus::Infeasible)
            throw EmptySet("interval_hull: constrained zonotope is empty");
        const auto hi = lp::solve(lp::LinearProgram::unit_box(-gi, Z.A(), Z.b()), settings);
        if (hi.status == lp::LpStatus::Infeasible)
            throw EmptySet("interval_hull: constrained zonotope is empty");

        const double l = Z.c()(i) + lo.value;
        const double u = Z.c()(i) - hi.value;
        w.box.emplace_back(std::min(l, u), std::max(l, u));
        w.lower_points.push_back(Z.point(lo.point));
        w.upper_points.push_back(Z.point(hi.point));
    }
    return w;
}

IntervalVector interval_hull(const ConstrainedZonotope& Z, const lp::LpSettings& settings)
{
    if (Z.num_cons() > 0)
        return interval_hull_with_witnesses(Z, settings).box;

    IntervalVector box;
    box.reserve(static_cast<std::size_t>(Z.dim()));
    const Eigen::VectorXd r = Z.G().cwiseAbs().rowwise().sum();
    for (Eigen::Index i = 0; i < Z.dim(); ++i)
        box.emplace_back(Z.c()(i) - r(i), Z.c()(i) + r(i));
    return box;
}

bool contains_point(const ConstrainedZonotope& Z, const Eigen::VectorXd& x, double tol)
{
    if (x.size() != Z.dim())
        throw DimensionMismatch("contains_point: point dimension mismatch");
    const Eigen::Index n = Z.dim();
    const Eigen::Index nc = Z.num_cons();
    Eigen::MatrixXd M(n + nc, Z.num_gens());
    M << Z.G(), Z.A();
    Eigen::VectorXd rhs(n + nc);
    rhs << x - Z.c(), Z.b();
    lp::LpSettings s;
    s.feas_tol = tol;
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(Z.num_gens());
    return lp::min_residual(M, rhs, -one, one, s) <= tol;
}

bool is_empty(const ConstrainedZonotope& Z, const lp::LpSettings& settings)
{
    if (Z.num_cons() == 0)
        return false;
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(Z.num_gens());
    return !lp::feasible(Z.A(), Z.b(), -one, one, settings);
}

Eigen::VectorXd support_point(const ConstrainedZonotope& Z, const Eigen::VectorXd& direction,
                              const lp::LpSettings& settings)
{
    if (direction.size() != Z.dim())
        throw DimensionMismatch("support_point: direction dimension mismatch");
    const Eigen::VectorXd obj = -(Z.G().transpose() * direction);
    const auto out = lp::solve(lp::LinearProgram::unit_box(obj, Z.A(), Z.b()), settings);
    if (out.status == lp::LpStatus::Infeasible)
        throw EmptySet("support_point: constrained zonotope is empty");
    return Z.point(out.point);
}

} // namespace czreach
