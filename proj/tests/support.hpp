// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_TESTS_SUPPORT_HPP_
#define CZREACH_TESTS_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "czreach/factorable.hpp"
#include "czreach/reach.hpp"
#include "czreach/sets.hpp"

namespace czreach::testing
{

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0)
{
    std::normal_distribution<double> nd(0.0, scale);
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            M(i, j) = nd(rng);
    return M;
}

inline Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = u(rng);
    return v;
}

/// A random constrained zonotope together with a factor vector strictly inside its factor box.
struct RandomCz
{
    ConstrainedZonotope Z;
    Eigen::VectorXd xi0;
};

inline RandomCz random_cz(Eigen::Index n, Eigen::Index ng, Eigen::Index nc, std::mt19937_64& rng)
{
    const Eigen::MatrixXd G = random_matrix(n, ng, rng);
    const Eigen::VectorXd c = uniform_vector(n, -1.0, 1.0, rng);
    const Eigen::MatrixXd A = random_matrix(nc, ng, rng);
    const Eigen::VectorXd xi0 = uniform_vector(ng, -0.5, 0.5, rng);
    return {ConstrainedZonotope(G, c, A, A * xi0), xi0};
}

/// Orthonormal basis of the null space of A.
inline Eigen::MatrixXd null_basis(const Eigen::MatrixXd& A, Eigen::Index cols)
{
    if (A.rows() == 0)
        return Eigen::MatrixXd::Identity(cols, cols);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(1.0, svd.singularValues()(0)))
            ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

/**
 * Hit-and-run over {xi : A xi = b, |xi| <= 1} started from a feasible xi0.
 * Returns factor vectors; thinning keeps successive samples weakly correlated.
 */
inline std::vector<Eigen::VectorXd> hit_and_run(const ConstrainedZonotope& Z, const Eigen::VectorXd& xi0,
                                                std::size_t count, std::mt19937_64& rng, int thinning = 5)
{
    const Eigen::MatrixXd N = null_basis(Z.A(), Z.num_gens());
    std::vector<Eigen::VectorXd> out;
    Eigen::VectorXd xi = xi0;
    if (N.cols() == 0)
    {
        out.assign(count, xi0);
        return out;
    }
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (out.size() < count)
    {
        for (int s = 0; s < thinning; ++s)
        {
            Eigen::VectorXd t(N.cols());
            for (Eigen::Index i = 0; i < t.size(); ++i)
                t(i) = nd(rng);
            const Eigen::VectorXd d = N * t;
            double lo = -1e300;
            double hi = 1e300;
            for (Eigen::Index i = 0; i < d.size(); ++i)
            {
                if (std::abs(d(i)) < 1e-14)
                    continue;
                const double a = (-1.0 - xi(i)) / d(i);
                const double b = (1.0 - xi(i)) / d(i);
                lo = std::max(lo, std::min(a, b));
                hi = std::min(hi, std::max(a, b));
            }
            if (hi > lo)
                xi = xi + (lo + (hi - lo) * u(rng)) * d;
            xi = xi.cwiseMax(-1.0).cwiseMin(1.0);
        }
        out.push_back(xi);
    }
    return out;
}

inline std::vector<Eigen::VectorXd> sample_members(const RandomCz& r, std::size_t count, std::mt19937_64& rng)
{
    std::vector<Eigen::VectorXd> pts;
    for (const Eigen::VectorXd& xi : hit_and_run(r.Z, r.xi0, count, rng))
        pts.push_back(r.Z.point(xi));
    return pts;
}

inline ConstrainedZonotope unit_box(Eigen::Index n)
{
    return ConstrainedZonotope(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n));
}

inline const std::vector<std::string>& example1_dynamics()
{
    static const std::vector<std::string> d{"x2*(-0.7 + 0.1*x2 + 0.1*x1) + 0.1*exp(x1)",
                                            "x1*(1 - 0.1*x1 + 0.2*x2) + x2"};
    return d;
}

inline Eigen::Vector2d example1_direct(const Eigen::Vector2d& x)
{
    return {x(1) * (-0.7 + 0.1 * x(1) + 0.1 * x(0)) + 0.1 * std::exp(x(0)),
            x(0) * (1.0 - 0.1 * x(0) + 0.2 * x(1)) + x(1)};
}

inline ReachProblem example1(double alpha, int horizon = 2)
{
    ReachProblem p;
    p.dynamics = parse(example1_dynamics(), {"x1", "x2"});
    p.n_x = 2;
    p.X0 = ConstrainedZonotope(alpha * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
    p.horizon = horizon;
    return p;
}

constexpr double ex2_k1 = 0.16 / 60.0;
constexpr double ex2_k2 = 0.0064 / 60.0;
constexpr double ex2_ts = 6.0;

inline std::vector<std::string> example2_dynamics()
{
    const std::string k1 = "(0.16/60)";
    const std::string k2 = "(0.0064/60)";
    return {"x1 + 6*(-2*" + k1 + "*x1^2 + 2*" + k2 + "*x2)", "x2 + 6*(" + k1 + "*x1^2 - " + k2 + "*x2)"};
}

inline Eigen::Vector2d example2_direct(const Eigen::Vector2d& x)
{
    return {x(0) + ex2_ts * (-2.0 * ex2_k1 * x(0) * x(0) + 2.0 * ex2_k2 * x(1)),
            x(1) + ex2_ts * (ex2_k1 * x(0) * x(0) - ex2_k2 * x(1))};
}

inline ConstrainedZonotope example2_x0()
{
    Eigen::MatrixXd G(2, 3);
    G << 2.5, -0.2, 0.1, 0.5, 0.5, 0.1;
    Eigen::MatrixXd A(1, 3);
    A << 1.0, -0.1, 1.0;
    return {G, Eigen::Vector2d(2.5, 1.0), A, Eigen::VectorXd::Ones(1)};
}

inline ReachProblem example2(int horizon = 50)
{
    ReachProblem p;
    p.dynamics = parse(example2_dynamics(), {"x1", "x2"});
    p.n_x = 2;
    p.X0 = example2_x0();
    p.horizon = horizon;
    return p;
}

} // namespace czreach::testing

#endif
