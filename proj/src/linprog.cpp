// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "czreach/errors.hpp"

namespace czreach::lp
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class StepResult
{
    Optimal,
    Unbounded,
    IterationLimit
};

// Tableau simplex over [A | S] where S = diag(+-1) holds one artificial per row.
class Simplex
{
    public:
        Simplex(const LinearProgram& lp, const LpSettings& settings, bool bland_only)
            : lp_(lp), settings_(settings), bland_only_(bland_only), m_(lp.num_rows()), n_(lp.num_vars()),
              N_(n_ + m_)
        {
            lo_.resize(N_);
            hi_.resize(N_);
            x_.resize(N_);
            lo_.head(n_) = lp.box_lo;
            hi_.head(n_) = lp.box_hi;
            lo_.tail(m_).setZero();
            hi_.tail(m_).setConstant(inf);

            for (Eigen::Index j = 0; j < n_; ++j)
            {
                if (std::isfinite(lo_(j)))
                    x_(j) = lo_(j);
                else if (std::isfinite(hi_(j)))
                    x_(j) = hi_(j);
                else
                    x_(j) = 0.0;
            }

            const Eigen::VectorXd r = lp.eq_rhs - lp.eq_lhs * x_.head(n_);
            sign_.resize(m_);
            for (Eigen::Index i = 0; i < m_; ++i)
                sign_(i) = r(i) >= 0.0 ? 1.0 : -1.0;

            T_.resize(m_, N_);
            T_.leftCols(n_) = sign_.asDiagonal() * lp.eq_lhs;
            T_.rightCols(m_).setIdentity();
            rhs_ = sign_.cwiseProduct(lp.eq_rhs);

            basis_.resize(static_cast<std::size_t>(m_));
            pos_.assign(static_cast<std::size_t>(N_), -1);
            for (Eigen::Index i = 0; i < m_; ++i)
            {
                basis_[static_cast<std::size_t>(i)] = n_ + i;
                pos_[static_cast<std::size_t>(n_ + i)] = i;
            }
            x_.tail(m_) = r.cwiseAbs();
        }

        LpOutcome run(bool phase_one_only = false)
        {
            LpOutcome out;

            // phase one: minimize the sum of artificials
            cost_ = Eigen::VectorXd::Zero(N_);
            cost_.tail(m_).setOnes();
            compute_reduced_costs();
            if (iterate() == StepResult::IterationLimit)
                throw NumericalFailure("simplex: iteration limit in phase one");

            out.residual = x_.tail(m_).sum();
            out.iterations = iterations_;
            if (phase_one_only || out.residual > settings_.feas_tol)
            {
                out.status = LpStatus::Infeasible;
                out.point = x_.head(n_);
                return out;
            }

            // fix artificials at zero and drive them out of the basis where possible
            hi_.tail(m_).setZero();
            for (Eigen::Index i = 0; i < m_; ++i)
            {
                const Eigen::Index var = basis_[static_cast<std::size_t>(i)];
                if (var < n_)
                    continue;
                Eigen::Index best = -1;
                double best_abs = 1e-7;
                for (Eigen::Index j = 0; j < n_; ++j)
                {
                    if (pos_[static_cast<std::size_t>(j)] >= 0)
                        continue;
                    if (std::abs(T_(i, j)) > best_abs)
                    {
                        best_abs = std::abs(T_(i, j));
                        best = j;
                    }
                }
                // the entering variable absorbs the artificial's leftover value
                if (best >= 0 && x_(var) <= 1e-10 * best_abs)
                    pivot(i, best);
            }
            for (Eigen::Index k = n_; k < N_; ++k)
            {
                if (pos_[static_cast<std::size_t>(k)] < 0)
                    x_(k) = 0.0;
            }
            recompute_basic();

            // phase two
            cost_.setZero();
            cost_.head(n_) = lp_.objective;
            compute_reduced_costs();
            const StepResult res = iterate();
            out.iterations = iterations_;
            if (res == StepResult::IterationLimit)
                throw NumericalFailure("simplex: iteration limit in phase two");
            if (res == StepResult::Unbounded)
            {
                out.status = LpStatus::Unbounded;
                out.value = -inf;
                out.point = x_.head(n_);
                return out;
            }

            if (!verify())
            {
                refactor();
                if (!verify())
                    throw NumericalFailure("simplex: basis verification failed");
            }
            out.status = LpStatus::Optimal;
            out.point = x_.head(n_);
            out.value = lp_.objective.dot(out.point);
            return out;
        }

    private:
        void compute_reduced_costs()
        {
            Eigen::VectorXd cb(m_);
            for (Eigen::Index i = 0; i < m_; ++i)
                cb(i) = cost_(basis_[static_cast<std::size_t>(i)]);
            d_ = cost_ - T_.transpose() * cb;
            for (Eigen::Index i = 0; i < m_; ++i)
                d_(basis_[static_cast<std::size_t>(i)]) = 0.0;
        }

        void recompute_basic()
        {
            Eigen::VectorXd xb = rhs_;
            for (Eigen::Index j = 0; j < N_; ++j)
            {
                if (pos_[static_cast<std::size_t>(j)] >= 0 || x_(j) == 0.0)
                    continue;
                xb -= T_.col(j) * x_(j);
            }
            for (Eigen::Index i = 0; i < m_; ++i)
                x_(basis_[static_cast<std::size_t>(i)]) = xb(i);
        }

        void pivot(Eigen::Index r, Eigen::Index j)
        {
            const double piv = T_(r, j);
            T_.row(r) /= piv;
            rhs_(r) /= piv;
            for (Eigen::Index i = 0; i < m_; ++i)
            {
                if (i == r)
                    continue;
                const double f = T_(i, j);
                if (f != 0.0)
                {
                    T_.row(i) -= f * T_.row(r);
                    rhs_(i) -= f * rhs_(r);
                }
            }
            const double f = d_(j);
            if (f != 0.0)
                d_ -= f * T_.row(r).transpose();
            d_(j) = 0.0;

            const Eigen::Index leaving = basis_[static_cast<std::size_t>(r)];
            pos_[static_cast<std::size_t>(leaving)] = -1;
            basis_[static_cast<std::size_t>(r)] = j;
            pos_[static_cast<std::size_t>(j)] = r;
        }

        StepResult iterate()
        {
            const int bland_after = settings_.bland_factor * static_cast<int>(N_);
            const int max_iter = 50 * static_cast<int>(N_) + 1000;
            int local = 0;
            while (true)
            {
                if (local > max_iter)
                    return StepResult::IterationLimit;
                const bool bland = bland_only_ || local > bland_after;

                // pricing
                Eigen::Index enter = -1;
                double best = 0.0;
                for (Eigen::Index j = 0; j < N_; ++j)
                {
                    if (pos_[static_cast<std::size_t>(j)] >= 0 || lo_(j) == hi_(j))
                        continue;
                    const double dj = d_(j);
                    const bool can_up = dj < -settings_.opt_tol && x_(j) < hi_(j);
                    const bool can_down = dj > settings_.opt_tol && x_(j) > lo_(j);
                    if (!can_up && !can_down)
                        continue;
                    if (bland)
                    {
                        enter = j;
                        break;
                    }
                    if (std::abs(dj) > best)
                    {
                        best = std::abs(dj);
                        enter = j;
                    }
                }
                if (enter < 0)
                    return StepResult::Optimal;

                const double dir = d_(enter) < 0.0 ? 1.0 : -1.0;

                // ratio test
                double t_max = hi_(enter) - lo_(enter);
                Eigen::Index leave_row = -1;
                double leave_alpha = 0.0;
                for (Eigen::Index i = 0; i < m_; ++i)
                {
                    const double delta = dir * T_(i, enter);
                    if (std::abs(delta) <= settings_.pivot_tol)
                        continue;
                    const Eigen::Index var = basis_[static_cast<std::size_t>(i)];
                    double t;
                    if (delta > 0.0)
                    {
                        if (!std::isfinite(lo_(var)))
                            continue;
                        t = (x_(var) - lo_(var)) / delta;
                    }
                    else
                    {
                        if (!std::isfinite(hi_(var)))
                            continue;
                        t = (hi_(var) - x_(var)) / -delta;
                    }
                    t = std::max(t, 0.0);

                    const double tie = 1e-12 * (1.0 + std::abs(t_max < inf ? t_max : t));
                    if (t < t_max - tie)
                    {
                        t_max = t;
                        leave_row = i;
                        leave_alpha = std::abs(delta);
                    }
                    else if (leave_row >= 0 && t <= t_max + tie)
                    {
                        const Eigen::Index cur = basis_[static_cast<std::size_t>(leave_row)];
                        const bool better = bland ? var < cur : std::abs(delta) > leave_alpha;
                        if (better)
                        {
                            t_max = std::min(t, t_max);
                            leave_row = i;
                            leave_alpha = std::abs(delta);
                        }
                    }
                }

                if (!std::isfinite(t_max))
                    return StepResult::Unbounded;

                ++local;
                ++iterations_;

                // move
                x_(enter) += dir * t_max;
                for (Eigen::Index i = 0; i < m_; ++i)
                {
                    const double a = T_(i, enter);
                    if (a != 0.0)
                        x_(basis_[static_cast<std::size_t>(i)]) -= dir * t_max * a;
                }

                if (leave_row < 0)
                {
                    // bound flip
                    x_(enter) = dir > 0.0 ? hi_(enter) : lo_(enter);
                    continue;
                }

                const Eigen::Index leaving = basis_[static_cast<std::size_t>(leave_row)];
                const double delta = dir * T_(leave_row, enter);
                x_(leaving) = delta > 0.0 ? lo_(leaving) : hi_(leaving);
                pivot(leave_row, enter);
            }
        }

        bool verify() const
        {
            const Eigen::VectorXd xs = x_.head(n_);
            const double scale = 1.0 + (lp_.eq_rhs.size() > 0 ? lp_.eq_rhs.cwiseAbs().maxCoeff() : 0.0);
            const double res = m_ > 0 ? (lp_.eq_lhs * xs - lp_.eq_rhs).cwiseAbs().sum() : 0.0;
            if (!(res <= std::max(1e-7, 100.0 * settings_.feas_tol) * scale))
                return false;
            for (Eigen::Index j = 0; j < n_; ++j)
            {
                const double slack = 1e-7 * (1.0 + std::abs(xs(j)));
                if (xs(j) < lo_(j) - slack || xs(j) > hi_(j) + slack)
                    return false;
            }
            return true;
        }

        void refactor()
        {
            Eigen::MatrixXd full(m_, N_);
            full.leftCols(n_) = lp_.eq_lhs;
            full.rightCols(m_) = Eigen::MatrixXd(sign_.asDiagonal());
            Eigen::MatrixXd B(m_, m_);
            Eigen::VectorXd r = lp_.eq_rhs;
            for (Eigen::Index i = 0; i < m_; ++i)
                B.col(i) = full.col(basis_[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < N_; ++j)
            {
                if (pos_[static_cast<std::size_t>(j)] < 0 && x_(j) != 0.0)
                    r -= full.col(j) * x_(j);
            }
            const Eigen::VectorXd xb = B.fullPivLu().solve(r);
            for (Eigen::Index i = 0; i < m_; ++i)
                x_(basis_[static_cast<std::size_t>(i)]) = xb(i);
        }

        const LinearProgram& lp_;
        LpSettings settings_;
        bool bland_only_;
        Eigen::Index m_, n_, N_;
        RowMatrix T_;
        Eigen::VectorXd rhs_, x_, lo_, hi_, cost_, d_, sign_;
        std::vector<Eigen::Index> basis_;
        std::vector<Eigen::Index> pos_;
        int iterations_ = 0;
};

void validate(const LinearProgram& lp)
{
    const Eigen::Index n = lp.objective.size();
    if (lp.eq_lhs.cols() != n || lp.box_lo.size() != n || lp.box_hi.size() != n)
        throw DimensionMismatch("linear program: inconsistent variable dimensions");
    if (lp.eq_lhs.rows() != lp.eq_rhs.size())
        throw DimensionMismatch("linear program: equality rows and right-hand side differ");
    for (Eigen::Index j = 0; j < n; ++j)
    {
        if (!(lp.box_lo(j) <= lp.box_hi(j)))
            throw DimensionMismatch("linear program: box lower bound exceeds upper bound");
    }
}

} // namespace

LinearProgram LinearProgram::unit_box(const Eigen::VectorXd& objective, const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b)
{
    LinearProgram lp;
    lp.objective = objective;
    lp.eq_lhs = A;
    lp.eq_rhs = b;
    lp.box_lo = Eigen::VectorXd::Constant(objective.size(), -1.0);
    lp.box_hi = Eigen::VectorXd::Constant(objective.size(), 1.0);
    return lp;
}

LpOutcome solve(const LinearProgram& lp, const LpSettings& settings)
{
    validate(lp);
    try
    {
        return Simplex(lp, settings, false).run();
    }
    catch (const NumericalFailure&)
    {
        // restart from scratch under Bland's rule
        return Simplex(lp, settings, true).run();
    }
}

double min_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi, const LpSettings& settings)
{
    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Zero(A.cols());
    lp.eq_lhs = A;
    lp.eq_rhs = b;
    lp.box_lo = lo;
    lp.box_hi = hi;
    validate(lp);
    try
    {
        return Simplex(lp, settings, false).run(true).residual;
    }
    catch (const NumericalFailure&)
    {
        return Simplex(lp, settings, true).run(true).residual;
    }
}

bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& lo,
              const Eigen::VectorXd& hi, const LpSettings& settings)
{
    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Zero(A.cols());
    lp.eq_lhs = A;
    lp.eq_rhs = b;
    lp.box_lo = lo;
    lp.box_hi = hi;
    return solve(lp, settings).optimal();
}

} // namespace czreach::lp
