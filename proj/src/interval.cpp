// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "czreach/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "czreach/errors.hpp"

namespace czreach
{

Interval::Interval(double point) : lo_(point), hi_(point)
{
    if (std::isnan(point))
        throw std::invalid_argument("Interval: NaN endpoint");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (std::isnan(lo) || std::isnan(hi))
        throw std::invalid_argument("Interval: NaN endpoint");
    if (lo > hi)
        throw std::invalid_argument("Interval: lower endpoint exceeds upper endpoint");
}

Interval Interval::empty()
{
    Interval e;
    e.empty_ = true;
    return e;
}

double Interval::mid() const
{
    return 0.5 * (lo_ + hi_);
}

double Interval::rad() const
{
    return 0.5 * (hi_ - lo_);
}

double Interval::mag() const
{
    return std::max(std::abs(lo_), std::abs(hi_));
}

bool Interval::contains(double x) const
{
    return !empty_ && lo_ <= x && x <= hi_;
}

bool Interval::contains(const Interval& other) const
{
    if (other.empty_)
        return true;
    return !empty_ && lo_ <= other.lo_ && other.hi_ <= hi_;
}

bool Interval::operator==(const Interval& other) const
{
    if (empty_ || other.empty_)
        return empty_ == other.empty_;
    return lo_ == other.lo_ && hi_ == other.hi_;
}

Interval iv_add(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty())
        return Interval::empty();
    return Interval(a.lo() + b.lo(), a.hi() + b.hi());
}

Interval iv_sub(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty())
        return Interval::empty();
    return Interval(a.lo() - b.hi(), a.hi() - b.lo());
}

Interval iv_mul(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty())
        return Interval::empty();
    const double p1 = a.lo() * b.lo();
    const double p2 = a.lo() * b.hi();
    const double p3 = a.hi() * b.lo();
    const double p4 = a.hi() * b.hi();
    return Interval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval iv_div(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty())
        return Interval::empty();
    if (b.contains_zero())
        throw DivisionByZeroInterval("interval division by an interval containing zero");
    return iv_mul(a, Interval(1.0 / b.hi(), 1.0 / b.lo()));
}

Interval iv_neg(const Interval& a)
{
    if (a.is_empty())
        return a;
    return Interval(-a.hi(), -a.lo());
}

Interval iv_scale(const Interval& a, double s)
{
    if (a.is_empty())
        return a;
    if (s >= 0.0)
        return Interval(s * a.lo(), s * a.hi());
    return Interval(s * a.hi(), s * a.lo());
}

Interval iv_shift(const Interval& a, double s)
{
    if (a.is_empty())
        return a;
    return Interval(a.lo() + s, a.hi() + s);
}

Interval iv_exp(const Interval& a)
{
    if (a.is_empty())
        return a;
    return Interval(std::exp(a.lo()), std::exp(a.hi()));
}

Interval iv_log(const Interval& a)
{
    if (a.is_empty())
        return a;
    if (!(a.lo() > 0.0))
        throw DomainError("logarithm of an interval that is not strictly positive");
    return Interval(std::log(a.lo()), std::log(a.hi()));
}

Interval iv_pow_int(const Interval& a, int q)
{
    if (a.is_empty())
        return a;
    if (q == 0)
        return Interval(1.0);
    if (q < 0)
    {
        if (a.contains_zero())
            throw DomainError("negative integer power of an interval containing zero");
        return iv_div(Interval(1.0), iv_pow_int(a, -q));
    }
    const double pl = std::pow(a.lo(), q);
    const double ph = std::pow(a.hi(), q);
    if (q % 2 == 1)
        return Interval(pl, ph);
    if (a.contains_zero())
        return Interval(0.0, std::max(pl, ph));
    return Interval(std::min(pl, ph), std::max(pl, ph));
}

double iv_mid(const Interval& a)
{
    return a.mid();
}

double iv_rad(const Interval& a)
{
    return a.rad();
}

Interval iv_hull(const Interval& a, const Interval& b)
{
    if (a.is_empty())
        return b;
    if (b.is_empty())
        return a;
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval iv_intersect(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty())
        return Interval::empty();
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi)
        return Interval::empty();
    return Interval(lo, hi);
}

bool iv_contains(const Interval& a, double x)
{
    return a.contains(x);
}

Interval iv_inflate(const Interval& a, double eps)
{
    if (a.is_empty() || eps <= 0.0)
        return a;
    return Interval(a.lo() - eps, a.hi() + eps);
}

std::ostream& operator<<(std::ostream& os, const Interval& a)
{
    if (a.is_empty())
        return os << "[empty]";
    return os << "[" << a.lo() << ", " << a.hi() << "]";
}

std::vector<double> midpoints(const IntervalVector& x)
{
    std::vector<double> m(x.size());
    std::transform(x.begin(), x.end(), m.begin(), [](const Interval& v) { return v.mid(); });
    return m;
}

std::vector<double> radii(const IntervalVector& x)
{
    std::vector<double> r(x.size());
    std::transform(x.begin(), x.end(), r.begin(), [](const Interval& v) { return v.rad(); });
    return r;
}

bool contains(const IntervalVector& x, const std::vector<double>& point, double tol)
{
    if (x.size() != point.size())
        throw DimensionMismatch("contains: interval vector and point have different sizes");
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (!iv_inflate(x[i], tol).contains(point[i]))
            return false;
    }
    return true;
}

IntervalMatrix::IntervalMatrix(std::size_t rows, std::size_t cols, Interval fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

} // namespace czreach
