// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef CZREACH_INTERVAL_HPP_
#define CZREACH_INTERVAL_HPP_

#include <cstddef>
#include <ostream>
#include <vector>

namespace czreach
{

/**
 * Closed real interval [lo, hi].
 *
 * Arithmetic uses plain floating point (no directed rounding). The empty
 * interval is a tagged value; a non-empty interval always has lo <= hi.
 * Any operation touching an empty operand returns the empty interval.
 */
class Interval
{
    public:
        Interval() = default;
        explicit Interval(double point);

        /// Throws std::invalid_argument if lo > hi or either endpoint is NaN.
        Interval(double lo, double hi);

        static Interval empty();
        static Interval unit() { return Interval(-1.0, 1.0); }

        bool is_empty() const { return empty_; }
        double lo() const { return lo_; }
        double hi() const { return hi_; }

        double mid() const;
        double rad() const;
        double width() const { return hi_ - lo_; }

        /// Largest absolute value over the interval.
        double mag() const;

        bool contains(double x) const;
        bool contains(const Interval& other) const;
        bool contains_zero() const { return contains(0.0); }

        bool operator==(const Interval& other) const;

    private:
        double lo_ = 0.0;
        double hi_ = 0.0;
        bool empty_ = false;
};

using IntervalVector = std::vector<Interval>;

Interval iv_add(const Interval& a, const Interval& b);
Interval iv_sub(const Interval& a, const Interval& b);
Interval iv_mul(const Interval& a, const Interval& b);
/// Throws DivisionByZeroInterval when 0 is in b.
Interval iv_div(const Interval& a, const Interval& b);
Interval iv_neg(const Interval& a);
Interval iv_scale(const Interval& a, double s);
Interval iv_shift(const Interval& a, double s);

Interval iv_exp(const Interval& a);
/// Throws DomainError unless a.lo() > 0.
Interval iv_log(const Interval& a);
/// Integer power by parity case analysis. Negative q requires 0 not in a.
Interval iv_pow_int(const Interval& a, int q);

double iv_mid(const Interval& a);
double iv_rad(const Interval& a);
Interval iv_hull(const Interval& a, const Interval& b);
Interval iv_intersect(const Interval& a, const Interval& b);
bool iv_contains(const Interval& a, double x);

/// Widens both endpoints by eps (eps >= 0). Used for optional rigor margins.
Interval iv_inflate(const Interval& a, double eps);

inline Interval operator+(const Interval& a, const Interval& b) { return iv_add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return iv_sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return iv_mul(a, b); }
inline Interval operator/(const Interval& a, const Interval& b) { return iv_div(a, b); }
inline Interval operator-(const Interval& a) { return iv_neg(a); }
inline Interval operator*(double s, const Interval& a) { return iv_scale(a, s); }
inline Interval operator*(const Interval& a, double s) { return iv_scale(a, s); }

std::ostream& operator<<(std::ostream& os, const Interval& a);

// vector helpers

std::vector<double> midpoints(const IntervalVector& x);
std::vector<double> radii(const IntervalVector& x);
bool contains(const IntervalVector& x, const std::vector<double>& point, double tol = 0.0);

/// Dense row-major matrix of intervals.
class IntervalMatrix
{
    public:
        IntervalMatrix() = default;
        IntervalMatrix(std::size_t rows, std::size_t cols, Interval fill = Interval(0.0));

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }

        Interval& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
        const Interval& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<Interval> data_;
};

} // namespace czreach

#endif
