// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "czreach/errors.hpp"
#include "czreach/interval.hpp"

using namespace czreach;

namespace
{

Interval random_interval(std::mt19937_64& rng, double lo = -3.0, double hi = 3.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    const double a = u(rng);
    const double b = u(rng);
    return {std::min(a, b), std::max(a, b)};
}

double draw(const Interval& x, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(x.lo(), x.hi());
    return u(rng);
}

Interval shrink(const Interval& x, std::mt19937_64& rng)
{
    const double a = draw(x, rng);
    const double b = draw(x, rng);
    return {std::min(a, b), std::max(a, b)};
}

} // namespace

TEST_CASE("endpoint arithmetic")
{
    CHECK(iv_add(Interval(1, 2), Interval(3, 4)) == Interval(4, 6));
    CHECK(iv_sub(Interval(1, 2), Interval(3, 4)) == Interval(-3, -1));
    CHECK(iv_mul(Interval(-1, 2), Interval(3, 4)) == Interval(-4, 8));
    CHECK(iv_div(Interval(1, 2), Interval(2, 4)) == Interval(0.25, 1));
    CHECK(iv_neg(Interval(-1, 2)) == Interval(-2, 1));
    CHECK(iv_scale(Interval(-1, 2), -2.0) == Interval(-4, 2));
    CHECK(iv_shift(Interval(-1, 2), 1.5) == Interval(0.5, 3.5));
}

TEST_CASE("division by an interval containing zero is rejected")
{
    CHECK_THROWS_AS(iv_div(Interval(1, 2), Interval(0, 1)), DivisionByZeroInterval);
    CHECK_THROWS_AS(iv_div(Interval(1, 2), Interval(-1, 1)), DivisionByZeroInterval);
}

TEST_CASE("elementary functions")
{
    const Interval e = iv_exp(Interval(0, 1));
    CHECK(e.lo() == doctest::Approx(1.0));
    CHECK(e.hi() == doctest::Approx(std::numbers::e));
    CHECK(iv_pow_int(Interval(-2, 1), 2) == Interval(0, 4));
    CHECK(iv_pow_int(Interval(-2, 1), 3) == Interval(-8, 1));
    CHECK(iv_pow_int(Interval(2, 3), 2) == Interval(4, 9));
    CHECK(iv_pow_int(Interval(-3, -2), 2) == Interval(4, 9));
    const Interval l = iv_log(Interval(1, std::numbers::e));
    CHECK(l.lo() == doctest::Approx(0.0));
    CHECK(l.hi() == doctest::Approx(1.0));
    const Interval inv = iv_pow_int(Interval(2, 4), -1);
    CHECK(inv.lo() == doctest::Approx(0.25));
    CHECK(inv.hi() == doctest::Approx(0.5));
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(iv_log(Interval(0, 1)), DomainError);
    CHECK_THROWS_AS(iv_log(Interval(-2, -1)), DomainError);
    CHECK_THROWS_AS(iv_pow_int(Interval(-1, 1), -2), DomainError);
}

TEST_CASE("midpoint, radius, hull and containment")
{
    CHECK(iv_mid(Interval(1, 3)) == 2.0);
    CHECK(iv_rad(Interval(1, 3)) == 1.0);
    CHECK(iv_hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
    CHECK(iv_contains(Interval(1, 3), 1.0));
    CHECK(iv_contains(Interval(1, 3), 3.0));
    CHECK_FALSE(iv_contains(Interval(1, 3), 3.0000001));
    CHECK(iv_intersect(Interval(0, 1), Interval(2, 3)).is_empty());
    CHECK(iv_intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2));
    CHECK(iv_inflate(Interval(0, 1), 0.5) == Interval(-0.5, 1.5));
}

TEST_CASE("empty sentinel never has lo > hi")
{
    CHECK_THROWS_AS(Interval(2, 1), std::invalid_argument);
    const Interval e = Interval::empty();
    CHECK(e.is_empty());
    CHECK(iv_add(e, Interval(1, 2)).is_empty());
    CHECK(iv_hull(e, Interval(1, 2)) == Interval(1, 2));
    CHECK_FALSE(e.contains(0.0));
}

TEST_CASE("mid plus or minus rad reproduces the endpoints")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i)
    {
        // dyadic endpoints keep the sum and difference exact
        std::uniform_int_distribution<int> d(-4096, 4096);
        const int a = d(rng);
        const int b = d(rng);
        const Interval x(std::min(a, b) / 64.0, std::max(a, b) / 64.0);
        CHECK(x.mid() - x.rad() == x.lo());
        CHECK(x.mid() + x.rad() == x.hi());
    }
}

TEST_CASE("binary operations contain sampled images")
{
    using Op = std::function<Interval(const Interval&, const Interval&)>;
    using Real = std::function<double(double, double)>;
    const std::vector<std::pair<Op, Real>> ops{
        {iv_add, [](double x, double y) { return x + y; }},
        {iv_sub, [](double x, double y) { return x - y; }},
        {iv_mul, [](double x, double y) { return x * y; }},
        {iv_div, [](double x, double y) { return x / y; }},
    };
    std::mt19937_64 rng(3);
    for (const auto& [op, real] : ops)
    {
        for (int trial = 0; trial < 20; ++trial)
        {
            const Interval a = random_interval(rng);
            Interval b = random_interval(rng);
            if (b.contains_zero())
                b = Interval(0.5, 0.5 + b.width());
            const Interval r = op(a, b);
            for (int i = 0; i < 1000; ++i)
            {
                const double v = real(draw(a, rng), draw(b, rng));
                CHECK(r.contains(v));
            }
        }
    }
}

TEST_CASE("unary functions contain sampled images")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Interval a = random_interval(rng);
        const Interval pos(std::abs(a.lo()) + 0.01, std::abs(a.lo()) + 0.01 + a.width());
        for (int i = 0; i < 200; ++i)
        {
            const double x = draw(a, rng);
            CHECK(iv_exp(a).contains(std::exp(x)));
            for (int q = 1; q <= 5; ++q)
                CHECK(iv_pow_int(a, q).contains(std::pow(x, q)));
            const double y = draw(pos, rng);
            CHECK(iv_log(pos).contains(std::log(y)));
            CHECK(iv_pow_int(pos, -3).contains(std::pow(y, -3)));
        }
    }
}

TEST_CASE("inclusion monotonicity on nested intervals")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const Interval A = random_interval(rng);
        const Interval B = random_interval(rng);
        const Interval a = shrink(A, rng);
        const Interval b = shrink(B, rng);
        CHECK(iv_add(A, B).contains(iv_add(a, b)));
        CHECK(iv_sub(A, B).contains(iv_sub(a, b)));
        CHECK(iv_mul(A, B).contains(iv_mul(a, b)));
        if (!B.contains_zero())
            CHECK(iv_div(A, B).contains(iv_div(a, b)));
        CHECK(iv_exp(A).contains(iv_exp(a)));
        for (int q = 2; q <= 4; ++q)
            CHECK(iv_pow_int(A, q).contains(iv_pow_int(a, q)));
    }
}

TEST_CASE("interval vectors")
{
    const IntervalVector x{Interval(0, 2), Interval(-1, 1)};
    CHECK(midpoints(x) == std::vector<double>{1.0, 0.0});
    CHECK(radii(x) == std::vector<double>{1.0, 1.0});
    CHECK(contains(x, {2.0, -1.0}));
    CHECK_FALSE(contains(x, {2.1, 0.0}));
    CHECK(contains(x, {2.1, 0.0}, 0.2));
}
