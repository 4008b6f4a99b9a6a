#include "doctest.h"

#include <cmath>

#include "feynmod/mp.hpp"
#include "feynmod/quad.hpp"

using namespace feynmod;
using namespace feynmod::mp;
using namespace feynmod::quad;

TEST_CASE("tanh-sinh: polynomial with known rational value") {
    auto ctx = make_context(60);
    ApproxReal zero = ApproxReal::of_long(0, ctx.prec_bits);
    ApproxReal one = ApproxReal::of_long(1, ctx.prec_bits);
    // int_0^1 x^2 dx = 1/3.
    ApproxReal got = integrate_ts_real(
        [](const ApproxReal& x) { return x * x; }, zero, one, ctx);
    ApproxReal exact = ApproxReal::of_mpq(mpq_class(1, 3), ctx.prec_bits);
    CHECK(digits_matched(got, exact) >= 58);
    // The ball must contain the true value, not merely sit near it.
    CHECK((got - exact).contains_zero());
}

TEST_CASE("tanh-sinh: smooth transcendental integrand") {
    auto ctx = make_context(60);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal zero = ApproxReal::of_long(0, p);
    ApproxReal one = ApproxReal::of_long(1, p);
    // int_0^1 cos x dx = sin 1.
    ApproxReal got = integrate_ts_real(
        [](const ApproxReal& x) { return cos_ball(x); }, zero, one, ctx);
    ApproxReal exact = sin_ball(ApproxReal::of_long(1, p));
    CHECK(digits_matched(got, exact) >= 58);
    // int_0^4 e^x dx = e^4 - 1 (wider interval, larger scale).
    ApproxReal four = ApproxReal::of_long(4, p);
    got = integrate_ts_real([](const ApproxReal& x) { return exp_ball(x); },
                            zero, four, ctx);
    exact = add_long(exp_ball(four), -1);
    CHECK(digits_matched(got, exact) >= 57);
}

TEST_CASE("tanh-sinh: inverse-square-root endpoint singularity") {
    auto ctx = make_context(50);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal zero = ApproxReal::of_long(0, p);
    ApproxReal one = ApproxReal::of_long(1, p);
    // int_0^1 dx/sqrt(x) = 2; the node offsets stay strictly positive, so
    // the integrand is evaluated only inside the interval.
    ApproxReal got = integrate_ts_real(
        [](const ApproxReal& x) { return recip(sqrt_ball(x)); }, zero, one,
        ctx);
    ApproxReal exact = ApproxReal::of_long(2, p);
    CHECK(digits_matched(got, exact) >= 45);
}

TEST_CASE("tanh-sinh: logarithmic endpoint singularity") {
    auto ctx = make_context(50);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal zero = ApproxReal::of_long(0, p);
    ApproxReal one = ApproxReal::of_long(1, p);
    // int_0^1 log x dx = -1.
    ApproxReal got = integrate_ts_real(
        [](const ApproxReal& x) { return log_ball(x); }, zero, one, ctx);
    ApproxReal exact = ApproxReal::of_long(-1, p);
    CHECK(digits_matched(got, exact) >= 45);
}

TEST_CASE("tanh-sinh: interval additivity") {
    auto ctx = make_context(50);
    mpfr_prec_t p = ctx.prec_bits;
    auto f = [](const ApproxReal& x) {
        return exp_ball(-(x * x));
    };
    ApproxReal zero = ApproxReal::of_long(0, p);
    ApproxReal half = ApproxReal::of_mpq(mpq_class(1, 2), p);
    ApproxReal one = ApproxReal::of_long(1, p);
    ApproxReal whole = integrate_ts_real(f, zero, one, ctx);
    ApproxReal split =
        integrate_ts_real(f, zero, half, ctx) + integrate_ts_real(f, half, one, ctx);
    CHECK(digits_matched(whole, split) >= 45);
}

TEST_CASE("tanh-sinh: complex-valued integrand") {
    auto ctx = make_context(50);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal zero = ApproxReal::of_long(0, p);
    ApproxReal one = ApproxReal::of_long(1, p);
    // int_0^1 e^{ix} dx = sin 1 + i(1 - cos 1).
    ApproxComplex got = integrate_ts(
        [p](const ApproxReal& x) {
            return ApproxComplex(cos_ball(x), sin_ball(x));
        },
        zero, one, ctx);
    ApproxReal s1 = sin_ball(ApproxReal::of_long(1, p));
    ApproxReal c1 = cos_ball(ApproxReal::of_long(1, p));
    ApproxComplex exact(s1, ApproxReal::of_long(1, p) - c1);
    CHECK(digits_matched(got, exact) >= 45);
}

TEST_CASE("tanh-sinh: double-precision variant") {
    double got = integrate_ts_d([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(std::abs(got - 0.25) < 1e-12);
    got = integrate_ts_d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::abs(got - 2.0) < 1e-9);
    got = integrate_ts_d([](double x) { return std::sin(x); }, 0.0,
                         3.141592653589793);
    CHECK(std::abs(got - 2.0) < 1e-12);
}
