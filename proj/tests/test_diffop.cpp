#include "doctest.h"

#include <vector>

#include "feynmod/diffop.hpp"
#include "feynmod/errors.hpp"
#include "feynmod/mp.hpp"

using namespace feynmod;
using namespace feynmod::mp;
using namespace feynmod::diffop;

namespace {

mpq_class rq(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

RationalPoly poly(std::vector<long> coeffs) {
    std::vector<ExactRational> v;
    v.reserve(coeffs.size());
    for (long c : coeffs) v.emplace_back(c);
    return RationalPoly(std::move(v));
}

}  // namespace

TEST_CASE("polynomial arithmetic, division, and calculus") {
    RationalPoly f = poly({1, 0, -3, 2});   // 2t^3 - 3t^2 + 1
    RationalPoly g = poly({-5, 4});         // 4t - 5

    CHECK(f.degree() == 3);
    CHECK(RationalPoly().degree() == -1);
    CHECK((f - f).is_zero());
    CHECK(poly({0, 0, 0}).is_zero());
    CHECK(f.coefficient(2) == rq(-3, 1));
    CHECK(f.coefficient(9) == 0);
    CHECK_THROWS_AS(f.coefficient(-1), domain_error);
    CHECK_THROWS_AS(RationalPoly().leading(), domain_error);

    // (fg)' = f'g + fg'
    RationalPoly lhs = (f * g).derivative();
    RationalPoly rhs = f.derivative() * g + f * g.derivative();
    CHECK(lhs == rhs);

    // Evaluation is a ring homomorphism.
    ExactRational x = rq(7, 3);
    CHECK((f * g).eval(x) == f.eval(x) * g.eval(x));
    CHECK((f + g).eval(x) == f.eval(x) + g.eval(x));
    CHECK(RationalPoly::monomial(rq(5, 2), 4).eval(x) == rq(5, 2) * x * x * x * x);

    // Division: f = q*g + r with deg r < deg g, exactly.
    RationalPoly q, r;
    f.divmod(g, &q, &r);
    CHECK(q * g + r == f);
    CHECK(r.degree() < g.degree());
    CHECK_THROWS_AS(f.divmod(RationalPoly(), &q, &r), domain_error);

    // Ball evaluation agrees with exact evaluation.
    mpfr_prec_t prec = bits_for_digits(60);
    ApproxReal xb = ApproxReal::of_mpq(x, prec);
    CHECK(digits_matched(f.eval_ball(xb), ApproxReal::of_mpq(f.eval(x), prec)) >= 55);
}

TEST_CASE("gcd reduction keeps fractions in lowest terms with a monic denominator") {
    RationalPoly t2m4 = poly({-4, 0, 1});  // t^2 - 4
    RationalPoly tm2 = poly({-2, 1});      // t - 2
    CHECK(poly_gcd(t2m4, tm2) == tm2);
    CHECK(poly_gcd(RationalPoly(), RationalPoly()).is_zero());
    // gcd is normalized monic regardless of input scaling.
    CHECK(poly_gcd(t2m4.mul_scalar(rq(3, 7)), tm2.mul_scalar(rq(-2, 5))) == tm2);

    // (t^2 - 4)/(t - 2) reduces to t + 2.
    RationalFunction red(t2m4, tm2);
    CHECK(red.num() == poly({2, 1}));
    CHECK(red.den() == poly({1}));

    // Denominator made monic: (t + 1)/(2t + 2) = 1/2.
    RationalFunction half(poly({1, 1}), poly({2, 2}));
    CHECK(half.num() == RationalPoly::constant(rq(1, 2)));
    CHECK(half.den() == poly({1}));

    // Zero numerator collapses the denominator.
    RationalFunction z(RationalPoly(), poly({3, 5, 1}));
    CHECK(z.is_zero());
    CHECK(z.den() == poly({1}));

    CHECK_THROWS_AS(RationalFunction(poly({1}), RationalPoly()), domain_error);
}

TEST_CASE("rational function calculus follows the product and quotient rules") {
    RationalFunction f(poly({1, 0, 1}), poly({-3, 1}));      // (t^2+1)/(t-3)
    RationalFunction g(poly({-5, 2}), poly({1, 1, 1}));      // (2t-5)/(t^2+t+1)

    CHECK((f * g).derivative() == f.derivative() * g + f * g.derivative());
    CHECK((f + g).derivative() == f.derivative() + g.derivative());
    CHECK((f / g).derivative() ==
          (f.derivative() * g - f * g.derivative()) / (g * g));
    CHECK((f / g) * g == f);
    CHECK_THROWS_AS(f / RationalFunction(), domain_error);

    // d/dt (t-8)/4 = 1/4.
    RationalFunction lin(poly({-8, 1}), poly({4}));
    CHECK(lin.derivative() == RationalFunction::constant(rq(1, 4)));

    // Exact evaluation distributes over the field operations.
    ExactRational x = rq(-9, 7);
    CHECK((f * g).eval(x) == f.eval(x) * g.eval(x));
    CHECK((f / g).eval(x) == f.eval(x) / g.eval(x));
}

TEST_CASE("evaluation rejects poles, exactly and for balls straddling one") {
    RationalFunction f(poly({1}), poly({-2, 1}));  // 1/(t-2)
    CHECK_THROWS_AS(f.eval(ExactRational(2)), pole_error);
    CHECK(f.eval(ExactRational(3)) == 1);

    mpfr_prec_t prec = bits_for_digits(40);
    ApproxReal straddle = ApproxReal::of_long(2, prec);
    straddle.widen(Mag::from_d(1e-20));
    CHECK_THROWS_AS(f.eval_ball(straddle), pole_error);

    ApproxReal away = ApproxReal::of_mpq(rq(5, 2), prec);
    CHECK(digits_matched(f.eval_ball(away), ApproxReal::of_long(2, prec)) >=
          kDigitsExact);
}

TEST_CASE("operator construction, indexing, and monicization") {
    RationalFunction one = RationalFunction::constant(ExactRational(1));
    RationalFunction zero;

    // Trailing zero coefficients are trimmed.
    DiffOperator d1({zero, one, zero, zero});
    CHECK(d1.order() == 1);
    CHECK(d1.coefficient(1) == one);
    CHECK_THROWS_AS(d1.coefficient(2), domain_error);
    CHECK_THROWS_AS(d1.coefficient(-1), domain_error);

    DiffOperator zop({zero});
    CHECK(zop.order() == 0);
    CHECK_THROWS_AS(monicize(zop), domain_error);

    // Monicization divides by the leading coefficient.
    RationalFunction c(poly({0, 2}), poly({1}));  // 2t
    DiffOperator op({one, c});
    DiffOperator m = monicize(op);
    CHECK(m.coefficient(1) == one);
    CHECK(m.coefficient(0) == one / c);
}

TEST_CASE("the two hypergeometric-family operators carry the stated coefficients") {
    DiffOperator l3 = pf_L3();
    DiffOperator l2 = pf_L2();
    REQUIRE(l3.order() == 3);
    REQUIRE(l2.order() == 2);

    // Leading coefficient of the second-order operator at t = 1:
    // 1*(1-4)*(1-16) = 45.
    CHECK(l2.coefficient(2).eval(ExactRational(1)) == 45);

    // Spot values straight from the displayed polynomials at t = 2.
    CHECK(l3.coefficient(3).eval(ExactRational(2)) == 112);
    CHECK(l3.coefficient(2).eval(ExactRational(2)) == 72);
    CHECK(l3.coefficient(1).eval(ExactRational(2)) == -44);
    CHECK(l3.coefficient(0).eval(ExactRational(2)) == -2);
    CHECK(l2.coefficient(2).eval(ExactRational(2)) == 56);
    CHECK(l2.coefficient(1).eval(ExactRational(2)) == 12);
    CHECK(l2.coefficient(0).eval(ExactRational(2)) == rq(-3, 2));

    // Both vanish in leading coefficient exactly at the singular points.
    for (long t : {0, 4, 16}) {
        CHECK(l3.coefficient(3).eval(ExactRational(t)) == 0);
        CHECK(l2.coefficient(2).eval(ExactRational(t)) == 0);
    }
}

TEST_CASE("symmetric square of the bare second derivative is the third") {
    RationalFunction one = RationalFunction::constant(ExactRational(1));
    RationalFunction zero;
    DiffOperator dd({zero, zero, one});
    DiffOperator s = symmetric_square(dd);
    REQUIRE(s.order() == 3);
    CHECK(s.coefficient(3) == one);
    CHECK(s.coefficient(2).is_zero());
    CHECK(s.coefficient(1).is_zero());
    CHECK(s.coefficient(0).is_zero());
}

TEST_CASE("the cubic operator is exactly the symmetric square of the quadratic") {
    DiffOperator lhs = monicize(pf_L3());
    DiffOperator rhs = symmetric_square(monicize(pf_L2()));
    REQUIRE(lhs.order() == 3);
    REQUIRE(rhs.order() == 3);
    for (long j = 0; j <= 3; ++j) CHECK(lhs.coefficient(j) == rhs.coefficient(j));
    CHECK(lhs == rhs);

    // Monicization inside symmetric_square makes scaling irrelevant.
    CHECK(symmetric_square(pf_L2()) == rhs);
}

TEST_CASE("symmetric square requires a second-order operator") {
    CHECK_THROWS_AS(symmetric_square(pf_L3()), domain_error);
    RationalFunction one = RationalFunction::constant(ExactRational(1));
    CHECK_THROWS_AS(symmetric_square(DiffOperator({one, one})), domain_error);
}
