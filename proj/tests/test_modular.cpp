#include "feynmod/modular.hpp"

#include <vector>

#include "doctest.h"
#include "feynmod/errors.hpp"
#include "feynmod/mp.hpp"
#include "feynmod/qexp.hpp"
#include "feynmod/special.hpp"

using namespace feynmod;
using mp::ApproxComplex;
using mp::ApproxReal;
using mp::ExactRational;
using modular::Tau;
using modular::WeberKind;

namespace {

Tau make_tau(double re, double im, mpfr_prec_t prec) {
    return Tau(ApproxReal::of_double(re, prec), ApproxReal::of_double(im, prec));
}

std::vector<Tau> sample_points(mpfr_prec_t prec) {
    return {make_tau(0.3, 0.8, prec), make_tau(-0.25, 0.55, prec),
            make_tau(0.125, 1.1, prec)};
}

// (a + i sqrt(d)) / den for d > 0.
Tau surd_tau(long a, unsigned long d, long den, mpfr_prec_t prec) {
    ExactRational re(a, den);
    re.canonicalize();
    return Tau(ApproxReal::of_mpq(re, prec),
               mp::mul_mpq(mp::sqrt_ul(d, prec), ExactRational(1, den)));
}

}  // namespace

TEST_CASE("eta at i and 2i matches the gamma closed forms") {
    auto ctx = mp::make_context(50);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal g = special::gamma_mpq(ExactRational(1, 4), p);
    ApproxReal pi34 = mp::pow_mpq(mp::const_pi(p), ExactRational(3, 4));

    ApproxComplex eta_i = modular::eta(make_tau(0.0, 1.0, p), ctx);
    ApproxReal ref_i = g / mp::mul_2si(pi34, 1);
    CHECK(mp::digits_matched(eta_i.re(), ref_i) >= 45);
    CHECK(mp::digits_zero(eta_i.im()) >= 45);

    ApproxComplex eta_2i = modular::eta(make_tau(0.0, 2.0, p), ctx);
    ApproxReal ref_2i = g / (mp::pow_mpq(ApproxReal::of_long(2, p), ExactRational(11, 8)) * pi34);
    CHECK(mp::digits_matched(eta_2i.re(), ref_2i) >= 45);
}

TEST_CASE("eta agrees with the dense q-expansion evaluation") {
    auto ctx = mp::make_context(40);
    Tau tau = make_tau(0.3, 0.7, ctx.prec_bits);
    ApproxComplex direct = modular::eta(tau, ctx);
    // Coefficients of prod (1 - q^n) lie in {-1, 0, 1}.
    ApproxComplex via_qexp = qexp::eta_power_qexp(1, 1, 200).eval(tau, ctx, 2.0);
    CHECK(mp::digits_matched(direct, via_qexp) >= 35);
}

TEST_CASE("eta transformation laws") {
    auto ctx = mp::make_context(45);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, p));
    for (const Tau& tau : sample_points(p)) {
        ApproxComplex base = modular::eta(tau, ctx);

        // eta(tau + 1) = e^{pi i/12} eta(tau), so the modulus is unchanged.
        ApproxComplex shifted = modular::eta(tau + one, ctx);
        ApproxComplex phase = mp::exp_ball(
            mp::mul_i(ApproxComplex::of_real(mp::mul_mpq(mp::const_pi(p), ExactRational(1, 12)))));
        CHECK(mp::digits_matched(shifted, phase * base) >= 40);
        CHECK(mp::digits_matched(mp::abs_ball(shifted), mp::abs_ball(base)) >= 40);

        // eta(-1/tau) = sqrt(-i tau) eta(tau).
        ApproxComplex inverted = modular::eta(-mp::recip(tau), ctx);
        ApproxComplex root = mp::sqrt_ball(-mp::mul_i(tau));
        CHECK(mp::digits_matched(inverted, root * base) >= 40);
    }
}

TEST_CASE("Fricke-type eta identities at level 6") {
    auto ctx = mp::make_context(40);
    mpfr_prec_t p = ctx.prec_bits;
    Tau tau = make_tau(0.21, 0.9, p);
    ApproxComplex w6 = -mp::recip(mp::mul_mpq(tau, ExactRational(6)));
    for (long m : {1L, 2L, 3L, 6L}) {
        CAPTURE(m);
        ExactRational ratio(6, m);
        ratio.canonicalize();
        ApproxComplex lhs = modular::eta(mp::mul_mpq(w6, ExactRational(m)), ctx);
        ApproxComplex rhs = mp::sqrt_ball(-mp::mul_i(mp::mul_mpq(tau, ratio))) *
                            modular::eta(mp::mul_mpq(tau, ratio), ctx);
        CHECK(mp::digits_matched(lhs, rhs) >= 35);
    }
}

TEST_CASE("eta failure modes") {
    auto ctx = mp::make_context(30);
    CHECK_THROWS_AS(modular::eta(make_tau(0.0, 1e-9, ctx.prec_bits), ctx),
                    convergence_failure);
    CHECK_THROWS_AS(modular::eta(make_tau(0.0, -1.0, ctx.prec_bits), ctx), domain_error);
    CHECK_THROWS_AS(modular::eta(make_tau(0.5, 0.0, ctx.prec_bits), ctx), domain_error);
}

TEST_CASE("Eisenstein series evaluation") {
    auto ctx = mp::make_context(45);
    mpfr_prec_t p = ctx.prec_bits;
    Tau i_pt = make_tau(0.0, 1.0, p);

    SUBCASE("E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6") {
        ApproxComplex e4 = modular::eisenstein_eval(4, i_pt, ctx);
        ApproxReal g = special::gamma_mpq(ExactRational(1, 4), p);
        ApproxReal num = mp::mul_long(mp::pow_si(g, 8), 3);
        ApproxReal den = mp::pow_si(mp::mul_2si(mp::const_pi(p), 1), 6);
        CHECK(mp::digits_matched(e4.re(), num / den) >= 40);
        CHECK(mp::digits_zero(e4.im()) >= 40);
    }
    SUBCASE("E6(i) = 0") {
        ApproxComplex e6 = modular::eisenstein_eval(6, i_pt, ctx);
        CHECK(mp::digits_zero(e6) >= 40);
    }
    SUBCASE("series evaluation matches the exact q-expansion path") {
        ApproxComplex direct = modular::eisenstein_eval(4, i_pt, ctx);
        // sigma_3(n) <= n^3 <= 2^n for n >= 10: scale 240 * 2 covers it.
        ApproxComplex via_qexp = qexp::eisenstein_qexp(4, 300).eval(
            i_pt, ctx, 240.0 * 300.0 * 300.0 * 300.0);
        CHECK(mp::digits_matched(direct, via_qexp) >= 40);
    }
    SUBCASE("quasi-modularity of E2") {
        Tau tau = make_tau(0.17, 0.83, p);
        ApproxComplex lhs = modular::eisenstein_eval(2, -mp::recip(tau), ctx);
        ApproxComplex rhs = tau * tau * modular::eisenstein_eval(2, tau, ctx) -
                            mp::mul_i(tau) * ApproxComplex::of_real(
                                ApproxReal::of_long(6, p) / mp::const_pi(p));
        CHECK(mp::digits_matched(lhs, rhs) >= 38);
    }
    SUBCASE("invalid weights are rejected") {
        CHECK_THROWS_AS(modular::eisenstein_eval(3, i_pt, ctx), domain_error);
        CHECK_THROWS_AS(modular::eisenstein_eval(0, i_pt, ctx), domain_error);
        CHECK_THROWS_AS(modular::eisenstein_eval(-4, i_pt, ctx), domain_error);
    }
}

TEST_CASE("Weber function values and identities") {
    auto ctx = mp::make_context(45);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal cbrt2 = mp::pow_mpq(ApproxReal::of_long(2, p), ExactRational(1, 3));

    SUBCASE("f0 at sqrt(-3) and sqrt(-3)/3") {
        ApproxComplex a = modular::weber(WeberKind::f0, surd_tau(0, 3, 1, p), ctx);
        ApproxComplex b = modular::weber(WeberKind::f0, surd_tau(0, 3, 3, p), ctx);
        CHECK(mp::digits_matched(a.re(), cbrt2) >= 40);
        CHECK(mp::digits_zero(a.im()) >= 40);
        CHECK(mp::digits_matched(b.re(), cbrt2) >= 40);
    }
    SUBCASE("modulus of f2 at (3 + sqrt(-3))/2 and (3 + sqrt(-3))/6") {
        ApproxReal root6 = mp::pow_mpq(ApproxReal::of_long(2, p), ExactRational(1, 6));
        ApproxComplex a = modular::weber(WeberKind::f2, surd_tau(3, 3, 2, p), ctx);
        ApproxComplex b = modular::weber(WeberKind::f2, surd_tau(3, 3, 6, p), ctx);
        CHECK(mp::digits_matched(mp::abs_ball(a), root6) >= 40);
        CHECK(mp::digits_matched(mp::abs_ball(b), root6) >= 40);
    }
    SUBCASE("product and eighth-power identities at generic points") {
        ApproxReal root2 = mp::sqrt_ul(2, p);
        for (const Tau& tau : sample_points(p)) {
            ApproxComplex f0 = modular::weber(WeberKind::f0, tau, ctx);
            ApproxComplex f1 = modular::weber(WeberKind::f1, tau, ctx);
            ApproxComplex f2 = modular::weber(WeberKind::f2, tau, ctx);
            CHECK(mp::digits_matched(f0 * f1 * f2, ApproxComplex::of_real(root2)) >= 38);
            CHECK(mp::digits_matched(mp::pow_si(f0, 8),
                                     mp::pow_si(f1, 8) + mp::pow_si(f2, 8)) >= 36);
        }
    }
    SUBCASE("f0 is invariant under tau -> -1/tau") {
        Tau tau = make_tau(0.11, 0.93, p);
        ApproxComplex a = modular::weber(WeberKind::f0, tau, ctx);
        ApproxComplex b = modular::weber(WeberKind::f0, -mp::recip(tau), ctx);
        CHECK(mp::digits_matched(a, b) >= 38);
    }
}

TEST_CASE("hauptmodul takes the tabulated values at the quadratic points") {
    auto ctx = mp::make_context(45);
    for (const auto& pt : modular::cm_points()) {
        CAPTURE(pt.t_value);
        ApproxComplex t = modular::hauptmodul_t(pt.eval(ctx), ctx);
        CHECK(mp::digits_matched(
                  t, ApproxComplex::of_real(ApproxReal::of_long(pt.t_value, ctx.prec_bits))) >= 40);
    }
    CHECK_THROWS_AS(modular::cm_point(7), domain_error);
}

TEST_CASE("hauptmodul agrees with its q-expansion") {
    auto ctx = mp::make_context(40);
    Tau tau = make_tau(0.1, 0.9, ctx.prec_bits);
    ApproxComplex direct = modular::hauptmodul_t(tau, ctx);
    qexp::QExpansion series = qexp::eta_quotient_qexp(
        {{1, 6}, {2, -6}, {3, 6}, {6, -6}}, 120);
    ApproxComplex via_qexp = -series.eval(tau, ctx, 1e15);
    CHECK(mp::digits_matched(direct, via_qexp) >= 30);
}

TEST_CASE("hauptmodul inversion by damped Newton") {
    auto ctx = mp::make_context(45);
    mpfr_prec_t p = ctx.prec_bits;

    SUBCASE("recovers the t = 16 point from a nearby seed") {
        // t - 16 has a double root here (the point is fixed by an
        // Atkin-Lehner involution), so tau is only determined to about half
        // the working precision by the residual.
        Tau exact = modular::cm_point(16).eval(ctx);
        Tau seed = exact + make_tau(0.02, 0.01, p);
        ApproxComplex target = ApproxComplex::of_real(ApproxReal::of_long(16, p));
        Tau found = modular::invert_t(target, seed, ctx);
        CHECK(mp::digits_matched(found, exact) >= 25);
        // The returned ball's radius carries the same square-root loss, and
        // the roundtrip evaluation is charged both for it and for its
        // transport through the eta powers.
        ApproxComplex roundtrip = modular::hauptmodul_t(found, ctx);
        CHECK(mp::digits_matched(roundtrip, target) >= 15);
    }
    SUBCASE("recovers the t = -2 point from a nearby seed") {
        Tau exact = modular::cm_point(-2).eval(ctx);
        Tau seed = exact + make_tau(0.015, -0.02, p);
        ApproxComplex target = ApproxComplex::of_real(ApproxReal::of_long(-2, p));
        Tau found = modular::invert_t(target, seed, ctx);
        CHECK(mp::digits_matched(found, exact) >= 40);
        ApproxComplex roundtrip = modular::hauptmodul_t(found, ctx);
        CHECK(mp::digits_matched(roundtrip, target) >= 40);
    }
    SUBCASE("roundtrips a generic target") {
        ApproxComplex target(ApproxReal::of_double(-7.25, p), ApproxReal::of_double(0.5, p));
        Tau found = modular::invert_t(target, make_tau(0.05, 0.45, p), ctx);
        ApproxComplex roundtrip = modular::hauptmodul_t(found, ctx);
        CHECK(mp::digits_matched(roundtrip, target) >= 38);
    }
    SUBCASE("unreachable target fails with diagnostics") {
        ApproxComplex target = ApproxComplex::zero(p);
        CHECK_THROWS_AS(modular::invert_t(target, make_tau(0.0, 1.0, p), ctx),
                        convergence_failure);
    }
}

TEST_CASE("periods varpi_1, varpi_2") {
    auto ctx = mp::make_context(45);
    mpfr_prec_t p = ctx.prec_bits;

    SUBCASE("varpi_2 through the Weber form") {
        // varpi_2 = 4 (eta(tau) eta(3 tau) / (f2(tau) f2(3 tau)))^2.
        for (const Tau& tau : sample_points(p)) {
            ApproxComplex tau3 = mp::mul_mpq(tau, ExactRational(3));
            ApproxComplex ratio =
                (modular::eta(tau, ctx) * modular::eta(tau3, ctx)) /
                (modular::weber(WeberKind::f2, tau, ctx) *
                 modular::weber(WeberKind::f2, tau3, ctx));
            ApproxComplex rhs = mp::mul_mpq(mp::pow_si(ratio, 2), ExactRational(4));
            CHECK(mp::digits_matched(modular::varpi(2, tau, ctx), rhs) >= 38);
        }
    }
    SUBCASE("varpi_1 under the level-6 involution") {
        // varpi_1(-1/(6 tau)) = -(3/4) tau^2 varpi_2(tau).
        Tau tau = make_tau(0.15, 0.75, p);
        ApproxComplex lhs =
            modular::varpi(1, -mp::recip(mp::mul_mpq(tau, ExactRational(6))), ctx);
        ApproxComplex rhs =
            mp::mul_mpq(tau * tau * modular::varpi(2, tau, ctx), ExactRational(-3, 4));
        CHECK(mp::digits_matched(lhs, rhs) >= 38);
    }
    SUBCASE("gamma closed form at (3 + sqrt(-15))/6") {
        ApproxComplex v = modular::varpi(2, surd_tau(3, 15, 6, p), ctx);
        ApproxReal gp = special::gamma_mpq(ExactRational(1, 15), p) *
                        special::gamma_mpq(ExactRational(2, 15), p) *
                        special::gamma_mpq(ExactRational(4, 15), p) *
                        special::gamma_mpq(ExactRational(8, 15), p);
        ApproxReal den = mp::mul_long(mp::sqrt_ul(3, p) * mp::pow_si(mp::const_pi(p), 3), 10);
        CHECK(mp::digits_matched(v.re(), gp / den) >= 40);
        CHECK(mp::digits_zero(v.im()) >= 40);
    }
    SUBCASE("gamma closed form at (3 + sqrt(-3))/6") {
        ApproxComplex v = modular::varpi(2, surd_tau(3, 3, 6, p), ctx);
        ApproxReal g13 = special::gamma_mpq(ExactRational(1, 3), p);
        ApproxReal num = mp::mul_long(mp::pow_si(g13, 6), 24);
        ApproxReal den = mp::pow_mpq(ApproxReal::of_long(2, p), ExactRational(17, 3)) *
                         mp::pow_si(mp::const_pi(p), 4);
        CHECK(mp::digits_matched(v.re(), num / den) >= 40);
    }
    SUBCASE("proportionality chain among the order-3 points") {
        // ((1 - sqrt(-3))/2) varpi_2((-3+sqrt(-3))/12) = varpi_2((3+sqrt(-3))/6)
        //   = 4 varpi_2(sqrt(-3)/6) = 2 varpi_2(sqrt(-3)/3).
        ApproxComplex v_tau2 = modular::varpi(2, surd_tau(-3, 3, 12, p), ctx);
        ApproxComplex v_tau4 = modular::varpi(2, surd_tau(3, 3, 6, p), ctx);
        ApproxComplex v_tau3 = modular::varpi(2, surd_tau(0, 3, 6, p), ctx);
        ApproxComplex v_tau1 = modular::varpi(2, surd_tau(0, 3, 3, p), ctx);
        ApproxComplex half(ApproxReal::of_mpq(ExactRational(1, 2), p),
                           mp::mul_mpq(mp::sqrt_ul(3, p), ExactRational(-1, 2)));
        CHECK(mp::digits_matched(half * v_tau2, v_tau4) >= 38);
        CHECK(mp::digits_matched(v_tau4, mp::mul_mpq(v_tau3, ExactRational(4))) >= 38);
        CHECK(mp::digits_matched(v_tau4, mp::mul_mpq(v_tau1, ExactRational(2))) >= 38);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(modular::varpi(3, make_tau(0, 1, p), ctx), domain_error);
    }
}

TEST_CASE("eta moduli at the order-3 points match the gamma closed forms") {
    auto ctx = mp::make_context(45);
    mpfr_prec_t p = ctx.prec_bits;
    ApproxReal g32 = mp::pow_mpq(special::gamma_mpq(ExactRational(1, 3), p),
                                 ExactRational(3, 2));
    ApproxReal two_pi = mp::mul_2si(mp::const_pi(p), 1);
    ApproxReal three = ApproxReal::of_long(3, p);

    ApproxComplex a = modular::eta(surd_tau(3, 3, 2, p), ctx);
    CHECK(mp::digits_matched(mp::abs_ball(a),
                             mp::pow_mpq(three, ExactRational(1, 8)) * g32 / two_pi) >= 40);

    ApproxComplex b = modular::eta(surd_tau(3, 3, 6, p), ctx);
    CHECK(mp::digits_matched(mp::abs_ball(b),
                             mp::pow_mpq(three, ExactRational(3, 8)) * g32 / two_pi) >= 40);
}
