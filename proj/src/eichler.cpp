#include "feynmod/eichler.hpp"

#include <algorithm>
#include <cmath>

#include "feynmod/errors.hpp"
#include "feynmod/quad.hpp"
#include "feynmod/special.hpp"

namespace feynmod::eichler {
namespace {

using mp::ApproxComplex;
using mp::ApproxReal;
using mp::Mag;

constexpr long kTermCap = 2000000;

// Canonicalized rational (the two-argument mpq_class constructor does not
// reduce to lowest terms on its own).
mpq_class rq(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// Upper bound rho^n by binary exponentiation (valid for any Mag).
Mag mag_pow(Mag rho, long n) {
    Mag out = Mag::from_d(1.0);
    while (n > 0) {
        if (n & 1) out = out * rho;
        rho = rho * rho;
        n >>= 1;
    }
    return out;
}

// e^{2 pi i tau}; domain_error unless the ball lies in the upper half plane.
ApproxComplex q_of_tau(const Tau& tau, mpfr_prec_t wp) {
    if (!tau.im().definitely_positive())
        throw domain_error("eichler: tau is not in the upper half plane");
    ApproxReal two_pi = mul_2si(mp::const_pi(wp), 1);
    return exp_ball(ApproxComplex(-(two_pi * tau.im()), two_pi * tau.re()));
}

// Upper bound of 1/(1 - |w|); convergence_failure if |w| is not surely < 1.
Mag geom_factor(const ApproxComplex& w) {
    ApproxReal gap = add_long(-abs_ball(w), 1);
    if (!gap.definitely_positive())
        throw convergence_failure("eichler: |q| too close to 1 at this precision");
    return recip(gap).abs_upper();
}

// Im(cot(z) + i) for w = e^{2iz}: cot + i = -2i w/(1-w), whose imaginary
// part is -2 Re(w/(1-w)).
ApproxReal im_cpi_of_w(const ApproxComplex& w, mpfr_prec_t wp) {
    ApproxComplex ratio = w / (ApproxComplex::of_real(ApproxReal::of_long(1, wp)) - w);
    return -mul_2si(ratio.re(), 1);
}

// Lambert-type sum  sum n^{-s} w^n / (1 -+ w^n)  over n >= 1 (step 2 when
// odd_only), with the geometric tail charged to the radius.
ApproxComplex lambert_sum(long s, const ApproxComplex& w, bool plus_sign,
                          bool odd_only, mpfr_prec_t wp) {
    Mag rho = w.abs_upper();
    Mag inv_gap = geom_factor(w);
    double lr = std::log2(std::max(rho.to_double(), 1e-300));
    double lg = std::log2(inv_gap.to_double());
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, wp));
    ApproxComplex sum = ApproxComplex::zero(wp);
    ApproxComplex wn = one;
    long last = 0;
    for (long n = 1;; ++n) {
        wn = wn * w;
        if (odd_only && (n % 2 == 0)) continue;
        ApproxComplex den = plus_sign ? one + wn : one - wn;
        ApproxComplex term = wn * recip(den);
        for (long j = 0; j < s; ++j) term = mul_mpq(term, mpq_class(1, n));
        sum += term;
        last = n;
        // Envelope |w|^{n+1}/(1-|w|) below the target ends the loop.
        if ((n + 1) * lr + lg < -(static_cast<double>(wp) + 16)) break;
        if (n >= kTermCap)
            throw convergence_failure("eichler: Lambert series needs too many terms");
    }
    // Tail: sum_{n>last} |w|^n/((1-|w|) n^s) <= |w|^{last+1} inv_gap^2 /
    // (last+1)^s, and the same bound holds for the 1+w^n denominator.
    double inv_ns_up = std::pow(static_cast<double>(last + 1),
                                -static_cast<double>(s)) * (1.0 + 1e-9);
    Mag tail = mag_pow(rho, last + 1) * inv_gap * inv_gap * Mag::from_d(inv_ns_up);
    ApproxComplex out = sum;
    out.widen(tail);
    return out;
}

// sum_{m>=1} weight(m) * Im cpi(w_m) / m^3 with w_m = W^m * phase[m mod 6],
// |weight| <= wmax.  Covers the quad-lattice sums (trivial weight), the
// mod-6 weighted direct sums, and the stretched sieve sums.
ApproxReal weighted_cpi_sum(const ApproxComplex& W,
                            const std::vector<ApproxComplex>& phase,
                            const std::vector<long>& weight_by_class,
                            bool weight_follows_n, mpfr_prec_t wp) {
    Mag rho = W.abs_upper();
    Mag inv_gap = geom_factor(W);
    double lr = std::log2(std::max(rho.to_double(), 1e-300));
    double lg = std::log2(inv_gap.to_double());
    long wmax = 1;
    for (long v : weight_by_class) wmax = std::max(wmax, std::labs(v));
    double lw = std::log2(static_cast<double>(wmax));
    ApproxReal sum = ApproxReal::zero(wp);
    ApproxComplex Wm = ApproxComplex::of_real(ApproxReal::of_long(1, wp));
    long last = 0;
    for (long m = 1;; ++m) {
        Wm = Wm * W;
        ApproxReal inner = ApproxReal::zero(wp);
        if (weight_follows_n) {
            // Single class per m: weight indexed by m mod 6.
            long wgt = weight_by_class[static_cast<size_t>(m % 6)];
            if (wgt != 0) inner = mul_long(im_cpi_of_w(Wm, wp), wgt);
        } else {
            for (size_t r = 0; r < phase.size(); ++r) {
                long wgt = weight_by_class[r];
                if (wgt == 0) continue;
                inner += mul_long(im_cpi_of_w(Wm * phase[r], wp), wgt);
            }
        }
        sum += mul_mpq(inner, mpq_class(1, m) * mpq_class(1, m) * mpq_class(1, m));
        last = m;
        if ((m + 1) * lr + lg + lw + 4 < -(static_cast<double>(wp) + 16)) break;
        if (m >= kTermCap)
            throw convergence_failure("eichler: lattice sum needs too many terms");
    }
    // |Im cpi| <= 2|w|/(1-|w|); classes contribute at most 6 wmax each m.
    double inv_m3_up = std::pow(static_cast<double>(last + 1), -3.0) * (1.0 + 1e-9);
    double classes = static_cast<double>(phase.empty() ? 1 : phase.size());
    Mag tail = mag_pow(rho, last + 1) * inv_gap * inv_gap *
               Mag::from_d(2.0 * static_cast<double>(wmax) * classes) *
               Mag::from_d(inv_m3_up);
    sum.widen(tail);
    return sum;
}

// W = e^{2 pi i (p1 + i y1)} for exact rational p1 and y1 = sqrt(d) * y_rat.
ApproxComplex base_point(const mpq_class& p1, unsigned long d,
                         const mpq_class& y_rat, mpfr_prec_t wp) {
    ApproxReal two_pi = mul_2si(mp::const_pi(wp), 1);
    ApproxReal y1 = mul_mpq(mp::sqrt_ul(d, wp), y_rat);
    return exp_ball(ApproxComplex(-(two_pi * y1), two_pi * mul_mpq(
                                      ApproxReal::of_long(1, wp), p1)));
}

// The sixth roots of unity e^{2 pi i r/6}, r = 0..5 (exact up to sqrt(3)).
std::vector<ApproxComplex> sixth_roots(mpfr_prec_t wp) {
    ApproxReal half = ApproxReal::of_mpq(mpq_class(1, 2), wp);
    ApproxReal s3h = mul_2si(mp::sqrt_ul(3, wp), -1);
    ApproxReal one = ApproxReal::of_long(1, wp);
    ApproxReal zero = ApproxReal::zero(wp);
    return {ApproxComplex(one, zero),   ApproxComplex(half, s3h),
            ApproxComplex(-half, s3h),  ApproxComplex(-one, zero),
            ApproxComplex(-half, -s3h), ApproxComplex(half, -s3h)};
}

std::vector<long> psi_table_vec() {
    const auto& t = PsiWeight::table();
    return std::vector<long>(t.begin(), t.end());
}

void require_pos_def(const qexp::BQF& form) {
    if (form.a <= 0 || form.c <= 0 || form.discriminant() >= 0)
        throw domain_error("eichler: form is not positive definite");
}

ApproxReal zeta3(mpfr_prec_t wp) { return special::zeta_ui(3, wp); }

}  // namespace

long PsiWeight::value(long n) {
    return table()[static_cast<size_t>(((n % 6) + 6) % 6)];
}

const std::array<long, 6>& PsiWeight::table() {
    static const std::array<long, 6> t = {-5760, -48, 720, 384, 720, -48};
    return t;
}

ApproxComplex grosswald_F(long s, const Tau& tau,
                          const mp::PrecisionContext& ctx) {
    if (s < 3 || s % 2 == 0)
        throw domain_error("grosswald_F: s must be odd and >= 3");
    mpfr_prec_t wp = ctx.prec_bits + 32;
    return lambert_sum(s, q_of_tau(tau, wp), /*plus_sign=*/false,
                       /*odd_only=*/false, wp);
}

ApproxComplex grosswald_F_integral(const Tau& tau,
                                   const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    if (!tau.im().definitely_positive() ||
        !(tau.im() - ApproxReal::of_mpq(mpq_class(9, 20), wp)).definitely_positive())
        throw domain_error("grosswald_F_integral: Im tau must exceed 0.45");
    // Truncation height: the integrand envelope 400 y^2 e^{-2 pi (Im tau+y)}
    // must drop below the precision target past Y.
    double Y = (static_cast<double>(wp) * 0.6931471805599453 + 45.0) /
               6.283185307179586;
    Y = std::ceil(Y);
    auto inner_ctx = mp::make_context(
        std::min<long>(100000, ctx.decimal_digits + 10));
    ApproxReal a = ApproxReal::zero(inner_ctx.prec_bits);
    ApproxReal b = ApproxReal::of_long(static_cast<long>(Y), inner_ctx.prec_bits);
    ApproxComplex J = quad::integrate_ts(
        [&](const ApproxReal& y) {
            ApproxComplex z(tau.re(), tau.im() + y);
            ApproxComplex e4 = modular::eisenstein_eval(4, z, inner_ctx);
            ApproxComplex em1 =
                e4 - ApproxComplex::of_real(ApproxReal::of_long(1, e4.re().prec()));
            return em1 * (y * y);
        },
        a, b, inner_ctx);
    // Tail of the y-integral: |E_4(w) - 1| <= 400 e^{-2 pi Im w} once
    // Im w >= 0.45, and int_Y^inf y^2 e^{-2 pi y} dy =
    // e^{-2 pi Y}(Y^2/(2 pi) + 2Y/(2 pi)^2 + 2/(2 pi)^3).
    {
        ApproxReal two_pi = mul_2si(mp::const_pi(wp), 1);
        ApproxReal Yb = ApproxReal::of_long(static_cast<long>(Y), wp);
        ApproxReal poly = Yb * Yb / two_pi +
                          mul_2si(Yb, 1) / (two_pi * two_pi) +
                          mul_2si(recip(two_pi * two_pi * two_pi), 1);
        ApproxReal envelope =
            mul_long(exp_ball(-(two_pi * (tau.im() + Yb))) * poly, 400);
        J.widen(envelope.abs_upper());
    }
    // (2 pi i)^3 (B_4/16) * (-i) = -pi^3 B_4 / 2 = pi^3/60, applied to J.
    mpq_class rat = special::bernoulli(4) / mpq_class(-2);
    ApproxReal pref = mul_mpq(pow_si(mp::const_pi(wp), 3), rat);
    return J * pref;
}

ApproxComplex inversion_defect(const Tau& tau, const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    ApproxComplex f_tau = grosswald_F(3, tau, ctx);
    ApproxComplex f_inv = grosswald_F(3, -recip(tau), ctx);
    ApproxComplex tau2 = tau * tau;
    ApproxReal z3 = zeta3(wp);
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, wp));
    ApproxComplex defect = f_tau - tau2 * f_inv - mul_2si((tau2 - one) * z3, -1);
    // (2 pi i)^3/(2 tau) * sum_j B_{2j} B_{4-2j} tau^{2j} / ((2j)!(4-2j)!)
    ApproxComplex poly = ApproxComplex::zero(wp);
    const long fact[5] = {1, 1, 2, 6, 24};
    for (long j = 0; j <= 2; ++j) {
        mpq_class cj = special::bernoulli(2 * j) * special::bernoulli(4 - 2 * j) /
                       (mpq_class(fact[2 * j]) * mpq_class(fact[4 - 2 * j]));
        poly += mul_mpq(pow_si(tau, 2 * j), cj);
    }
    ApproxReal pi3 = pow_si(mp::const_pi(wp), 3);
    // -(2 pi i)^3/(2 tau) = -(-8 pi^3 i)/(2 tau) = +4 pi^3 i / tau.
    ApproxComplex front = mul_i(ApproxComplex::of_real(mul_2si(pi3, 2)));
    return defect + front * poly * recip(tau);
}

ApproxComplex halfshift_defect(const Tau& tau, const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    ApproxComplex half = ApproxComplex::of_real(ApproxReal::of_mpq(mpq_class(1, 2), wp));
    ApproxComplex d = grosswald_F(3, tau + half, ctx) + grosswald_F(3, tau, ctx);
    d = d - mul_mpq(grosswald_F(3, mul_2si(tau, 1), ctx), mpq_class(9, 4));
    return d + mul_mpq(grosswald_F(3, mul_2si(tau, 2), ctx), mpq_class(1, 4));
}

std::vector<std::pair<std::string, ApproxComplex>> f3_chain_sqrtm15(
    const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    ApproxReal s15 = mp::sqrt_ul(15, wp);
    ApproxReal s3 = mp::sqrt_ul(3, wp);
    ApproxReal pi3 = pow_si(mp::const_pi(wp), 3);
    ApproxReal z3 = zeta3(wp);
    auto at = [&](const mpq_class& re, const ApproxReal& im_line,
                  const mpq_class& im_scale) {
        return Tau(mul_mpq(ApproxReal::of_long(1, wp), re),
                   mul_mpq(im_line, im_scale));
    };
    auto F = [&](const Tau& t) { return grosswald_F(3, t, ctx); };

    // F_3 at the eight sqrt(-15) points in play.
    ApproxComplex f_6h = F(at(mpq_class(1, 2), s15, mpq_class(1, 6)));
    ApproxComplex f_4q = F(at(mpq_class(1, 4), s15, mpq_class(1, 4)));
    ApproxComplex f_4qm = F(at(mpq_class(-1, 4), s15, mpq_class(1, 4)));
    ApproxComplex f_3 = F(at(0, s15, mpq_class(1, 3)));
    ApproxComplex f_85 = F(at(mpq_class(5, 8), s15, mpq_class(1, 8)));
    ApproxComplex f_81 = F(at(mpq_class(1, 8), s15, mpq_class(1, 8)));
    ApproxComplex f_2h = F(at(mpq_class(1, 2), s15, mpq_class(1, 2)));
    ApproxComplex f_1 = F(at(0, s15, mpq_class(1, 1)));

    std::vector<std::pair<std::string, ApproxComplex>> out;
    auto cx = [&](const mpq_class& re, const mpq_class& im15) {
        return ApproxComplex(mul_mpq(ApproxReal::of_long(1, wp), re),
                             mul_mpq(s15, im15));
    };

    // step1: 24 F(s/6+1/2) = (-4+4i s15) F(s/4+1/4)
    //        + ((37 s15 - 81 i)/270) pi^3 + (-14+2i s15) zeta(3).
    out.emplace_back(
        "step1",
        mul_mpq(f_6h, 24) - cx(-4, 4) * f_4q -
            ApproxComplex(mul_mpq(s15, rq(37, 270)),
                          mul_mpq(ApproxReal::of_long(1, wp), rq(-81, 270))) *
                pi3 -
            cx(-14, 2) * z3);
    // step2: -3 F(s/3) = (2-2i s15) F(s/8+5/8)
    //        - ((97 s15 - 621 i)/4320) pi^3 - ((2 i s15 - 5)/2) zeta(3).
    out.emplace_back(
        "step2",
        mul_mpq(f_3, -3) - cx(2, -2) * f_85 +
            ApproxComplex(mul_mpq(s15, rq(97, 4320)),
                          mul_mpq(ApproxReal::of_long(1, wp), rq(-621, 4320))) *
                pi3 +
            cx(mpq_class(-5, 2), 1) * z3);
    // step3: the half-shift law specialised at s/8 + 1/8.
    out.emplace_back("step3",
                     f_85 + f_81 - mul_mpq(f_4q, mpq_class(9, 4)) +
                         mul_mpq(f_2h, mpq_class(1, 4)));
    // step4: F(s/8+1/8) = ((i s15 - 7)/32) F(s/2+1/2)
    //        + ((392 s15 - 72 i)/61440) pi^3 + ((i s15 - 39)/64) zeta(3).
    out.emplace_back(
        "step4",
        f_81 - cx(mpq_class(-7, 32), mpq_class(1, 32)) * f_2h -
            ApproxComplex(mul_mpq(s15, rq(392, 61440)),
                          mul_mpq(ApproxReal::of_long(1, wp), rq(-72, 61440))) *
                pi3 -
            cx(mpq_class(-39, 64), mpq_class(1, 64)) * z3);
    // step5: F(s) - 9 F(s/2+1/2) + 4 F(s/4+1/4) + 4 F(s/4-1/4) = 0.
    out.emplace_back("step5", f_1 - mul_mpq(f_2h, 9) + mul_mpq(f_4q, 4) +
                                  mul_mpq(f_4qm, 4));
    // final15: 24 F(s/6+1/2) - 8 F(s/2+1/2) - 3 F(s/3) + F(s)
    //          = pi^3/sqrt(15) - 7 zeta(3).
    out.emplace_back(
        "final15",
        mul_mpq(f_6h, 24) - mul_mpq(f_2h, 8) - mul_mpq(f_3, 3) + f_1 -
            ApproxComplex::of_real(pi3 / s15 - mul_long(z3, 7)));
    // combo3: 8(3F(t/6) - F(t/2)) - 9(3F(t/3) - F(t)) = 7 sqrt(3) pi^3/135
    //         + zeta(3) on the sqrt(-3) line.
    ApproxComplex g_6 = F(at(0, s3, mpq_class(1, 6)));
    ApproxComplex g_2 = F(at(0, s3, mpq_class(1, 2)));
    ApproxComplex g_3 = F(at(0, s3, mpq_class(1, 3)));
    ApproxComplex g_1 = F(at(0, s3, mpq_class(1, 1)));
    out.emplace_back(
        "combo3",
        mul_mpq(mul_mpq(g_6, 3) - g_2, 8) - mul_mpq(mul_mpq(g_3, 3) - g_1, 9) -
            ApproxComplex::of_real(mul_mpq(s3 * pi3, mpq_class(7, 135)) + z3));
    return out;
}

ApproxComplex xi_cotangent(long s, const Tau& tau,
                           const mp::PrecisionContext& ctx) {
    if (s < 3 || s % 2 == 0)
        throw domain_error("xi_cotangent: s must be odd and >= 3");
    mpfr_prec_t wp = ctx.prec_bits + 32;
    ApproxReal zs = special::zeta_ui(static_cast<unsigned long>(s), wp);
    ApproxComplex f = grosswald_F(s, tau, ctx);
    // cot = -i + (cot + i): the -i parts sum to -i zeta(s), the rest is 2F_s.
    return -mul_i(ApproxComplex::of_real(zs) + mul_2si(f, 1));
}

ApproxComplex tan_odd_sum(long s, const Tau& tau,
                          const mp::PrecisionContext& ctx) {
    if (s < 3 || s % 2 == 0)
        throw domain_error("tan_odd_sum: s must be odd and >= 3");
    mpfr_prec_t wp = ctx.prec_bits + 32;
    ApproxComplex lam =
        lambert_sum(s, q_of_tau(tau, wp), /*plus_sign=*/true, /*odd_only=*/true, wp);
    mpq_class half_pow(1, 2);
    for (long j = 1; j < s; ++j) half_pow /= 2;
    ApproxReal zs = special::zeta_ui(static_cast<unsigned long>(s), wp);
    // tan = i - 2i q^n/(1+q^n); the i parts sum over odd n to i(1-2^{-s})zeta(s).
    return mul_i(ApproxComplex::of_real(mul_mpq(zs, mpq_class(1) - half_pow)) -
                 mul_2si(lam, 1));
}

ApproxReal psi_dirichlet_sum(long s, const mp::PrecisionContext& ctx) {
    if (s < 2) throw domain_error("psi_dirichlet_sum: s must be >= 2");
    mpfr_prec_t wp = ctx.prec_bits + 32;
    mpq_class p2(1), p3(1), p6(1);
    for (long j = 0; j < s; ++j) { p2 /= 2; p3 /= 3; p6 /= 6; }
    mpq_class bracket = mpq_class(1) - 16 * p2 - 9 * p3 + 144 * p6;
    bracket *= -48;
    return mul_mpq(special::zeta_ui(static_cast<unsigned long>(s), wp), bracket);
}

ApproxReal sum_recip_quadratic_Z(long A, long B, long C, mpfr_prec_t prec) {
    if (A < 1) throw domain_error("sum_recip_quadratic_Z: need A >= 1");
    mpz_class disc = 4 * mpz_class(A) * mpz_class(C) - mpz_class(B) * mpz_class(B);
    if (disc <= 0)
        throw domain_error("sum_recip_quadratic_Z: quadratic has real roots");
    mpfr_prec_t wp = prec + 32;
    ApproxReal sq = sqrt_ball(ApproxReal::of_mpz(disc, wp));
    ApproxReal p = mul_mpq(ApproxReal::of_long(1, wp), rq(B, 2 * A));
    ApproxReal y = div_long(sq, 2 * A);
    ApproxComplex cpi = mp::cot_plus_i(mp::const_pi(wp) * ApproxComplex(p, y));
    // 2 pi (1 - Im cpi)/sqrt(4AC - B^2).
    ApproxReal one_minus = add_long(-cpi.im(), 1);
    return mul_2si(mp::const_pi(wp) * one_minus / sq, 1);
}

ApproxReal quad_lattice_sum(const qexp::BQF& form,
                            const mp::PrecisionContext& ctx) {
    require_pos_def(form);
    mpfr_prec_t wp = ctx.prec_bits + 32;
    unsigned long D = static_cast<unsigned long>(-form.discriminant());
    // W = e^{2 pi i theta}, theta = (b + i sqrt(D))/(2c).
    ApproxComplex W = base_point(rq(form.b, 2 * form.c), D,
                                 rq(1, 2 * form.c), wp);
    ApproxReal corr = weighted_cpi_sum(W, {}, {1, 1, 1, 1, 1, 1},
                                       /*weight_follows_n=*/true, wp);
    ApproxReal sq = mp::sqrt_ul(D, wp);
    return mul_2si(mp::const_pi(wp) / sq, 1) * (zeta3(wp) - corr);
}

ApproxReal sieve_defect(const qexp::BQF& form, const mp::PrecisionContext& ctx) {
    require_pos_def(form);
    mpfr_prec_t wp = ctx.prec_bits + 32;
    unsigned long D = static_cast<unsigned long>(-form.discriminant());
    long c = form.c, b = form.b;
    // Left side, residue classes mod 6:
    // -(1/48) sum_m m^{-2} sum_{n in Z} psi(n)/Q(m,n)
    //   = (28 pi/sqrt(D)) zeta(3) + (pi/(144 sqrt(D))) sum_{m,r} psi(r)
    //     Im cpi(pi(p+iy))/m^3, p = bm/(12c)+r/6, y = m sqrt(D)/(12c).
    ApproxComplex WL = base_point(rq(b, 12 * c), D, rq(1, 12 * c), wp);
    ApproxReal lhs_corr = weighted_cpi_sum(WL, sixth_roots(wp), psi_table_vec(),
                                           /*weight_follows_n=*/false, wp);
    // Right side, the four divisor stretches d | 6 with weights e_d:
    //   (28 pi/sqrt(D)) zeta(3) - (2 pi/sqrt(D)) sum_d (e_d/d) sum_m
    //     Im cpi(pi(p+iy))/m^3, p = bm/(2cd), y = m sqrt(D)/(2cd).
    ApproxReal rhs_corr = ApproxReal::zero(wp);
    const std::pair<long, long> stretches[4] = {{1, 1}, {2, -16}, {3, -9}, {6, 144}};
    for (const auto& [d, e] : stretches) {
        ApproxComplex Wd =
            base_point(rq(b, 2 * c * d), D, rq(1, 2 * c * d), wp);
        ApproxReal s = weighted_cpi_sum(Wd, {}, {1, 1, 1, 1, 1, 1},
                                        /*weight_follows_n=*/true, wp);
        rhs_corr += mul_mpq(s, rq(e, d));
    }
    // The closed 28 pi zeta(3)/sqrt(D) parts agree identically on both sides
    // and cancel before any rounding; the residual is the correction part
    //   (pi/sqrt(D)) (lhs_corr/144 + 2 rhs_corr).
    ApproxReal sq = mp::sqrt_ul(D, wp);
    return (mp::const_pi(wp) / sq) *
           (mul_mpq(lhs_corr, mpq_class(1, 144)) + mul_2si(rhs_corr, 1));
}

std::pair<ApproxComplex, ApproxComplex> poisson_pair(
    int id, const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    qexp::BQF form{};
    mpq_class re0;
    mpq_class im_scale;  // tau0 = re0 + i sqrt(15) * im_scale
    bool half_pref = false;  // pi/sqrt(15) vs 2 pi/sqrt(15)
    switch (id) {
        case 1: form = {24, 6, 1}; re0 = 0; im_scale = mpq_class(1, 1); half_pref = true; break;
        case 2: form = {6, 3, 1}; re0 = mpq_class(1, 2); im_scale = mpq_class(1, 2); break;
        case 3: form = {8, 6, 3}; re0 = 0; im_scale = mpq_class(1, 3); half_pref = true; break;
        case 4: form = {2, 3, 3}; re0 = mpq_class(1, 2); im_scale = mpq_class(1, 6); break;
        default: throw domain_error("poisson_pair: id must be 1..4");
    }
    ApproxReal lhs = quad_lattice_sum(form, ctx);
    ApproxReal s15 = mp::sqrt_ul(15, wp);
    Tau tau0(mul_mpq(ApproxReal::of_long(1, wp), re0), mul_mpq(s15, im_scale));
    ApproxComplex rhs = mul_2si(grosswald_F(3, tau0, ctx), 1) +
                        ApproxComplex::of_real(zeta3(wp));
    ApproxReal pref = mp::const_pi(wp) / s15;
    if (!half_pref) pref = mul_2si(pref, 1);
    return {ApproxComplex::of_real(lhs), rhs * pref};
}

ApproxReal lattice_T(LatticeMode mode, const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    if (mode == LatticeMode::chain) {
        // T = (QL(24,6,1) - 4 QL(6,3,1) - 3 QL(8,6,3) + 12 QL(2,3,3)) / 2.
        ApproxReal t = quad_lattice_sum({24, 6, 1}, ctx);
        t -= mul_long(quad_lattice_sum({6, 3, 1}, ctx), 4);
        t -= mul_long(quad_lattice_sum({8, 6, 3}, ctx), 3);
        t += mul_long(quad_lattice_sum({2, 3, 3}, ctx), 12);
        return mul_2si(t, -1);
    }
    // Direct: 7 pi zeta(3)/sqrt(15)
    //   + (pi/(576 sqrt(15))) sum_{m,r} psi(r) Im cpi(pi(p+iy))/m^3,
    // p = m/2 + r/6, y = m sqrt(15)/6.
    ApproxComplex W = base_point(mpq_class(1, 2), 15, mpq_class(1, 6), wp);
    ApproxReal corr = weighted_cpi_sum(W, sixth_roots(wp), psi_table_vec(),
                                       /*weight_follows_n=*/false, wp);
    ApproxReal s15 = mp::sqrt_ul(15, wp);
    ApproxReal pi_ = mp::const_pi(wp);
    return mul_long(pi_ * zeta3(wp) / s15, 7) +
           mul_mpq(pi_ / s15 * corr, mpq_class(1, 576));
}

ApproxReal lattice_S(LatticeMode mode, const mp::PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.prec_bits + 32;
    if (mode == LatticeMode::chain) {
        // S = T + 5 zeta(4).
        return lattice_T(LatticeMode::chain, ctx) +
               mul_long(special::zeta_ui(4, wp), 5);
    }
    // Direct: (32 pi/sqrt(15)) zeta(3)
    //   - (pi/sqrt(15)) sum_{n>=1} psi(n) Im cpi(pi n sigma)/n^3,
    // sigma = (3 + i sqrt(15))/24.
    ApproxComplex W = base_point(rq(3, 24), 15, mpq_class(1, 24), wp);
    ApproxReal corr = weighted_cpi_sum(W, {}, psi_table_vec(),
                                       /*weight_follows_n=*/true, wp);
    ApproxReal s15 = mp::sqrt_ul(15, wp);
    ApproxReal pi_ = mp::const_pi(wp);
    return mul_long(pi_ * zeta3(wp) / s15, 32) - pi_ / s15 * corr;
}

}  // namespace feynmod::eichler
