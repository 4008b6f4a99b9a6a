#include "feynmod/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "feynmod/errors.hpp"
#include "feynmod/special.hpp"

namespace feynmod::lfun {
namespace {

using mp::bits_for_digits;
using mp::Mag;
using mp::make_context;

mpq_class rq(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

bool squarefree(long m) {
    m = std::labs(m);
    for (long p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0) return false;
    }
    return true;
}

// Fundamental discriminant: d = 1 mod 4 squarefree, or d = 4m with
// m = 2, 3 mod 4 squarefree.  d = 1 (trivial character) is excluded.
bool is_fundamental(long d) {
    if (d == 0 || d == 1) return false;
    long r4 = ((d % 4) + 4) % 4;
    if (r4 == 1) return squarefree(d);
    if (r4 != 0) return false;
    long m = d / 4;
    long rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && squarefree(m);
}

long factorial_long(long n) {
    long f = 1;
    for (long j = 2; j <= n; ++j) f *= j;
    return f;
}

// Upper incomplete gamma of integer order m >= -1 at x > 0.
ApproxReal upper_gamma_int(long m, const ApproxReal& x) {
    if (m >= 1) return special::gamma_upper_ui(static_cast<unsigned long>(m), x);
    if (m == 0) return special::exp_integral_e1(x);
    if (m == -1) return special::gamma_upper_neg1(x);
    throw domain_error("upper_gamma_int: order below -1 is not supported");
}

struct FormCacheEntry {
    long order = 0;
    qexp::QExpansion series = qexp::QExpansion::zero(mpq_class(0));
};

// Read-mostly shared coefficient cache: regenerate only when a caller needs
// more terms than are stored.
qexp::QExpansion cached_newform(FormId id, long min_order) {
    static std::mutex mu;
    static std::map<FormId, FormCacheEntry> cache;
    std::lock_guard<std::mutex> lock(mu);
    FormCacheEntry& e = cache[id];
    if (e.order < min_order) {
        long n = std::max<long>(min_order + min_order / 4, 64);
        e.series = qexp::newform_qexp(id, n);
        e.order = n;
    }
    return e.series;
}

long coeff_long(const qexp::QExpansion& s, long n) {
    mpq_class c = s.coefficient(mpq_class(n));
    if (c.get_den() != 1)
        throw verification_error("newform coefficient is not an integer");
    return c.get_num().get_si();
}

// Number of expansion terms M such that the rigorous tail bound
//   2 K (M+1)^{2k+2} e^{-cmin (M+1)} (1 + 2/cmin)
// sinks below 10^{-(D+6)}, where K collects the incomplete-gamma and
// prefactor growth (see tail_bound below).  Solved by fixed-point iteration.
long afe_term_count(long digits, long k, double cmin, double lnK) {
    double target = (static_cast<double>(digits) + 6.0) * std::log(10.0);
    double M = std::max(16.0, target / cmin);
    for (int it = 0; it < 5; ++it) {
        M = (target + lnK + (2.0 * k + 2.0) * std::log(M)) / cmin;
        M = std::max(M, 16.0);
    }
    double floorM = 4.0 * (2.0 * k + 2.0) / cmin + 16.0;
    return static_cast<long>(std::ceil(std::max(M, floorM)));
}

// The two split sums S1(A), S2(A) of the completed-L expansion, so that
// Lambda(s; A) = S1 + eps S2.  Also returns a Mag bounding the dropped tail
// of either sum.  |a_n| <= n^{(k+1)/2} (divisor bound) and, for every order
// m in [-1, k+1] occurring here,
//   (sqrt(N)/(2pi n))^m Gamma(m, c n) <= (k+1)! (1 + cmax n)^{k+2} e^{-cmin n}
// once cmax n >= 1, which gives the (M+1)^{2k+2} master bound used below.
void afe_sums(FormId id, long s, const mpq_class& split, long digits,
              mpfr_prec_t prec, ApproxReal* out_s1, ApproxReal* out_s2,
              Mag* out_tail) {
    const NewformData data = form_data(id);
    const long k = data.weight;
    if (s < 1 || k - s < -1)
        throw domain_error("modular L supports 1 <= s <= weight + 1 only");
    if (split <= 0) throw domain_error("split parameter must be positive");

    mpq_class inv_split(split.get_den(), split.get_num());
    inv_split.canonicalize();
    const double a_d = mpq_get_d(split.get_mpq_t());
    const double sqn = std::sqrt(static_cast<double>(data.level));
    const double cmax = 2.0 * M_PI * std::max(a_d, 1.0 / a_d) / sqn;
    const double cmin = 2.0 * M_PI * std::min(a_d, 1.0 / a_d) / sqn;
    const double lnK = std::log(static_cast<double>(factorial_long(k + 1))) +
                       (k + 2.0) * std::log(2.0 * std::max(cmax, 1.0)) +
                       std::log1p(2.0 / cmin) + std::log(2.0);
    const long M = afe_term_count(digits, k, cmin, lnK);

    const qexp::QExpansion form = cached_newform(id, M + 1);
    const ApproxReal two_pi = mp::mul_2si(mp::const_pi(prec), 1);
    const ApproxReal sqrt_n = mp::sqrt_ul(static_cast<unsigned long>(data.level), prec);
    const ApproxReal c1 = mul_mpq(two_pi, split) / sqrt_n;
    const ApproxReal c2 = mul_mpq(two_pi, inv_split) / sqrt_n;
    const ApproxReal base = sqrt_n / two_pi;

    ApproxReal s1 = ApproxReal::zero(prec);
    ApproxReal s2 = ApproxReal::zero(prec);
    for (long n = 1; n <= M; ++n) {
        long an = coeff_long(form, n);
        if (an == 0) continue;
        const ApproxReal bn = base / ApproxReal::of_long(n, prec);
        const ApproxReal t1 = pow_si(bn, s) * upper_gamma_int(s, mul_long(c1, n));
        const ApproxReal t2 =
            pow_si(bn, k - s) * upper_gamma_int(k - s, mul_long(c2, n));
        s1 += mul_long(t1, an);
        s2 += mul_long(t2, an);
    }

    // Rigorous bound on either dropped tail (computed in ball arithmetic to
    // avoid double underflow at high precision).  cmin is rounded down so the
    // exponential is never understated, and the constant carries slack for
    // the double-precision assembly of K.
    ApproxReal mb = ApproxReal::of_long(M + 1, prec);
    ApproxReal bound = exp_ball(
        mul_long(mb, -1) * ApproxReal::of_double(cmin * (1.0 - 1e-9), 64));
    bound = bound * pow_si(mb, 2 * k + 2);
    bound = bound * ApproxReal::of_double(std::exp(lnK) * (1.0 + 2.0 / cmin) * 2.5, 64);
    *out_tail = bound.abs_upper();
    *out_s1 = s1;
    *out_s2 = s2;
}

int fricke_sign_impl(FormId id, long digits) {
    const mpfr_prec_t prec = bits_for_digits(digits) + 32;
    ApproxReal s1a, s2a, s1b, s2b;
    Mag tail_a, tail_b;
    afe_sums(id, 2, mpq_class(1), digits, prec, &s1a, &s2a, &tail_a);
    afe_sums(id, 2, rq(3, 2), digits, prec, &s1b, &s2b, &tail_b);
    s1a.widen(tail_a);
    s2a.widen(tail_a);
    s1b.widen(tail_b);
    s2b.widen(tail_b);

    const ApproxReal thresh =
        pow_si(ApproxReal::of_long(10, prec), -(digits / 2));
    int found = 0;
    int sign = 0;
    for (int eps = -1; eps <= 1; eps += 2) {
        ApproxReal la = eps > 0 ? s1a + s2a : s1a - s2a;
        ApproxReal lb = eps > 0 ? s1b + s2b : s1b - s2b;
        ApproxReal mismatch = abs_ball(la - lb);
        ApproxReal scale = abs_ball(la);
        if (scale.to_double() < 1.0) scale = ApproxReal::of_long(1, prec);
        if ((thresh * scale - mismatch).definitely_positive()) {
            ++found;
            sign = eps;
        }
    }
    if (found != 1)
        throw verification_error(
            "functional-equation sign: split-point consistency did not single "
            "out one sign");
    return sign;
}

int cached_fricke_sign(FormId id) {
    static std::mutex mu;
    static std::map<FormId, int> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(id);
    if (it != cache.end()) return it->second;
    int sign = fricke_sign_impl(id, 40);
    cache.emplace(id, sign);
    return sign;
}

}  // namespace

int kronecker_symbol(long d, long n) { return special::kronecker(d, n); }

ApproxReal dirichlet_L(long d, long s, const PrecisionContext& ctx) {
    if (!is_fundamental(d))
        throw domain_error("dirichlet_L needs a fundamental discriminant != 1");
    if (s < 1) throw domain_error("dirichlet_L needs an integer s >= 1");
    const long q = std::labs(d);
    const mpfr_prec_t prec = ctx.prec_bits + 32;

    if (s == 1) {
        if (d > 0)
            throw domain_error(
                "dirichlet_L at s = 1 requires an odd character (d < 0)");
        // L(1, chi) = pi (-B_{1,chi}) / sqrt(|d|) with
        // B_{1,chi} = (1/|d|) sum_a chi(a) a.
        mpq_class b1(0);
        for (long a = 1; a <= q; ++a) {
            int ch = special::kronecker(d, a);
            if (ch) b1 += mpq_class(ch * a);
        }
        b1 /= q;
        ApproxReal val =
            mul_mpq(mp::const_pi(prec) / mp::sqrt_ul(static_cast<unsigned long>(q), prec),
                    -b1);
        return round_to_prec(val, ctx.prec_bits);
    }

    ApproxReal acc = ApproxReal::zero(prec);
    for (long r = 1; r <= q; ++r) {
        int ch = special::kronecker(d, r);
        if (ch == 0) continue;
        ApproxReal z = special::hurwitz_zeta_ui(static_cast<unsigned long>(s),
                                                rq(r, q), prec);
        acc += mul_long(z, ch);
    }
    mpz_class qs;
    mpz_pow_ui(qs.get_mpz_t(), mpz_class(q).get_mpz_t(),
               static_cast<unsigned long>(s));
    acc = mul_mpq(acc, mpq_class(1) / mpq_class(qs));
    return round_to_prec(acc, ctx.prec_bits);
}

NewformData form_data(FormId id) {
    switch (id) {
        case FormId::f15: return NewformData{id, 15, 3};
        case FormId::g12: return NewformData{id, 12, 3};
        case FormId::e14: return NewformData{id, 14, 2};
    }
    throw domain_error("form_data: unknown form id");
}

int fricke_sign(FormId id, const PrecisionContext& ctx) {
    return fricke_sign_impl(id, ctx.decimal_digits);
}

ApproxReal modular_L(FormId id, long s, const PrecisionContext& ctx,
                     const ExactRational& split) {
    const NewformData data = form_data(id);
    const long digits = ctx.working_digits();
    const mpfr_prec_t prec = ctx.prec_bits + 32;
    const int eps = cached_fricke_sign(id);

    ApproxReal s1, s2;
    Mag tail;
    afe_sums(id, s, split, digits, prec, &s1, &s2, &tail);
    ApproxReal lambda = eps > 0 ? s1 + s2 : s1 - s2;
    lambda.widen(tail + tail);

    // L(s) = (2pi/sqrt(N))^s Lambda / (s-1)!
    const ApproxReal two_pi = mp::mul_2si(mp::const_pi(prec), 1);
    const ApproxReal sqrt_n =
        mp::sqrt_ul(static_cast<unsigned long>(data.level), prec);
    ApproxReal val = lambda * pow_si(two_pi / sqrt_n, s);
    val = mul_mpq(val, mpq_class(1, factorial_long(s - 1)));
    return round_to_prec(val, ctx.prec_bits);
}

ApproxReal rwz_closed(FormId id, const PrecisionContext& ctx) {
    const mpfr_prec_t prec = ctx.prec_bits + 32;
    if (id == FormId::f15) {
        ApproxReal num = special::gamma_mpq(rq(1, 15), prec) *
                         special::gamma_mpq(rq(2, 15), prec) *
                         special::gamma_mpq(rq(4, 15), prec) *
                         special::gamma_mpq(rq(8, 15), prec);
        ApproxReal den =
            mul_long(mp::sqrt_ul(3, prec) * mp::const_pi(prec), 120);
        return round_to_prec(num / den, ctx.prec_bits);
    }
    if (id == FormId::g12) {
        ApproxReal num = pow_si(special::gamma_mpq(rq(1, 3), prec), 6);
        ApproxReal den = pow_mpq(ApproxReal::of_long(2, prec), rq(17, 3)) *
                         pow_si(mp::const_pi(prec), 2);
        return round_to_prec(num / den, ctx.prec_bits);
    }
    throw domain_error("rwz_closed: no gamma-product closed form for this id");
}

long ec_ap(long p) {
    if (p < 5 || p % 2 == 0 || p % 3 == 0)
        throw domain_error("ec_ap needs a prime p with good reduction (p >= 5)");
    for (long t = 5; t * t <= p; t += 2) {
        if (p % t == 0) throw domain_error("ec_ap: p is not prime");
    }
    const unsigned long up = static_cast<unsigned long>(p);
    std::vector<unsigned char> qr(up, 0);
    for (unsigned long y = 0; y <= up / 2; ++y) qr[(y * y) % up] = 1;
    long sum = 0;
    for (unsigned long x = 0; x < up; ++x) {
        unsigned long z = ((x * x % up) * x + 1) % up;
        if (z == 0) continue;
        sum += qr[z] ? 1 : -1;
    }
    return -sum;
}

std::vector<std::pair<long, long>> sym2_local_defect(long pmax) {
    if (pmax < 5) throw domain_error("sym2_local_defect needs pmax >= 5");
    const qexp::QExpansion g = cached_newform(FormId::g12, pmax + 1);
    std::vector<std::pair<long, long>> out;
    for (long p = 5; p <= pmax; ++p) {
        if (p % 2 == 0 || p % 3 == 0) continue;
        bool prime = true;
        for (long t = 5; prime && t * t <= p; t += 2) {
            if (p % t == 0) prime = false;
        }
        if (!prime) continue;
        const long ap = ec_ap(p);
        const long bp = coeff_long(g, p);
        const long defect =
            (ap * ap - p) - (special::kronecker(-3, p) * p + bp);
        out.emplace_back(p, defect);
    }
    return out;
}

qexp::QExpansion grossen_qexp(GrossenKind kind, long N) {
    if (N < 1) throw domain_error("grossen_qexp needs N >= 1");
    std::vector<long> acc(static_cast<size_t>(N), 0);
    const long mmax = static_cast<long>(std::sqrt(static_cast<double>(N))) + 1;
    for (long m = -mmax; m <= mmax; ++m) {
        const long m2 = m * m;
        if (m2 >= N) continue;
        for (long n = -mmax; n <= mmax; ++n) {
            const long e = m2 + 3 * n * n;
            if (e >= N) continue;
            if (kind == GrossenKind::psi) {
                acc[e] += m * special::kronecker(-3, m);
            } else {
                acc[e] += m2 - 3 * n * n;
            }
        }
    }
    std::vector<ExactRational> coeffs(static_cast<size_t>(N));
    for (long e = 0; e < N; ++e) coeffs[e] = rq(acc[e], 2);
    return qexp::QExpansion::from_coeffs(std::move(coeffs));
}

}  // namespace feynmod::lfun
