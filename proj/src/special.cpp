#include "feynmod/special.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace feynmod::special {

using mp::ApproxComplex;
using mp::Mag;
using mp::Real;

namespace {

// Rough bit magnitude of a rational: log2|q| within +-2.  INT_MIN-ish for 0.
long bit_size(const mpq_class& q) {
    if (q == 0) return -(1L << 30);
    long nb = static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2));
    long db = static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
    return nb - db;
}

mpq_class mpq_pow_ui(const mpq_class& q, unsigned long e) {
    mpq_class r;
    mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), e);
    r.canonicalize();
    return r;
}

Mag mag_of_mpq(const mpq_class& q) {
    Mag m;
    mpfr_set_q(m.raw(), q.get_mpq_t(), MPFR_RNDA);
    mpfr_abs(m.raw(), m.raw(), MPFR_RNDU);
    return m;
}

// 10^e as an upper-bound magnitude.
Mag pow10_mag(long e) {
    Mag m;
    mpfr_set_si(m.raw(), e, MPFR_RNDN);
    mpfr_exp10(m.raw(), m.raw(), MPFR_RNDU);
    return m;
}

long decimal_digits_of(mpfr_prec_t prec) {
    return static_cast<long>(static_cast<double>(prec) * 0.30102999566398) + 1;
}

}  // namespace

ExactRational bernoulli(unsigned long n) {
    static std::mutex mu;
    static std::vector<mpq_class> memo = {mpq_class(1), mpq_class(-1, 2)};
    std::lock_guard<std::mutex> lock(mu);
    while (memo.size() <= n) {
        unsigned long m = memo.size();
        if (m % 2 == 1) {
            memo.emplace_back(0);
            continue;
        }
        // sum_{k=0}^{m} C(m+1,k) B_k = 0, solved for B_m.
        mpq_class acc(0);
        mpz_class binom;
        for (unsigned long k = 0; k < m; ++k) {
            if (k > 1 && k % 2 == 1) continue;
            mpz_bin_uiui(binom.get_mpz_t(), m + 1, k);
            acc += mpq_class(binom) * memo[k];
        }
        acc /= mpz_class(m + 1);
        memo.push_back(-acc);
    }
    return memo[n];
}

ApproxReal zeta3_binomial(mpfr_prec_t prec) {
    mpfr_prec_t pw = prec + 32;
    // (5/2) sum_{n>=1} (-1)^{n-1} / (n^3 binom(2n,n)); terms shrink by ~4x.
    ApproxReal sum = ApproxReal::zero(pw);
    mpq_class term(1, 2);  // n = 1
    long target = -(static_cast<long>(pw) + 16);
    for (unsigned long n = 1;; ++n) {
        ApproxReal t = ApproxReal::of_mpq(term, pw);
        if (n % 2 == 1) {
            sum += t;
        } else {
            sum -= t;
        }
        // next term
        mpq_class ratio(mpz_class(n) * mpz_class(n) * mpz_class(n),
                        mpz_class(2 * (n + 1)) * mpz_class(n + 1) * mpz_class(2 * n + 1));
        term *= ratio;
        if (bit_size(term) < target) {
            sum.widen(mag_of_mpq(term));  // alternating, decreasing
            break;
        }
        if (n > 4 * static_cast<unsigned long>(pw)) {
            throw convergence_failure("zeta(3) series failed to reach tolerance");
        }
    }
    return mp::mul_mpq(sum, mpq_class(5, 2));
}

ApproxReal hurwitz_zeta_ui(unsigned long s, const ExactRational& a, mpfr_prec_t prec) {
    if (s < 2) throw domain_error("hurwitz_zeta_ui requires s >= 2");
    if (a <= 0) throw domain_error("hurwitz_zeta_ui requires a > 0");
    mpfr_prec_t pw = prec + 64;
    long dw = decimal_digits_of(pw);
    long target_bits = static_cast<long>(pw) + 24;

    for (long m_base = std::max(30L, (dw * 2) / 5);; m_base *= 2) {
        if (m_base > 1000000L) {
            throw convergence_failure("Euler-Maclaurin summation failed to converge");
        }
        unsigned long M = static_cast<unsigned long>(m_base);

        // All pieces below are exact rationals; only the final rounding and
        // the Euler-Maclaurin remainder contribute to the radius.
        mpq_class acc(0);
        for (unsigned long k = 0; k < M; ++k) {
            acc += 1 / mpq_pow_ui(a + k, s);
        }
        mpq_class Ma = a + M;
        acc += 1 / (mpq_pow_ui(Ma, s - 1) * (s - 1));
        acc += 1 / (mpq_pow_ui(Ma, s) * 2);

        // Correction terms B_{2j}/(2j)! * (s)_{2j-1} * (M+a)^{-s-2j+1}.
        mpz_class poch(s);           // s(s+1)...(s+2j-2)
        mpz_class fact(2);           // (2j)!
        mpq_class Minv = 1 / Ma;
        mpq_class Mpow = 1 / mpq_pow_ui(Ma, s + 1);  // (M+a)^{-s-2j+1}, j = 1
        mpq_class prev_abs(0);
        bool converged = false;
        Mag tail;
        for (unsigned long j = 1; j <= static_cast<unsigned long>(4 * dw); ++j) {
            mpq_class c = bernoulli(2 * j) / fact * poch * Mpow;
            mpq_class cabs = abs(c);
            if (j > 1 && prev_abs != 0 && cabs > prev_abs) {
                // Asymptotic series started diverging before reaching target.
                break;
            }
            acc += c;
            prev_abs = cabs;
            if (bit_size(cabs) < -target_bits) {
                tail = mag_of_mpq(cabs) + mag_of_mpq(cabs);
                converged = true;
                break;
            }
            // advance j -> j+1
            poch *= mpz_class(s + 2 * j - 1) * mpz_class(s + 2 * j);
            fact *= mpz_class(2 * j + 1) * mpz_class(2 * j + 2);
            Mpow *= Minv * Minv;
        }
        if (!converged) continue;

        ApproxReal r = ApproxReal::of_mpq(acc, pw);
        r.widen(tail);
        return r;
    }
}

ApproxReal zeta3_euler_maclaurin(mpfr_prec_t prec) {
    return hurwitz_zeta_ui(3, mpq_class(1), prec);
}

ApproxReal zeta_ui(unsigned long s, mpfr_prec_t prec) {
    if (s < 2) throw domain_error("zeta_ui requires s >= 2");
    if (s % 2 == 0) {
        // zeta(2n) = (-1)^{n+1} B_{2n} (2 pi)^{2n} / (2 (2n)!).
        mpq_class b = bernoulli(s);
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), s);
        mpq_class factor = abs(b) / (2 * mpq_class(fact));
        ApproxReal two_pi = mp::mul_2si(mp::const_pi(prec + 32), 1);
        return mp::mul_mpq(mp::pow_si(two_pi, static_cast<long>(s)), factor);
    }
    if (s == 3) return zeta3_binomial(prec);
    return hurwitz_zeta_ui(s, mpq_class(1), prec);
}

ApproxReal gamma_mpq(const ExactRational& x, mpfr_prec_t prec) {
    if (x.get_den() == 1 && x <= 0) {
        throw pole_error("gamma evaluated at a nonpositive integer");
    }
    mpfr_prec_t pw = prec + 96;
    long dw = decimal_digits_of(pw);

    if (x < mpq_class(1, 2)) {
        // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)).
        ApproxReal pi = mp::const_pi(pw);
        ApproxReal spx = mp::sin_ball(mp::mul_mpq(pi, x));
        return pi / (spx * gamma_mpq(1 - x, pw));
    }

    // Promote to y = x + m large enough for Stirling's series to reach the
    // target, then divide the promotion product back out (exactly).
    for (long y0 = (37 * dw) / 100 + 8;; y0 += y0 / 2 + 8) {
        if (y0 > 1000000L) {
            throw convergence_failure("Stirling series failed to reach tolerance");
        }
        long m = 0;
        if (x < y0) {
            mpq_class diff = y0 - x;
            m = static_cast<long>(mpz_class(diff.get_num() / diff.get_den()).get_si()) + 1;
        }
        mpq_class y = x + m;

        ApproxReal yb = ApproxReal::of_mpq(y, pw);
        ApproxReal logy = mp::log_ball(yb);
        ApproxReal two_pi = mp::mul_2si(mp::const_pi(pw), 1);
        ApproxReal L = mp::mul_mpq(logy, y - mpq_class(1, 2)) - yb +
                       mp::mul_2si(mp::log_ball(two_pi), -1);

        // sum_j B_{2j} / ((2j)(2j-1) y^{2j-1}), exact rationals.
        mpq_class acc(0);
        mpq_class ypow = 1 / y;  // y^{1-2j}, j = 1
        mpq_class yinv2 = 1 / (y * y);
        long target_bits = static_cast<long>(pw) + 24;
        mpq_class prev_abs(0);
        bool converged = false;
        Mag tail;
        for (unsigned long j = 1; j <= static_cast<unsigned long>(4 * dw); ++j) {
            mpq_class c = bernoulli(2 * j) / (mpz_class(2 * j) * mpz_class(2 * j - 1)) * ypow;
            mpq_class cabs = abs(c);
            if (j > 1 && cabs > prev_abs) break;
            acc += c;
            prev_abs = cabs;
            if (bit_size(cabs) < -target_bits) {
                tail = mag_of_mpq(cabs) + mag_of_mpq(cabs);
                converged = true;
                break;
            }
            ypow *= yinv2;
        }
        if (!converged) continue;
        ApproxReal corr = ApproxReal::of_mpq(acc, pw);
        corr.widen(tail);
        L += corr;

        ApproxReal g = mp::exp_ball(L);
        if (m == 0) return g;
        mpq_class prod(1);
        for (long i = 0; i < m; ++i) prod *= (x + i);
        return mp::mul_mpq(g, 1 / prod);
    }
}

ApproxReal gamma_upper_ui(unsigned long n, const ApproxReal& x) {
    if (n < 1) throw domain_error("gamma_upper_ui requires n >= 1");
    if (!x.definitely_positive()) {
        throw domain_error("gamma_upper_ui requires x > 0");
    }
    // Gamma(n,x) = (n-1)! e^{-x} sum_{k=0}^{n-1} x^k/k!.
    mpfr_prec_t pw = x.prec();
    ApproxReal term = ApproxReal::of_long(1, pw);
    ApproxReal sum = term;
    for (unsigned long k = 1; k < n; ++k) {
        term = mp::div_long(term * x, static_cast<long>(k));
        sum += term;
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), n - 1);
    return mp::mul_mpq(mp::exp_ball(-x) * sum, mpq_class(fact));
}

ApproxReal exp_integral_e1(const ApproxReal& x) {
    if (!x.definitely_positive()) {
        throw domain_error("exp_integral_e1 requires x > 0");
    }
    double ub = x.abs_upper().to_double();

    if (ub <= 24.0) {
        // E1(x) = -gamma - log x + sum_{k>=1} (-1)^{k+1} x^k / (k k!).
        // The partial sums reach ~e^x before cancelling down to ~e^{-x}:
        // pad the working precision to absorb that.
        mpfr_prec_t pw = x.prec() + static_cast<mpfr_prec_t>(std::ceil(ub * 1.4427)) + 48;
        ApproxReal xw = mp::round_to_prec(x, pw);
        ApproxReal term = ApproxReal::of_long(1, pw);
        ApproxReal sum = ApproxReal::zero(pw);
        Mag thresh = pow10_mag(-decimal_digits_of(x.prec()) - 8) *
                     Mag::from_d(std::exp(-ub));
        for (long k = 1;; ++k) {
            term = mp::div_long(term * xw, k);
            ApproxReal contrib = mp::div_long(term, k);
            if (k % 2 == 1) {
                sum += contrib;
            } else {
                sum -= contrib;
            }
            if (static_cast<double>(k) > ub && contrib.abs_upper() < thresh) {
                sum.widen(contrib.abs_upper());  // alternating, decreasing
                break;
            }
            if (k > 1000000L) {
                throw convergence_failure("E1 series failed to reach tolerance");
            }
        }
        return sum - mp::const_euler(pw) - mp::log_ball(xw);
    }

    // Modified Lentz on E1(x) = e^{-x} / (x+1 - 1/(x+3 - 4/(x+5 - ...))).
    // Successive approximants bracket the value, so |delta - 1| bounds the
    // relative truncation error.
    mpfr_prec_t pw = x.prec() + 64;
    ApproxReal xw = mp::round_to_prec(x, pw);
    ApproxReal f = mp::add_long(xw, 1);
    ApproxReal C = f;
    ApproxReal D = ApproxReal::zero(pw);
    ApproxReal one = ApproxReal::of_long(1, pw);
    // Tolerance sits at the requested precision; the padded working
    // precision keeps the ball radii an order of magnitude below it.  A ball
    // input, however, keeps |delta - 1| pinned at its own relative radius
    // forever, so the tolerance is floored there (the final widen by
    // last_delta keeps the enclosure honest either way).
    Mag delta_tol = pow10_mag(-decimal_digits_of(x.prec()) - 4);
    double xmid = x.to_double();
    if (xmid > 0) {
        double rel = x.rad().to_double() / xmid;
        if (rel > 0) delta_tol = mp::max(delta_tol, Mag::from_d(rel * 32.0));
    }
    int calm = 0;
    Mag last_delta;
    for (long i = 1;; ++i) {
        ApproxReal a = ApproxReal::of_long(-i * i, pw);
        ApproxReal b = mp::add_long(xw, 2 * i + 1);
        D = b + a * D;
        D = mp::recip(D);
        C = b + a / C;
        ApproxReal delta = C * D;
        f = f * delta;
        last_delta = (delta - one).abs_upper();
        if (last_delta < delta_tol) {
            if (++calm >= 2) break;
        } else {
            calm = 0;
        }
        if (i > 1000000L) {
            throw convergence_failure("E1 continued fraction failed to converge");
        }
    }
    ApproxReal result = mp::exp_ball(-xw) / f;
    result.widen(result.abs_upper() * mp::mul_2si(last_delta, 2));
    return result;
}

ApproxReal gamma_upper_neg1(const ApproxReal& x) {
    if (!x.definitely_positive()) {
        throw domain_error("gamma_upper_neg1 requires x > 0");
    }
    return mp::exp_ball(-x) / x - exp_integral_e1(x);
}

ApproxReal bessel_j0(const ApproxReal& x) {
    double ub = x.abs_upper().to_double();
    mpfr_prec_t pw = x.prec() + static_cast<mpfr_prec_t>(std::ceil(ub * 1.4427)) + 48;
    ApproxReal xw = mp::round_to_prec(x, pw);
    ApproxReal z = -mp::mul_2si(xw * xw, -2);  // -(x/2)^2
    ApproxReal term = ApproxReal::of_long(1, pw);
    ApproxReal sum = term;
    Mag thresh = Mag::two_pow(-static_cast<long>(x.prec()) - 16);
    for (long k = 1;; ++k) {
        term = mp::div_long(mp::div_long(term * z, k), k);
        sum += term;
        if (static_cast<double>(k) > ub && term.abs_upper() < thresh) {
            sum.widen(mp::mul_2si(term.abs_upper(), 1));
            break;
        }
        if (k > 1000000L) {
            throw convergence_failure("J0 series failed to reach tolerance");
        }
    }
    return sum;
}

int kronecker(long a, long n) {
    mpz_class A(a), N(n);
    return mpz_kronecker(A.get_mpz_t(), N.get_mpz_t());
}

}  // namespace feynmod::special
