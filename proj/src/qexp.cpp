#include "feynmod/qexp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <utility>

#include "feynmod/errors.hpp"
#include "feynmod/special.hpp"

namespace feynmod::qexp {

namespace {

long checked_size(const ExactRational& n, const char* what) {
    if (n.get_den() != 1 || !n.get_num().fits_slong_p()) {
        throw domain_error(std::string(what) + ": length is not a small integer");
    }
    return n.get_num().get_si();
}

// Upper bound of b^e as a Mag for 0 <= b (Mag) and rational e > 0.
mp::Mag mag_pow_mpq(const mp::Mag& b, const ExactRational& e) {
    if (b.is_zero()) return mp::Mag::zero();
    mpfr_t ef, r;
    mpfr_init2(ef, 64);
    mpfr_init2(r, mp::Mag::kPrec);
    // b < 1 in every call site (|q| < 1), so b^e decreases in e: rounding the
    // exponent down rounds the power up.  Guard the b >= 1 case anyway.
    mpfr_rnd_t erd = (mpfr_cmp_ui(b.raw(), 1) < 0) ? MPFR_RNDD : MPFR_RNDU;
    mpfr_set_q(ef, e.get_mpq_t(), erd);
    mpfr_pow(r, b.raw(), ef, MPFR_RNDU);
    mp::Mag out = mp::Mag::from_abs(r);
    mpfr_clear(ef);
    mpfr_clear(r);
    return out;
}

}  // namespace

QExpansion QExpansion::zero(const ExactRational& order) {
    QExpansion s;
    s.lead_ = order;
    s.lead_.canonicalize();
    s.order_ = s.lead_;
    return s;
}

QExpansion QExpansion::monomial(const ExactRational& c, const ExactRational& e,
                                long n_known) {
    if (n_known < 1) throw domain_error("monomial: n_known must be >= 1");
    QExpansion s;
    s.lead_ = e;
    s.lead_.canonicalize();
    s.coeff_.assign(static_cast<size_t>(n_known), ExactRational(0));
    s.coeff_[0] = c;
    s.order_ = s.lead_ + n_known;
    return s;
}

QExpansion QExpansion::from_coeffs(std::vector<ExactRational> coeffs) {
    QExpansion s;
    s.lead_ = 0;
    s.order_ = ExactRational(static_cast<long>(coeffs.size()));
    s.coeff_ = std::move(coeffs);
    return s;
}

QExpansion QExpansion::with_lead(const ExactRational& lead,
                                 std::vector<ExactRational> coeffs) {
    QExpansion s;
    s.lead_ = lead;
    s.lead_.canonicalize();
    s.order_ = s.lead_ + static_cast<long>(coeffs.size());
    s.coeff_ = std::move(coeffs);
    return s;
}

ExactRational QExpansion::order() const { return order_; }

ExactRational QExpansion::coefficient(const ExactRational& e) const {
    if (e >= order_) throw domain_error("QExpansion::coefficient: beyond truncation order");
    ExactRational off = e - lead_;
    off.canonicalize();
    if (off < 0 || off.get_den() != 1) return ExactRational(0);
    if (!off.get_num().fits_slong_p()) return ExactRational(0);
    long k = off.get_num().get_si();
    if (k >= length()) return ExactRational(0);
    return coeff_[static_cast<size_t>(k)];
}

QExpansion QExpansion::normalized() const {
    size_t first = 0;
    while (first < coeff_.size() && coeff_[first] == 0) ++first;
    QExpansion s;
    s.lead_ = lead_ + static_cast<long>(first);
    s.order_ = order_;
    s.coeff_.assign(coeff_.begin() + static_cast<long>(first), coeff_.end());
    return s;
}

QExpansion QExpansion::truncated(const ExactRational& new_order) const {
    if (new_order > order_) {
        throw domain_error("QExpansion::truncated: cannot extend truncation order");
    }
    ExactRational keep = new_order - lead_;
    keep.canonicalize();
    if (keep <= 0) {
        return zero(new_order);
    }
    // Keep coefficients with offset < keep, i.e. ceil(keep) of them.
    mpz_class q = keep.get_num() / keep.get_den();
    long k = q.get_si();
    if (ExactRational(q) < keep) ++k;  // ceil for non-integer keep
    k = std::min(k, length());
    QExpansion s;
    s.lead_ = lead_;
    s.order_ = new_order;
    s.order_.canonicalize();
    s.coeff_.assign(coeff_.begin(), coeff_.begin() + k);
    return s;
}

QExpansion operator+(const QExpansion& a, const QExpansion& b) {
    if (a.length() == 0) {
        QExpansion s = b.truncated(std::min(a.order_, b.order_));
        return s;
    }
    if (b.length() == 0) {
        return a.truncated(std::min(a.order_, b.order_));
    }
    ExactRational gap = b.lead_ - a.lead_;
    gap.canonicalize();
    if (gap.get_den() != 1) {
        throw domain_error("QExpansion: sum of series on incompatible exponent grids");
    }
    ExactRational lead = std::min(a.lead_, b.lead_);
    ExactRational order = std::min(a.order_, b.order_);
    long len = checked_size(order - lead, "QExpansion::operator+");
    if (len <= 0) return QExpansion::zero(order);
    QExpansion s;
    s.lead_ = lead;
    s.order_ = order;
    s.coeff_.assign(static_cast<size_t>(len), ExactRational(0));
    long da = checked_size(a.lead_ - lead, "QExpansion::operator+");
    long db = checked_size(b.lead_ - lead, "QExpansion::operator+");
    for (long k = 0; k < a.length() && da + k < len; ++k) s.coeff_[da + k] += a.coeff_[k];
    for (long k = 0; k < b.length() && db + k < len; ++k) s.coeff_[db + k] += b.coeff_[k];
    return s;
}

QExpansion QExpansion::operator-() const {
    QExpansion s = *this;
    for (auto& c : s.coeff_) c = -c;
    return s;
}

QExpansion operator-(const QExpansion& a, const QExpansion& b) { return a + (-b); }

QExpansion operator*(const QExpansion& a, const QExpansion& b) {
    ExactRational lead = a.lead_ + b.lead_;
    // (A + O(q^Oa))(B + O(q^Ob)): unknown from min(la + Ob, lb + Oa).
    ExactRational order = std::min(a.lead_ + b.order_, b.lead_ + a.order_);
    long len = checked_size(order - lead, "QExpansion::operator*");
    if (len <= 0 || a.length() == 0 || b.length() == 0) return QExpansion::zero(order);
    QExpansion s;
    s.lead_ = lead;
    s.order_ = order;
    s.coeff_.assign(static_cast<size_t>(len), ExactRational(0));
    for (long i = 0; i < a.length() && i < len; ++i) {
        if (a.coeff_[i] == 0) continue;
        long jmax = std::min(b.length(), len - i);
        for (long j = 0; j < jmax; ++j) {
            if (b.coeff_[j] == 0) continue;
            s.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
        }
    }
    return s;
}

QExpansion mul_scalar(const QExpansion& a, const ExactRational& c) {
    QExpansion s = a;
    for (auto& x : s.coeff_) x *= c;
    return s;
}

QExpansion inverse(const QExpansion& a) {
    QExpansion n = a.normalized();
    if (n.length() == 0 || n.coeff_[0] == 0) {
        throw domain_error("QExpansion::inverse: leading coefficient unavailable or zero");
    }
    long len = n.length();
    QExpansion s;
    s.lead_ = -n.lead_;
    s.order_ = s.lead_ + len;
    s.coeff_.assign(static_cast<size_t>(len), ExactRational(0));
    ExactRational c0inv = 1 / n.coeff_[0];
    s.coeff_[0] = c0inv;
    for (long k = 1; k < len; ++k) {
        ExactRational acc(0);
        for (long j = 1; j <= k; ++j) {
            if (n.coeff_[j] == 0) continue;
            acc += n.coeff_[j] * s.coeff_[k - j];
        }
        s.coeff_[k] = -c0inv * acc;
    }
    return s;
}

QExpansion pow_int(const QExpansion& a, long n) {
    if (n == 0) {
        // 1 + O(q^len): relative truncation width is preserved.
        return QExpansion::monomial(1, 0, std::max<long>(a.length(), 1));
    }
    const QExpansion base = (n < 0) ? inverse(a) : a;
    unsigned long e = (n < 0) ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    QExpansion acc = base;
    --e;
    QExpansion sq = base;
    while (e > 0) {
        if (e & 1UL) acc = acc * sq;
        e >>= 1;
        if (e > 0) sq = sq * sq;
    }
    return acc;
}

QExpansion stretch(const QExpansion& a, long m) {
    if (m < 1) throw domain_error("QExpansion::stretch: multiplier must be >= 1");
    if (m == 1) return a;
    QExpansion s;
    s.lead_ = a.lead_ * m;
    s.order_ = a.order_ * m;
    long len = a.length() == 0 ? 0 : m * a.length();
    s.coeff_.assign(static_cast<size_t>(len), ExactRational(0));
    for (long k = 0; k < a.length(); ++k) s.coeff_[m * k] = a.coeff_[k];
    return s;
}

ApproxComplex QExpansion::eval(const ApproxComplex& tau, const PrecisionContext& ctx,
                               double tail_scale) const {
    if (!tau.im().definitely_positive()) {
        throw domain_error("QExpansion::eval: Im(tau) must be positive");
    }
    const mpfr_prec_t prec = ctx.prec_bits;
    ApproxReal two_pi = mp::mul_2si(mp::const_pi(prec), 1);
    ApproxComplex q = mp::exp_ball(mp::mul_i(mp::ApproxComplex::of_real(two_pi) * tau));
    mp::Mag qa = q.abs_upper();
    if (!(qa < mp::Mag::from_d(1.0))) {
        throw domain_error("QExpansion::eval: |q| not strictly below 1");
    }
    // Horner in q over the stored coefficients.
    ApproxComplex acc = ApproxComplex::zero(prec);
    for (long k = length() - 1; k >= 0; --k) {
        acc = acc * q;
        if (coeff_[static_cast<size_t>(k)] != 0) {
            ApproxComplex term = mp::mul_mpq(
                ApproxComplex::of_real(mp::ApproxReal::of_long(1, prec)),
                coeff_[static_cast<size_t>(k)]);
            acc += term;
        }
    }
    // q^lead = exp(2 pi i tau * lead).
    if (lead_ != 0) {
        ApproxComplex qlead =
            mp::exp_ball(mp::mul_i(mp::mul_mpq(ApproxComplex::of_real(two_pi) * tau, lead_)));
        acc = acc * qlead;
    }
    // Unknown tail: tail_scale * |q|^order / (1 - |q|).
    if (tail_scale > 0.0) {
        mpfr_t one_minus;
        mpfr_init2(one_minus, mp::Mag::kPrec);
        mpfr_ui_sub(one_minus, 1, qa.raw(), MPFR_RNDD);  // lower bound of 1-|q|
        mpfr_t tb;
        mpfr_init2(tb, mp::Mag::kPrec);
        mp::Mag qpow = mag_pow_mpq(qa, order_);
        mpfr_div(tb, qpow.raw(), one_minus, MPFR_RNDU);
        mpfr_mul_d(tb, tb, tail_scale, MPFR_RNDU);
        acc.widen(mp::Mag::from_abs(tb));
        mpfr_clear(one_minus);
        mpfr_clear(tb);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Euler product prod_{n>=1}(1-q^n) through < N, by the sparse pentagonal
// series sum_{k in Z} (-1)^k q^{k(3k-1)/2}.  Verified against the literal
// product in the tests before use.
// ---------------------------------------------------------------------------
namespace {

QExpansion euler_product_qexp(long N) {
    if (N < 1) throw domain_error("euler_product_qexp: N must be >= 1");
    std::vector<ExactRational> c(static_cast<size_t>(N), ExactRational(0));
    for (long k = 0;; ++k) {
        long e1 = k * (3 * k - 1) / 2;
        long e2 = k * (3 * k + 1) / 2;
        if (e1 >= N && e2 >= N) break;
        long sign = (k % 2 == 0) ? 1 : -1;
        if (e1 < N) c[static_cast<size_t>(e1)] += sign;
        if (k > 0 && e2 < N) c[static_cast<size_t>(e2)] += sign;
    }
    return QExpansion::from_coeffs(std::move(c));
}

}  // namespace

QExpansion shift_exponent(const QExpansion& a, const ExactRational& delta) {
    QExpansion s = a;
    s.lead_ += delta;
    s.lead_.canonicalize();
    s.order_ += delta;
    s.order_.canonicalize();
    return s;
}

QExpansion eta_power_qexp(long m, long e, long N) {
    if (m < 1) throw domain_error("eta_power_qexp: multiplier must be >= 1");
    if (e == 0) throw domain_error("eta_power_qexp: exponent must be nonzero");
    // Build the Euler product deep enough that the stretched, powered series
    // still knows every exponent < N after the q^{me/24} shift.
    long base_terms = N / m + 2;
    QExpansion p = stretch(euler_product_qexp(base_terms), m);
    QExpansion powed = pow_int(p, e);
    ExactRational delta(m * e, 24);
    delta.canonicalize();
    return shift_exponent(powed, delta);
}

QExpansion eta_quotient_qexp(const std::vector<EtaFactor>& spec, long N) {
    if (spec.empty()) throw domain_error("eta_quotient_qexp: empty spec");
    for (size_t i = 0; i + 1 < spec.size(); ++i) {
        if (spec[i].multiplier >= spec[i + 1].multiplier) {
            throw domain_error("eta_quotient_qexp: multipliers must be distinct and sorted");
        }
    }
    // Total leading exponent; build factors deep enough that the product is
    // still exact through < N.
    ExactRational total_lead(0);
    for (const auto& f : spec) {
        if (f.multiplier < 1 || f.exponent == 0) {
            throw domain_error("eta_quotient_qexp: invalid factor");
        }
        total_lead += ExactRational(f.multiplier * f.exponent, 24);
    }
    total_lead.canonicalize();
    long margin = 2;
    {
        // Worst per-factor lead displacement: lead_i can sit below zero.
        ExactRational m(0);
        for (const auto& f : spec) {
            ExactRational li(f.multiplier * f.exponent, 24);
            if (li < m) m = li;
        }
        mpz_class q = m.get_num() / m.get_den();
        margin += std::abs(q.get_si()) + 1;
    }
    QExpansion acc = eta_power_qexp(spec[0].multiplier, spec[0].exponent, N + margin);
    for (size_t i = 1; i < spec.size(); ++i) {
        acc = acc * eta_power_qexp(spec[i].multiplier, spec[i].exponent, N + margin);
    }
    if (acc.order() < N) throw domain_error("eta_quotient_qexp: internal truncation shortfall");
    return acc.truncated(ExactRational(N));
}

QExpansion eisenstein_qexp(long k, long N) {
    if (k < 2 || k % 2 != 0) {
        throw domain_error("eisenstein_qexp: weight must be even and >= 2");
    }
    if (N < 1) throw domain_error("eisenstein_qexp: N must be >= 1");
    ExactRational factor =
        ExactRational(-2 * k) / special::bernoulli(static_cast<unsigned long>(k));
    std::vector<ExactRational> c(static_cast<size_t>(N), ExactRational(0));
    c[0] = 1;
    for (long n = 1; n < N; ++n) {
        c[static_cast<size_t>(n)] =
            factor * sigma_power(k - 1, static_cast<unsigned long>(n));
    }
    return QExpansion::from_coeffs(std::move(c));
}

QExpansion theta_bqf_qexp(const BQF& form, long N) {
    if (form.a <= 0 || form.discriminant() >= 0) {
        throw domain_error("theta_bqf_qexp: form must be positive definite");
    }
    if (N < 1) throw domain_error("theta_bqf_qexp: N must be >= 1");
    std::vector<ExactRational> c(static_cast<size_t>(N), ExactRational(0));
    const long a = form.a, b = form.b, cc = form.c;
    const long Dp = 4 * a * cc - b * b;  // positive
    // a m^2 + b m n + c n^2 = (1/(4a)) ((2am + bn)^2 + Dp n^2) < N
    // => |n| <= sqrt(4 a N / Dp).
    long nmax = static_cast<long>(std::sqrt(4.0 * static_cast<double>(a) *
                                            static_cast<double>(N) /
                                            static_cast<double>(Dp))) + 2;
    for (long n = -nmax; n <= nmax; ++n) {
        // (2am + bn)^2 < 4aN - Dp n^2
        long rhs = 4 * a * N - Dp * n * n;
        if (rhs < 0) continue;
        long w = static_cast<long>(std::sqrt(static_cast<double>(rhs))) + 2;
        long mlo = (-w - b * n) / (2 * a) - 2;
        long mhi = (w - b * n) / (2 * a) + 2;
        for (long m = mlo; m <= mhi; ++m) {
            long v = a * m * m + b * m * n + cc * n * n;
            if (v >= 0 && v < N) c[static_cast<size_t>(v)] += 1;
        }
    }
    return QExpansion::from_coeffs(std::move(c));
}

namespace {

// Hecke multiplicativity gate for the conductor-14 eta-product candidate:
// a_{mn} = a_m a_n for all coprime m, n >= 2 with mn <= bound.
void check_hecke_multiplicative(const QExpansion& s, long bound) {
    for (long m = 2; m * 2 <= bound; ++m) {
        for (long n = 2; m * n <= bound; ++n) {
            if (std::gcd(m, n) != 1) continue;
            ExactRational lhs = s.coefficient(ExactRational(m * n));
            ExactRational rhs = s.coefficient(ExactRational(m)) * s.coefficient(ExactRational(n));
            if (lhs != rhs) {
                throw verification_error(
                    "newform_qexp: eta-product candidate fails Hecke multiplicativity at (" +
                    std::to_string(m) + "," + std::to_string(n) + ")");
            }
        }
    }
}

}  // namespace

QExpansion newform_qexp(FormId id, long N) {
    if (N < 1) throw domain_error("newform_qexp: N must be >= 1");
    switch (id) {
        case FormId::g12:
            return eta_quotient_qexp({{2, 3}, {6, 3}}, N);
        case FormId::e14: {
            long n_gate = std::max<long>(N, 31);
            QExpansion s = eta_quotient_qexp({{1, 1}, {2, 1}, {7, 1}, {14, 1}}, n_gate);
            check_hecke_multiplicative(s, 30);
            return s.truncated(ExactRational(N));
        }
        case FormId::f15: {
            QExpansion etas = eta_quotient_qexp({{1, 1}, {3, 1}, {5, 1}, {15, 1}}, N + 1);
            QExpansion theta = theta_bqf_qexp(BQF{1, 1, 4}, N);
            QExpansion a = (etas * theta).truncated(ExactRational(N));
            QExpansion b = (eta_quotient_qexp({{3, 3}, {5, 3}}, N) +
                            eta_quotient_qexp({{1, 3}, {15, 3}}, N))
                               .truncated(ExactRational(N));
            QExpansion diff = a - b;
            for (long k = 0; k < diff.length(); ++k) {
                if (diff.at(k) != 0) {
                    throw verification_error(
                        "newform_qexp: the two level-15 constructions disagree at offset " +
                        std::to_string(k));
                }
            }
            return a;
        }
    }
    throw domain_error("newform_qexp: unknown form id");
}

QExpansion sigma_weight_qexp(long N) {
    if (N < 1) throw domain_error("sigma_weight_qexp: N must be >= 1");
    QExpansion e4 = eisenstein_qexp(4, N);
    QExpansion s = mul_scalar(e4, ExactRational(-1, 5)) +
                   mul_scalar(stretch(e4, 2).truncated(ExactRational(N)), ExactRational(16, 5)) +
                   mul_scalar(stretch(e4, 3).truncated(ExactRational(N)), ExactRational(9, 5)) +
                   mul_scalar(stretch(e4, 6).truncated(ExactRational(N)), ExactRational(-144, 5));
    if (s.coefficient(ExactRational(0)) != ExactRational(-24)) {
        throw verification_error("sigma_weight_qexp: constant term is not -24");
    }
    return s;
}

ExactRational sigma_power(long t, unsigned long n) {
    if (n == 0) throw domain_error("sigma_power: n must be >= 1");
    ExactRational acc(0);
    for (unsigned long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        unsigned long e = n / d;
        auto add_term = [&](unsigned long x) {
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), x, static_cast<unsigned long>(std::abs(t)));
            if (t >= 0) {
                acc += ExactRational(p);
            } else {
                acc += ExactRational(mpz_class(1), p);
            }
        };
        add_term(d);
        if (e != d) add_term(e);
    }
    return acc;
}

}  // namespace feynmod::qexp
