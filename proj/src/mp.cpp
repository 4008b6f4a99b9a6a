#include "feynmod/mp.hpp"

#include <cmath>
#include <cstdlib>

namespace feynmod::mp {

namespace {

// Upper bound of num/den given a LOWER bound `den_lb` of the denominator.
Mag div_up(const Mag& num, const Mag& den_lb) {
    if (den_lb.is_zero()) {
        Mag r;
        mpfr_set_inf(r.raw(), 1);
        return r;
    }
    Mag r;
    mpfr_div(r.raw(), num.raw(), den_lb.raw(), MPFR_RNDU);
    return r;
}

Mag mag_from_si_up(long v) {
    Mag r;
    mpfr_set_si(r.raw(), v, MPFR_RNDA);
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDU);
    return r;
}

Mag mag_from_si_down(long v) {
    Mag r;
    mpfr_set_si(r.raw(), v, MPFR_RNDZ);
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDD);
    return r;
}

Mag mag_from_mpq_up(const mpq_class& q) {
    Mag r;
    mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDA);
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDU);
    return r;
}

Mag sqrt_up(const Mag& a) {
    Mag r;
    mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDU);
    return r;
}

Mag sqrt_down(const Mag& a) {
    Mag r;
    mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDD);
    return r;
}

Mag cosh_up(const Mag& a) {
    Mag r;
    mpfr_cosh(r.raw(), a.raw(), MPFR_RNDU);
    return r;
}

}  // namespace

PrecisionContext make_context(long decimal_digits) {
    if (decimal_digits < 10 || decimal_digits > 100000) {
        throw invalid_precision("requested decimal digits must lie in [10, 100000], got " +
                                std::to_string(decimal_digits));
    }
    PrecisionContext ctx;
    ctx.decimal_digits = decimal_digits;
    ctx.guard_digits = std::max(10L, decimal_digits / 10);
    ctx.prec_bits = bits_for_digits(ctx.decimal_digits + ctx.guard_digits);
    return ctx;
}

mpfr_prec_t bits_for_digits(long digits) {
    static const double kLog2Of10 = std::log2(10.0);
    return static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(digits) * kLog2Of10)) + 16;
}

// --------------------------------------------------------------------- Mag

Mag Mag::from_d(double d) {
    Mag r;
    mpfr_set_d(r.v_, d, MPFR_RNDA);
    mpfr_abs(r.v_, r.v_, MPFR_RNDU);
    return r;
}

Mag Mag::two_pow(long e) {
    Mag r;
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDU);
    return r;
}

Mag Mag::from_abs(mpfr_srcptr x) {
    Mag r;
    mpfr_abs(r.v_, x, MPFR_RNDU);
    return r;
}

Mag Mag::ulp_of(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return Mag();
    if (!mpfr_number_p(x)) {
        Mag r;
        mpfr_set_inf(r.v_, 1);
        return r;
    }
    return two_pow(mpfr_get_exp(x) - mpfr_get_prec(x));
}

Mag Mag::round_err(mpfr_srcptr x, int ternary) {
    if (ternary == 0) return Mag();
    if (mpfr_zero_p(x)) return two_pow(mpfr_get_emin());
    return ulp_of(x);
}

Mag operator+(const Mag& a, const Mag& b) {
    Mag r;
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDU);
    return r;
}

Mag operator*(const Mag& a, const Mag& b) {
    Mag r;
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDU);
    return r;
}

Mag& Mag::operator+=(const Mag& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDU);
    return *this;
}

Mag max(const Mag& a, const Mag& b) {
    Mag r;
    mpfr_max(r.v_, a.v_, b.v_, MPFR_RNDU);
    return r;
}

Mag mul_2si(const Mag& a, long e) {
    Mag r;
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDU);
    return r;
}

bool operator<(const Mag& a, const Mag& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

Mag expm1_up(const Mag& a) {
    Mag r;
    mpfr_expm1(r.v_, a.v_, MPFR_RNDU);
    return r;
}

// -------------------------------------------------------------------- Real

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

// -------------------------------------------------------------- ApproxReal

ApproxReal ApproxReal::of_long(long v, mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_set_si(r.mid_.raw(), v, MPFR_RNDN);
    r.rad_ = Mag::round_err(r.mid_.raw(), t);
    return r;
}

ApproxReal ApproxReal::of_double(double v, mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_set_d(r.mid_.raw(), v, MPFR_RNDN);
    r.rad_ = Mag::round_err(r.mid_.raw(), t);
    return r;
}

ApproxReal ApproxReal::of_mpq(const mpq_class& q, mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_set_q(r.mid_.raw(), q.get_mpq_t(), MPFR_RNDN);
    r.rad_ = Mag::round_err(r.mid_.raw(), t);
    return r;
}

ApproxReal ApproxReal::of_mpz(const mpz_class& z, mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_set_z(r.mid_.raw(), z.get_mpz_t(), MPFR_RNDN);
    r.rad_ = Mag::round_err(r.mid_.raw(), t);
    return r;
}

ApproxReal ApproxReal::of_str(const std::string& s, mpfr_prec_t prec) {
    ApproxReal r(prec);
    char* end = nullptr;
    int t = mpfr_strtofr(r.mid_.raw(), s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0') {
        throw domain_error("invalid numeric literal: " + s);
    }
    r.rad_ = Mag::round_err(r.mid_.raw(), t);
    return r;
}

bool ApproxReal::contains_zero() const {
    if (!is_finite()) return true;
    return mpfr_cmpabs(mid_.raw(), rad_.raw()) <= 0;
}

bool ApproxReal::definitely_positive() const {
    return is_finite() && mid_.sign() > 0 && mpfr_cmpabs(mid_.raw(), rad_.raw()) > 0;
}

bool ApproxReal::definitely_negative() const {
    return is_finite() && mid_.sign() < 0 && mpfr_cmpabs(mid_.raw(), rad_.raw()) > 0;
}

Mag ApproxReal::abs_upper() const { return Mag::from_abs(mid_.raw()) + rad_; }

Mag ApproxReal::abs_lower() const {
    Mag lo;
    mpfr_abs(lo.raw(), mid_.raw(), MPFR_RNDD);
    mpfr_sub(lo.raw(), lo.raw(), rad_.raw(), MPFR_RNDD);
    if (mpfr_sgn(lo.raw()) < 0) mpfr_set_zero(lo.raw(), 1);
    return lo;
}

std::string ApproxReal::str(long digits) const {
    if (digits < 1) digits = 1;
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", static_cast<int>(digits - 1), mid_.raw());
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

ApproxReal ApproxReal::operator-() const {
    ApproxReal r(*this);
    mpfr_neg(r.mid_.raw(), r.mid_.raw(), MPFR_RNDN);  // exact
    return r;
}

ApproxReal operator+(const ApproxReal& a, const ApproxReal& b) {
    Real m(std::max(a.prec(), b.prec()));
    int t = mpfr_add(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    Mag r = a.rad_ + b.rad_ + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal operator-(const ApproxReal& a, const ApproxReal& b) {
    Real m(std::max(a.prec(), b.prec()));
    int t = mpfr_sub(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    Mag r = a.rad_ + b.rad_ + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal operator*(const ApproxReal& a, const ApproxReal& b) {
    Real m(std::max(a.prec(), b.prec()));
    int t = mpfr_mul(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    Mag r = Mag::from_abs(a.mid_.raw()) * b.rad_ + Mag::from_abs(b.mid_.raw()) * a.rad_ +
            a.rad_ * b.rad_ + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal operator/(const ApproxReal& a, const ApproxReal& b) {
    Mag lb = b.abs_lower();
    if (lb.is_zero()) throw domain_error("division by a value not separated from zero");
    Real m(std::max(a.prec(), b.prec()));
    int t = mpfr_div(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    Mag q_up = Mag::from_abs(m.raw()) + Mag::ulp_of(m.raw());
    Mag r = div_up(a.rad_ + q_up * b.rad_, lb) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal add_long(const ApproxReal& a, long b) {
    Real m(a.prec());
    int t = mpfr_add_si(m.raw(), a.mid_.raw(), b, MPFR_RNDN);
    Mag r = a.rad_ + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal mul_long(const ApproxReal& a, long b) {
    Real m(a.prec());
    int t = mpfr_mul_si(m.raw(), a.mid_.raw(), b, MPFR_RNDN);
    Mag r = a.rad_ * mag_from_si_up(b) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal div_long(const ApproxReal& a, long b) {
    if (b == 0) throw domain_error("division by zero integer");
    Real m(a.prec());
    int t = mpfr_div_si(m.raw(), a.mid_.raw(), b, MPFR_RNDN);
    Mag r = div_up(a.rad_, mag_from_si_down(b)) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal mul_mpq(const ApproxReal& a, const mpq_class& q) {
    Real m(a.prec());
    int t = mpfr_mul_q(m.raw(), a.mid_.raw(), q.get_mpq_t(), MPFR_RNDN);
    Mag r = a.rad_ * mag_from_mpq_up(q) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal mul_2si(const ApproxReal& a, long e) {
    Real m(a.prec());
    mpfr_mul_2si(m.raw(), a.mid_.raw(), e, MPFR_RNDN);  // exact
    return ApproxReal::from_parts(std::move(m), mul_2si(a.rad_, e));
}

ApproxReal abs_ball(const ApproxReal& a) {
    // | |x| - |m| | <= |x - m|, so the radius carries over unchanged.
    ApproxReal r(a);
    mpfr_abs(r.mid_.raw(), r.mid_.raw(), MPFR_RNDN);  // exact
    return r;
}

ApproxReal sqrt_ball(const ApproxReal& a) {
    if (a.mid_.is_zero() && a.rad_.is_zero()) return ApproxReal::zero(a.prec());
    if (a.definitely_negative()) throw domain_error("sqrt of a negative value");
    Mag lb = a.abs_lower();
    Real m(a.prec());
    if (mpfr_sgn(a.mid_.raw()) < 0 || lb.is_zero()) {
        // Ball touches zero: enclose [0, sqrt(upper)] around sqrt(max(mid,0)).
        Real arg(a.prec());
        if (mpfr_sgn(a.mid_.raw()) < 0) {
            mpfr_set_zero(arg.raw(), 1);
        } else {
            mpfr_set(arg.raw(), a.mid_.raw(), MPFR_RNDN);
        }
        mpfr_sqrt(m.raw(), arg.raw(), MPFR_RNDN);
        return ApproxReal::from_parts(std::move(m), sqrt_up(a.abs_upper()));
    }
    int t = mpfr_sqrt(m.raw(), a.mid_.raw(), MPFR_RNDN);
    Mag r = div_up(a.rad_, sqrt_down(lb) + sqrt_down(lb)) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal recip(const ApproxReal& a) {
    Mag lb = a.abs_lower();
    if (lb.is_zero()) throw domain_error("reciprocal of a value not separated from zero");
    Real m(a.prec());
    int t = mpfr_ui_div(m.raw(), 1, a.mid_.raw(), MPFR_RNDN);
    Mag r = div_up(div_up(a.rad_, lb), lb) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal exp_ball(const ApproxReal& a) {
    Real m(a.prec());
    int t = mpfr_exp(m.raw(), a.mid_.raw(), MPFR_RNDN);
    Mag r = (Mag::from_abs(m.raw()) + Mag::ulp_of(m.raw())) * expm1_up(a.rad_) +
            Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal log_ball(const ApproxReal& a) {
    Mag lb = a.abs_lower();
    if (mpfr_sgn(a.mid_.raw()) <= 0 || lb.is_zero()) {
        throw domain_error("log of a value not separated from the positive axis");
    }
    Real m(a.prec());
    int t = mpfr_log(m.raw(), a.mid_.raw(), MPFR_RNDN);
    Mag r = div_up(a.rad_, lb) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

namespace {

// Functions with |f'| <= 1 everywhere: the radius carries over unchanged.
template <typename F>
ApproxReal lipschitz1(const ApproxReal& a, F&& eval) {
    Real m(a.prec());
    int t = eval(m.raw(), a.mid().raw());
    Mag r = a.rad() + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

}  // namespace

ApproxReal sin_ball(const ApproxReal& a) {
    return lipschitz1(a, [](mpfr_ptr o, mpfr_srcptr x) { return mpfr_sin(o, x, MPFR_RNDN); });
}

ApproxReal cos_ball(const ApproxReal& a) {
    return lipschitz1(a, [](mpfr_ptr o, mpfr_srcptr x) { return mpfr_cos(o, x, MPFR_RNDN); });
}

ApproxReal tanh_ball(const ApproxReal& a) {
    return lipschitz1(a, [](mpfr_ptr o, mpfr_srcptr x) { return mpfr_tanh(o, x, MPFR_RNDN); });
}

ApproxReal atan_ball(const ApproxReal& a) {
    return lipschitz1(a, [](mpfr_ptr o, mpfr_srcptr x) { return mpfr_atan(o, x, MPFR_RNDN); });
}

ApproxReal sinh_ball(const ApproxReal& a) {
    Real m(a.prec());
    int t = mpfr_sinh(m.raw(), a.mid_.raw(), MPFR_RNDN);
    // |sinh'| = cosh <= cosh(|x| + rad) on the ball.
    Mag r = a.rad_ * cosh_up(a.abs_upper()) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal cosh_ball(const ApproxReal& a) {
    Real m(a.prec());
    int t = mpfr_cosh(m.raw(), a.mid_.raw(), MPFR_RNDN);
    Mag r = a.rad_ * cosh_up(a.abs_upper()) + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal pow_si(const ApproxReal& a, long n) {
    if (n < 0) return recip(pow_si(a, -n));
    ApproxReal result = ApproxReal::of_long(1, a.prec());
    ApproxReal base = a;
    unsigned long k = static_cast<unsigned long>(n);
    while (k > 0) {
        if (k & 1UL) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

ApproxReal pow_mpq(const ApproxReal& a, const mpq_class& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) {
        return pow_si(a, q.get_num().get_si());
    }
    return exp_ball(mul_mpq(log_ball(a), q));
}

ApproxReal round_to_prec(const ApproxReal& a, mpfr_prec_t prec) {
    Real m(prec);
    int t = mpfr_set(m.raw(), a.mid().raw(), MPFR_RNDN);
    Mag r = a.rad() + Mag::round_err(m.raw(), t);
    return ApproxReal::from_parts(std::move(m), std::move(r));
}

ApproxReal const_pi(mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_const_pi(r.mid_mut().raw(), MPFR_RNDN);
    r.rad_mut() = Mag::round_err(r.mid().raw(), t);
    return r;
}

ApproxReal const_euler(mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_const_euler(r.mid_mut().raw(), MPFR_RNDN);
    r.rad_mut() = Mag::round_err(r.mid().raw(), t);
    return r;
}

ApproxReal const_log2(mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_const_log2(r.mid_mut().raw(), MPFR_RNDN);
    r.rad_mut() = Mag::round_err(r.mid().raw(), t);
    return r;
}

ApproxReal sqrt_ul(unsigned long n, mpfr_prec_t prec) {
    ApproxReal r(prec);
    int t = mpfr_sqrt_ui(r.mid_mut().raw(), n, MPFR_RNDN);
    r.rad_mut() = Mag::round_err(r.mid().raw(), t);
    return r;
}

// ----------------------------------------------------------- ApproxComplex

ApproxComplex ApproxComplex::of_real(const ApproxReal& re) {
    return ApproxComplex(re, ApproxReal::zero(re.prec()));
}

ApproxComplex ApproxComplex::i_times(const ApproxReal& im) {
    return ApproxComplex(ApproxReal::zero(im.prec()), im);
}

Mag ApproxComplex::abs_upper() const { return re_.abs_upper() + im_.abs_upper(); }

ApproxComplex ApproxComplex::operator-() const { return ApproxComplex(-re_, -im_); }

ApproxComplex operator+(const ApproxComplex& a, const ApproxComplex& b) {
    return ApproxComplex(a.re_ + b.re_, a.im_ + b.im_);
}

ApproxComplex operator-(const ApproxComplex& a, const ApproxComplex& b) {
    return ApproxComplex(a.re_ - b.re_, a.im_ - b.im_);
}

ApproxComplex operator*(const ApproxComplex& a, const ApproxComplex& b) {
    return ApproxComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

ApproxComplex operator/(const ApproxComplex& a, const ApproxComplex& b) {
    ApproxReal den = b.re_ * b.re_ + b.im_ * b.im_;
    ApproxComplex num = a * conj(b);
    return ApproxComplex(num.re_ / den, num.im_ / den);
}

ApproxComplex operator*(const ApproxReal& a, const ApproxComplex& b) {
    return ApproxComplex(a * b.re_, a * b.im_);
}

ApproxComplex operator*(const ApproxComplex& a, const ApproxReal& b) { return b * a; }

ApproxComplex operator/(const ApproxComplex& a, const ApproxReal& b) {
    return ApproxComplex(a.re_ / b, a.im_ / b);
}

ApproxComplex mul_mpq(const ApproxComplex& a, const mpq_class& q) {
    return ApproxComplex(mul_mpq(a.re_, q), mul_mpq(a.im_, q));
}

ApproxComplex mul_2si(const ApproxComplex& a, long e) {
    return ApproxComplex(mul_2si(a.re_, e), mul_2si(a.im_, e));
}

ApproxComplex mul_i(const ApproxComplex& a) { return ApproxComplex(-a.im_, a.re_); }

ApproxComplex conj(const ApproxComplex& a) { return ApproxComplex(a.re_, -a.im_); }

ApproxReal abs_ball(const ApproxComplex& z) {
    return sqrt_ball(z.re_ * z.re_ + z.im_ * z.im_);
}

ApproxComplex recip(const ApproxComplex& a) {
    ApproxReal den = a.re_ * a.re_ + a.im_ * a.im_;
    return ApproxComplex(a.re_ / den, (-a.im_) / den);
}

ApproxComplex exp_ball(const ApproxComplex& a) {
    ApproxReal ex = exp_ball(a.re_);
    return ApproxComplex(ex * cos_ball(a.im_), ex * sin_ball(a.im_));
}

ApproxComplex sqrt_ball(const ApproxComplex& z) {
    const ApproxReal& a = z.re_;
    const ApproxReal& b = z.im_;
    if (b.mid().is_zero() && b.rad().is_zero()) {
        if (a.definitely_negative()) {
            return ApproxComplex::i_times(sqrt_ball(-a));
        }
        return ApproxComplex::of_real(sqrt_ball(a));
    }
    ApproxReal r = abs_ball(z);
    if (mpfr_sgn(a.mid().raw()) >= 0) {
        ApproxReal u = sqrt_ball(mul_2si(r + a, -1));
        ApproxReal v = b / mul_2si(u, 1);
        return ApproxComplex(std::move(u), std::move(v));
    }
    if (b.contains_zero()) {
        throw domain_error("sqrt of a complex value straddling the branch cut");
    }
    ApproxReal w = sqrt_ball(mul_2si(r - a, -1));
    ApproxReal u = abs_ball(b) / mul_2si(w, 1);
    if (b.mid().sign() < 0) w = -w;
    return ApproxComplex(std::move(u), std::move(w));
}

ApproxComplex pow_si(const ApproxComplex& a, long n) {
    if (n < 0) return recip(pow_si(a, -n));
    ApproxComplex result = ApproxComplex::of_real(ApproxReal::of_long(1, a.prec()));
    ApproxComplex base = a;
    unsigned long k = static_cast<unsigned long>(n);
    while (k > 0) {
        if (k & 1UL) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

std::string ApproxComplex::str(long digits) const {
    std::string s = re_.str(digits);
    std::string t = im_.str(digits);
    if (!t.empty() && t[0] == '-') {
        return s + " - " + t.substr(1) + "*i";
    }
    return s + " + " + t + "*i";
}

namespace {

bool complex_contains_zero(const ApproxComplex& z) {
    return z.re().contains_zero() && z.im().contains_zero();
}

// 2iz, exact.
ApproxComplex two_i_times(const ApproxComplex& z) {
    ApproxComplex w = mul_i(z);
    return ApproxComplex(mul_2si(w.re(), 1), mul_2si(w.im(), 1));
}

}  // namespace

ApproxComplex cot(const ApproxComplex& z) {
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, z.prec()));
    if (mpfr_sgn(z.im().mid().raw()) >= 0) {
        ApproxComplex w = exp_ball(two_i_times(z));
        ApproxComplex den = w - one;
        if (complex_contains_zero(den)) throw pole_error("cot evaluated too close to a pole");
        return mul_i((w + one) / den);
    }
    ApproxComplex w = exp_ball(-two_i_times(z));
    ApproxComplex den = w - one;
    if (complex_contains_zero(den)) throw pole_error("cot evaluated too close to a pole");
    return -mul_i((w + one) / den);
}

ApproxComplex cot_plus_i(const ApproxComplex& z) {
    if (mpfr_sgn(z.im().mid().raw()) <= 0) {
        throw domain_error("cot_plus_i requires a point in the upper half plane");
    }
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, z.prec()));
    ApproxComplex w = exp_ball(two_i_times(z));
    ApproxComplex den = one - w;
    if (complex_contains_zero(den)) throw pole_error("cot evaluated too close to a pole");
    return mul_mpq(mul_i(w / den), mpq_class(-2));
}

ApproxComplex cot_minus_i(const ApproxComplex& z) {
    if (mpfr_sgn(z.im().mid().raw()) >= 0) {
        throw domain_error("cot_minus_i requires a point in the lower half plane");
    }
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, z.prec()));
    ApproxComplex w = exp_ball(-two_i_times(z));
    ApproxComplex den = one - w;
    if (complex_contains_zero(den)) throw pole_error("cot evaluated too close to a pole");
    return mul_mpq(mul_i(w / den), mpq_class(2));
}

// --------------------------------------------------------- digit agreement

namespace {

// floor(-log10(ratio_upper)), clamped to [0, kDigitsExact]; exact when zero.
long digits_from_ratio(const Mag& ratio_up) {
    if (ratio_up.is_zero()) return kDigitsExact;
    if (!ratio_up.is_finite()) return 0;
    mpfr_t l;
    mpfr_init2(l, 64);
    mpfr_log10(l, ratio_up.raw(), MPFR_RNDU);
    double d = -mpfr_get_d(l, MPFR_RNDD);
    mpfr_clear(l);
    if (d <= 0.0) return 0;
    if (d >= static_cast<double>(kDigitsExact)) return kDigitsExact;
    return static_cast<long>(std::floor(d));
}

// Upper bound on |a.mid - b.mid| plus both radii.
Mag diff_upper(const ApproxReal& a, const ApproxReal& b) {
    mpfr_t d;
    mpfr_init2(d, 64);
    mpfr_sub(d, a.mid().raw(), b.mid().raw(), MPFR_RNDA);
    Mag m = Mag::from_abs(d);
    mpfr_clear(d);
    return m + a.rad() + b.rad();
}

// Lower bound of max(1, |x.mid|).
Mag scale_lower(mpfr_srcptr mid) {
    Mag s;
    mpfr_abs(s.raw(), mid, MPFR_RNDD);
    if (mpfr_cmp_ui(s.raw(), 1) < 0) mpfr_set_ui(s.raw(), 1, MPFR_RNDD);
    return s;
}

}  // namespace

long digits_matched(const ApproxReal& a, const ApproxReal& b) {
    if (!a.is_finite() || !b.is_finite()) return 0;
    Mag diff = diff_upper(a, b);
    return digits_from_ratio(div_up(diff, scale_lower(a.mid().raw())));
}

long digits_matched(const ApproxComplex& a, const ApproxComplex& b) {
    if (!a.is_finite() || !b.is_finite()) return 0;
    Mag diff = diff_upper(a.re(), b.re()) + diff_upper(a.im(), b.im());
    Mag s = max(scale_lower(a.re().mid().raw()), scale_lower(a.im().mid().raw()));
    return digits_from_ratio(div_up(diff, s));
}

long digits_zero(const ApproxReal& a) {
    if (!a.is_finite()) return 0;
    return digits_from_ratio(a.abs_upper());
}

long digits_zero(const ApproxComplex& a) {
    if (!a.is_finite()) return 0;
    return digits_from_ratio(a.re().abs_upper() + a.im().abs_upper());
}

}  // namespace feynmod::mp
