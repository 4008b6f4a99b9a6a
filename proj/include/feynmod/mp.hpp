// Arbitrary-precision ball arithmetic on top of MPFR: every value carries a
// midpoint at the working precision plus a nonnegative error radius kept at
// low precision and rounded outward.  Real balls, complex balls (pairs of
// real balls), and the precision context used across the library.
#ifndef FEYNMOD_MP_HPP
#define FEYNMOD_MP_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "feynmod/errors.hpp"

namespace feynmod::mp {

using ExactRational = mpq_class;
using ExactInteger = mpz_class;

// Working-precision policy: `decimal_digits` is what the caller asked for,
// `guard_digits` is slack carried by intermediates, `prec_bits` the MPFR
// precision implied by their sum.
struct PrecisionContext {
    long decimal_digits = 0;
    long guard_digits = 0;
    mpfr_prec_t prec_bits = 0;

    long working_digits() const { return decimal_digits + guard_digits; }
};

// Throws invalid_precision unless 10 <= digits <= 100000.
PrecisionContext make_context(long decimal_digits);

// Precision (bits) needed to represent `digits` decimal digits, with margin.
mpfr_prec_t bits_for_digits(long digits);

// ---------------------------------------------------------------------------
// Mag: tiny nonnegative magnitude used for error radii.  All operations round
// upward so a Mag is always a valid upper bound.
// ---------------------------------------------------------------------------

class Mag {
  public:
    static constexpr mpfr_prec_t kPrec = 32;

    Mag() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    Mag(const Mag& o) : Mag() { mpfr_set(v_, o.v_, MPFR_RNDU); }
    Mag(Mag&& o) noexcept : Mag() { mpfr_swap(v_, o.v_); }
    Mag& operator=(const Mag& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDU);
        return *this;
    }
    Mag& operator=(Mag&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mag() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDU); }

    static Mag zero() { return Mag(); }
    static Mag from_d(double d);                    // |d| rounded up
    static Mag two_pow(long e);                     // 2^e
    static Mag from_abs(mpfr_srcptr x);             // |x| rounded up
    // One ulp of x at its precision (0 when x == 0); upper bound on the
    // rounding error of a correctly rounded operation that produced x.
    static Mag ulp_of(mpfr_srcptr x);
    // Zero when `ternary` reports an exact MPFR result, else ulp_of(x).
    static Mag round_err(mpfr_srcptr x, int ternary);

    friend Mag operator+(const Mag& a, const Mag& b);
    friend Mag operator*(const Mag& a, const Mag& b);
    Mag& operator+=(const Mag& o);
    friend Mag max(const Mag& a, const Mag& b);
    friend Mag mul_2si(const Mag& a, long e);
    friend bool operator<(const Mag& a, const Mag& b);
    // e^a - 1, rounded up (used for exp radius propagation).
    friend Mag expm1_up(const Mag& a);

  private:
    mpfr_t v_;
};

// ---------------------------------------------------------------------------
// Real: RAII midpoint value.  Thin; arithmetic lives on ApproxReal.
// ---------------------------------------------------------------------------

class Real {
  public:
    Real() { mpfr_init2(v_, 53); }  // NaN
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 53); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
};

// ---------------------------------------------------------------------------
// ApproxReal: real ball.
// ---------------------------------------------------------------------------

class ApproxReal {
  public:
    ApproxReal() = default;
    explicit ApproxReal(mpfr_prec_t prec) : mid_(prec) { mpfr_set_zero(mid_.raw(), 1); }

    static ApproxReal zero(mpfr_prec_t prec) { return ApproxReal(prec); }
    static ApproxReal of_long(long v, mpfr_prec_t prec);
    static ApproxReal of_double(double v, mpfr_prec_t prec);
    static ApproxReal of_mpq(const mpq_class& q, mpfr_prec_t prec);
    static ApproxReal of_mpz(const mpz_class& z, mpfr_prec_t prec);
    // Parses a decimal literal; the ball is exact iff the literal is.
    static ApproxReal of_str(const std::string& s, mpfr_prec_t prec);
    static ApproxReal from_parts(Real mid, Mag rad) {
        ApproxReal r;
        r.mid_ = std::move(mid);
        r.rad_ = std::move(rad);
        return r;
    }

    const Real& mid() const { return mid_; }
    const Mag& rad() const { return rad_; }
    Real& mid_mut() { return mid_; }
    Mag& rad_mut() { return rad_; }
    mpfr_prec_t prec() const { return mid_.prec(); }

    bool is_finite() const { return mid_.is_finite() && rad_.is_finite(); }
    bool contains_zero() const;
    bool definitely_positive() const;  // mid - rad > 0
    bool definitely_negative() const;
    // |mid| + rad, rounded up.
    Mag abs_upper() const;
    // max(|mid| - rad, 0) as a low-precision lower bound; zero if the ball
    // straddles zero.
    Mag abs_lower() const;

    void widen(const Mag& extra) { rad_ += extra; }

    double to_double() const { return mid_.to_double(); }
    // Decimal string of the midpoint with `digits` significant digits.
    std::string str(long digits) const;

    ApproxReal operator-() const;

    friend ApproxReal operator+(const ApproxReal& a, const ApproxReal& b);
    friend ApproxReal operator-(const ApproxReal& a, const ApproxReal& b);
    friend ApproxReal operator*(const ApproxReal& a, const ApproxReal& b);
    friend ApproxReal operator/(const ApproxReal& a, const ApproxReal& b);
    ApproxReal& operator+=(const ApproxReal& o) { *this = *this + o; return *this; }
    ApproxReal& operator-=(const ApproxReal& o) { *this = *this - o; return *this; }
    ApproxReal& operator*=(const ApproxReal& o) { *this = *this * o; return *this; }

    friend ApproxReal add_long(const ApproxReal& a, long b);
    friend ApproxReal mul_long(const ApproxReal& a, long b);
    friend ApproxReal div_long(const ApproxReal& a, long b);
    friend ApproxReal mul_mpq(const ApproxReal& a, const mpq_class& q);
    friend ApproxReal mul_2si(const ApproxReal& a, long e);  // exact scaling

    friend ApproxReal abs_ball(const ApproxReal& a);
    friend ApproxReal sqrt_ball(const ApproxReal& a);   // domain_error if a - rad < 0
    friend ApproxReal recip(const ApproxReal& a);
    friend ApproxReal exp_ball(const ApproxReal& a);
    friend ApproxReal log_ball(const ApproxReal& a);    // domain_error if a - rad <= 0
    friend ApproxReal sin_ball(const ApproxReal& a);
    friend ApproxReal cos_ball(const ApproxReal& a);
    friend ApproxReal sinh_ball(const ApproxReal& a);
    friend ApproxReal cosh_ball(const ApproxReal& a);
    friend ApproxReal tanh_ball(const ApproxReal& a);
    friend ApproxReal atan_ball(const ApproxReal& a);
    friend ApproxReal pow_si(const ApproxReal& a, long n);
    // a^q for rational q with a - rad > 0 (via exp(q log a)).
    friend ApproxReal pow_mpq(const ApproxReal& a, const mpq_class& q);

  private:
    Real mid_;
    Mag rad_;
};

// Namespace-scope declarations of the ball operations (the in-class friend
// declarations alone would only be reachable through argument-dependent
// lookup, not as qualified names).
ApproxReal add_long(const ApproxReal& a, long b);
ApproxReal mul_long(const ApproxReal& a, long b);
ApproxReal div_long(const ApproxReal& a, long b);
ApproxReal mul_mpq(const ApproxReal& a, const mpq_class& q);
ApproxReal mul_2si(const ApproxReal& a, long e);
ApproxReal abs_ball(const ApproxReal& a);
ApproxReal sqrt_ball(const ApproxReal& a);
ApproxReal recip(const ApproxReal& a);
ApproxReal exp_ball(const ApproxReal& a);
ApproxReal log_ball(const ApproxReal& a);
ApproxReal sin_ball(const ApproxReal& a);
ApproxReal cos_ball(const ApproxReal& a);
ApproxReal sinh_ball(const ApproxReal& a);
ApproxReal cosh_ball(const ApproxReal& a);
ApproxReal tanh_ball(const ApproxReal& a);
ApproxReal atan_ball(const ApproxReal& a);
ApproxReal pow_si(const ApproxReal& a, long n);
ApproxReal pow_mpq(const ApproxReal& a, const mpq_class& q);
Mag max(const Mag& a, const Mag& b);
Mag mul_2si(const Mag& a, long e);
Mag expm1_up(const Mag& a);

// Re-round a ball to a new working precision (the radius absorbs any
// rounding of the midpoint).
ApproxReal round_to_prec(const ApproxReal& a, mpfr_prec_t prec);

ApproxReal const_pi(mpfr_prec_t prec);
ApproxReal const_euler(mpfr_prec_t prec);
ApproxReal const_log2(mpfr_prec_t prec);
ApproxReal sqrt_ul(unsigned long n, mpfr_prec_t prec);

// ---------------------------------------------------------------------------
// ApproxComplex: componentwise complex ball; error_radius() bounds the
// modulus of the combined error.
// ---------------------------------------------------------------------------

class ApproxComplex {
  public:
    ApproxComplex() = default;
    explicit ApproxComplex(mpfr_prec_t prec) : re_(prec), im_(prec) {}
    ApproxComplex(ApproxReal re, ApproxReal im) : re_(std::move(re)), im_(std::move(im)) {}

    static ApproxComplex of_real(const ApproxReal& re);
    static ApproxComplex i_times(const ApproxReal& im);  // 0 + im*i
    static ApproxComplex zero(mpfr_prec_t prec) { return ApproxComplex(prec); }

    const ApproxReal& re() const { return re_; }
    const ApproxReal& im() const { return im_; }
    ApproxReal& re_mut() { return re_; }
    ApproxReal& im_mut() { return im_; }
    mpfr_prec_t prec() const { return re_.prec(); }

    Mag error_radius() const { return re_.rad() + im_.rad(); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }
    void widen(const Mag& extra) { re_.widen(extra); im_.widen(extra); }

    // |z| as a ball, and an upper bound |re|+|im|+rad as a Mag.
    friend ApproxReal abs_ball(const ApproxComplex& z);
    Mag abs_upper() const;

    ApproxComplex operator-() const;
    friend ApproxComplex operator+(const ApproxComplex& a, const ApproxComplex& b);
    friend ApproxComplex operator-(const ApproxComplex& a, const ApproxComplex& b);
    friend ApproxComplex operator*(const ApproxComplex& a, const ApproxComplex& b);
    friend ApproxComplex operator/(const ApproxComplex& a, const ApproxComplex& b);
    ApproxComplex& operator+=(const ApproxComplex& o) { *this = *this + o; return *this; }
    ApproxComplex& operator-=(const ApproxComplex& o) { *this = *this - o; return *this; }
    ApproxComplex& operator*=(const ApproxComplex& o) { *this = *this * o; return *this; }

    friend ApproxComplex operator*(const ApproxReal& a, const ApproxComplex& b);
    friend ApproxComplex operator*(const ApproxComplex& a, const ApproxReal& b);
    friend ApproxComplex operator/(const ApproxComplex& a, const ApproxReal& b);
    friend ApproxComplex mul_mpq(const ApproxComplex& a, const mpq_class& q);
    friend ApproxComplex mul_2si(const ApproxComplex& a, long e);  // exact scaling
    friend ApproxComplex mul_i(const ApproxComplex& a);   // multiply by i, exact
    friend ApproxComplex conj(const ApproxComplex& a);

    friend ApproxComplex recip(const ApproxComplex& a);
    friend ApproxComplex exp_ball(const ApproxComplex& a);
    friend ApproxComplex sqrt_ball(const ApproxComplex& a);  // principal branch
    friend ApproxComplex pow_si(const ApproxComplex& a, long n);

    std::string str(long digits) const;

  private:
    ApproxReal re_;
    ApproxReal im_;
};

ApproxComplex mul_mpq(const ApproxComplex& a, const mpq_class& q);
ApproxComplex mul_2si(const ApproxComplex& a, long e);
ApproxComplex mul_i(const ApproxComplex& a);
ApproxComplex conj(const ApproxComplex& a);
ApproxReal abs_ball(const ApproxComplex& z);
ApproxComplex recip(const ApproxComplex& a);
ApproxComplex exp_ball(const ApproxComplex& a);
ApproxComplex sqrt_ball(const ApproxComplex& a);
ApproxComplex pow_si(const ApproxComplex& a, long n);

// cot(z).  pole_error when e^{2iz} cannot be separated from 1.
ApproxComplex cot(const ApproxComplex& z);
// cot(z) + i, computed without cancellation; requires Im z > 0.
ApproxComplex cot_plus_i(const ApproxComplex& z);
// cot(z) - i, computed without cancellation; requires Im z < 0.
ApproxComplex cot_minus_i(const ApproxComplex& z);

// ---------------------------------------------------------------------------
// Digit agreement: a and b match to D digits iff
// |a - b| <= 10^-D * max(1, |a|), with both radii charged to the difference.
// ---------------------------------------------------------------------------

inline constexpr long kDigitsExact = 1000000;  // reported when the bound is exactly zero

long digits_matched(const ApproxReal& a, const ApproxReal& b);
long digits_matched(const ApproxComplex& a, const ApproxComplex& b);
// Digits to which `a` agrees with zero, scale max(1,|a|) -> just -log10(|a|+rad).
long digits_zero(const ApproxReal& a);
long digits_zero(const ApproxComplex& a);

}  // namespace feynmod::mp

#endif
