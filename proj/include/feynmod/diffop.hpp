// Exact differential-operator algebra over Q(t): polynomials and reduced
// rational functions with mpq coefficients, and linear differential operators
// sum_j c_j(t) D^j with rational-function coefficients.  Everything here is
// exact; the only numerics are ball evaluations of coefficients at a point.

#pragma once

#include <vector>

#include "feynmod/mp.hpp"

namespace feynmod {
namespace diffop {

using mp::ApproxReal;
using mp::ExactRational;

// Dense polynomial, ascending coefficients, no trailing zeros (zero = {}).
class RationalPoly {
  public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<ExactRational> coeffs);
    static RationalPoly constant(const ExactRational& c);
    // c * t^n
    static RationalPoly monomial(const ExactRational& c, long n);

    // -1 for the zero polynomial.
    long degree() const;
    bool is_zero() const { return coeff_.empty(); }
    // Coefficient of t^n (zero beyond the degree).
    ExactRational coefficient(long n) const;
    const ExactRational& leading() const;

    RationalPoly derivative() const;
    ExactRational eval(const ExactRational& x) const;
    ApproxReal eval_ball(const ApproxReal& x) const;

    RationalPoly operator+(const RationalPoly& o) const;
    RationalPoly operator-(const RationalPoly& o) const;
    RationalPoly operator*(const RationalPoly& o) const;
    RationalPoly operator-() const;
    RationalPoly mul_scalar(const ExactRational& c) const;
    bool operator==(const RationalPoly& o) const { return coeff_ == o.coeff_; }

    // Euclidean division (exact rational arithmetic): *this = q*d + r with
    // deg r < deg d.  Requires d nonzero.
    void divmod(const RationalPoly& d, RationalPoly* q, RationalPoly* r) const;

  private:
    void trim();
    std::vector<ExactRational> coeff_;
};

// Monic gcd of two polynomials (gcd(0,0) = 0).
RationalPoly poly_gcd(RationalPoly a, RationalPoly b);

// Reduced fraction of polynomials: gcd(num, den) = 1 and den monic.
class RationalFunction {
  public:
    RationalFunction();  // zero
    RationalFunction(RationalPoly num, RationalPoly den);
    static RationalFunction from_poly(RationalPoly p);
    static RationalFunction constant(const ExactRational& c);

    const RationalPoly& num() const { return num_; }
    const RationalPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction derivative() const;
    // pole_error at an exact pole, or when a ball denominator cannot be
    // bounded away from zero.
    ExactRational eval(const ExactRational& x) const;
    ApproxReal eval_ball(const ApproxReal& x) const;

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator-() const;
    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

  private:
    void reduce();
    RationalPoly num_;
    RationalPoly den_;
};

// Linear differential operator c_0 + c_1 D + ... + c_r D^r, with c_r != 0
// for r > 0 (the zero operator is order 0 with c_0 = 0).
class DiffOperator {
  public:
    explicit DiffOperator(std::vector<RationalFunction> coeffs);

    long order() const { return static_cast<long>(coeff_.size()) - 1; }
    const RationalFunction& coefficient(long j) const;
    bool operator==(const DiffOperator& o) const { return coeff_ == o.coeff_; }

  private:
    std::vector<RationalFunction> coeff_;
};

// Divide all coefficients by the leading one.
DiffOperator monicize(const DiffOperator& op);

// For a monic second-order operator D^2 + p D + q, the third-order operator
// annihilating products of its solutions:
//   D^3 + 3p D^2 + (p' + 2p^2 + 4q) D + (4pq + 2q').
// The argument need not be monic (it is monicized first) but must have
// order 2.
DiffOperator symmetric_square(const DiffOperator& op2);

// The two exact operators under study:
//   t^2(t-4)(t-16) D^3 + 6t(t^2-15t+32) D^2 + (7t^2-68t+64) D + (t-4)
//   t(t-4)(t-16) D^2 + 2(t^2-15t+32) D + (t-8)/4
DiffOperator pf_L3();
DiffOperator pf_L2();

}  // namespace diffop
}  // namespace feynmod
