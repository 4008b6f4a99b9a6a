// Classical special functions on balls: Bernoulli numbers, Riemann and
// Hurwitz zeta, the gamma function at rational points, upper incomplete
// gamma / exponential integral, and the Bessel function J0.  Each routine
// charges both its truncation bound and all rounding to the result radius.
#ifndef FEYNMOD_SPECIAL_HPP
#define FEYNMOD_SPECIAL_HPP

#include "feynmod/mp.hpp"

namespace feynmod::special {

using mp::ApproxReal;
using mp::ExactRational;

// Exact Bernoulli number B_n (B_1 = -1/2).  Memoized; thread-safe.
ExactRational bernoulli(unsigned long n);

// Riemann zeta at an integer s >= 2.  Even s use the closed form via
// Bernoulli numbers; odd s use an independent series.
ApproxReal zeta_ui(unsigned long s, mpfr_prec_t prec);

// zeta(3) two independent ways, kept separate so they can cross-check:
// a central binomial series and Euler-Maclaurin summation.
ApproxReal zeta3_binomial(mpfr_prec_t prec);
ApproxReal zeta3_euler_maclaurin(mpfr_prec_t prec);

// Hurwitz zeta(s, a) for integer s >= 2 and rational a > 0, by
// Euler-Maclaurin summation.
ApproxReal hurwitz_zeta_ui(unsigned long s, const ExactRational& a, mpfr_prec_t prec);

// Gamma(x) for rational x, poles excluded.  Stirling's series after argument
// promotion; reflection below 1/2.
ApproxReal gamma_mpq(const ExactRational& x, mpfr_prec_t prec);

// Upper incomplete gamma Gamma(n, x) for integer n >= 1 and x > 0:
// (n-1)! e^{-x} sum_{k<n} x^k/k!.
ApproxReal gamma_upper_ui(unsigned long n, const ApproxReal& x);

// Exponential integral E1(x) = Gamma(0, x) for x > 0.  Series for small x,
// continued fraction for large x.
ApproxReal exp_integral_e1(const ApproxReal& x);

// Gamma(-1, x) = e^{-x}/x - E1(x) for x > 0.
ApproxReal gamma_upper_neg1(const ApproxReal& x);

// Bessel J0 by its power series (precision is padded internally to absorb
// the cancellation, which grows with |x|).
ApproxReal bessel_j0(const ApproxReal& x);

// Kronecker symbol (a|n), fully multiplicative extension of Legendre.
int kronecker(long a, long n);

}  // namespace feynmod::special

#endif
