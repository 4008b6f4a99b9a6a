#pragma once
// Lambert-series evaluation of the divisor generating function
//     F_s(tau) = sum_{n>=1} sigma_{-s}(n) e^{2 pi i n tau}   (s odd, >= 3),
// its modular transformation defects, cotangent Dirichlet series, and a
// family of lattice double sums over positive-definite binary quadratic
// forms.  The common engine is the partial-fraction collapse
//     sum_{j in Z} 1/(A j^2 + B j + C) = 2 pi (1 - Im cot_plus_i(pi(p+iy)))
//                                        / sqrt(4AC - B^2),
// p = B/(2A), y = sqrt(4AC-B^2)/(2A), which turns every inner sum over all
// integers into a single exponentially small cotangent correction.  Outer
// sums then converge geometrically, and every pure power part is extracted
// in closed zeta form, so all results carry rigorous tail bounds in their
// ball radii.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "feynmod/modular.hpp"
#include "feynmod/mp.hpp"
#include "feynmod/qexp.hpp"

namespace feynmod::eichler {

using modular::Tau;

// Exact divisor power sums and the weight-four Eisenstein combination are
// defined next to the other exact q-series machinery; re-exported here
// because this module is their main consumer.
using qexp::sigma_power;
using qexp::sigma_weight_qexp;

// Integer weight attached to residues mod 6:
//   psi(0) = -5760, psi(+-1) = -48, psi(+-2) = 720, psi(3) = 384.
// Pointwise psi(n) = -48(1 - 16[2|n] - 9[3|n] + 144[6|n]), so the weighted
// Dirichlet series sum psi(n) n^{-s} sieves a zeta value (psi_dirichlet_sum);
// at s = 2 the sum vanishes identically.
struct PsiWeight {
    // psi(n) for any integer n (period 6, even).
    static long value(long n);
    // The table indexed by n mod 6 in 0..5.
    static const std::array<long, 6>& table();
};

// F_s(tau) summed as the Lambert series sum n^{-s} q^n/(1 - q^n),
// q = e^{2 pi i tau}; the geometric tail is charged to the radius.
// domain_error unless s is odd and >= 3 and Im tau > 0; convergence_failure
// when |q| is too close to 1 for the working precision.
mp::ApproxComplex grosswald_F(long s, const Tau& tau,
                              const mp::PrecisionContext& ctx);

// F_3(tau) recomputed as a weighted tail integral of the Eisenstein series
// E_4 up the vertical line starting at tau:
//     (2 pi i)^3 (B_4 / 16) int_tau^{i inf} (E_4(z) - 1)(z - tau)^2 dz.
// Substituting z = tau + iy makes the two unit-imaginary factors cancel,
// leaving (pi^3/60) int_0^inf (E_4(tau+iy) - 1) y^2 dy; the integral is
// truncated at an explicit height with the remainder bounded by the first
// Fourier coefficient envelope and charged to the radius.  Must agree with
// grosswald_F(3, tau).  Requires Im tau >= 0.45.
mp::ApproxComplex grosswald_F_integral(const Tau& tau,
                                       const mp::PrecisionContext& ctx);

// Residual of the weight -2 inversion law:
//   F_3(tau) - tau^2 F_3(-1/tau) - zeta(3)(tau^2 - 1)/2
//     - ((2 pi i)^3/(2 tau)) sum_{j=0}^{2} (B_{2j} B_{4-2j}/((2j)!(4-2j)!))
//       tau^{2j},
// which is zero for every tau in the upper half plane.
mp::ApproxComplex inversion_defect(const Tau& tau,
                                   const mp::PrecisionContext& ctx);

// Residual of the half-shift law
//   F_3(tau + 1/2) + F_3(tau) - (9/4) F_3(2 tau) + (1/4) F_3(4 tau) = 0,
// the Fourier-side image of E_4(z+1/2) + E_4(z) - 18 E_4(2z) + 16 E_4(4z) = 0.
mp::ApproxComplex halfshift_defect(const Tau& tau,
                                   const mp::PrecisionContext& ctx);

// The chain of F_3 relations at quadratic points on sqrt(-15)/k vertical
// lines that pins down the four-term combination
//   24 F_3(sqrt(-15)/6 + 1/2) - 8 F_3(sqrt(-15)/2 + 1/2)
//     - 3 F_3(sqrt(-15)/3) + F_3(sqrt(-15)) = pi^3/sqrt(15) - 7 zeta(3),
// returned as named residuals, each ~ 0:
//   step1..step5 : the five intermediate two- and three-point relations
//                  (half-shift specialisations and inversion images);
//   final15      : the assembled four-term combination minus its value;
//   combo3       : the analogous combination on the sqrt(-3) lines,
//                  8(3F_3(s3/6) - F_3(s3/2)) - 9(3F_3(s3/3) - F_3(s3))
//                  - (7 sqrt(3) pi^3/135 + zeta(3)), s3 = sqrt(-3).
std::vector<std::pair<std::string, mp::ApproxComplex>> f3_chain_sqrtm15(
    const mp::PrecisionContext& ctx);

// Cotangent Dirichlet series xi_s(tau) = sum_{n>=1} cot(pi n tau)/n^s,
// summed by splitting cot = -i + (geometrically small), so
// xi_s = -i (zeta(s) + 2 F_s(tau)).  s odd >= 3; pure-imaginary tau is fine
// (no cotangent pole can occur for Im tau > 0).
mp::ApproxComplex xi_cotangent(long s, const Tau& tau,
                               const mp::PrecisionContext& ctx);

// Odd-index tangent sum sum_{n>=1 odd} tan(pi n tau)/n^s, via
// tan = i - 2i q^n/(1 + q^n) on the same geometric-tail plan:
//   i (1 - 2^{-s}) zeta(s) - 2i sum_{n odd} q^n/((1 + q^n) n^s).
mp::ApproxComplex tan_odd_sum(long s, const Tau& tau,
                              const mp::PrecisionContext& ctx);

// sum_{n>=1} psi(n) n^{-s} = -48(1 - 16 2^{-s} - 9 3^{-s} + 144 6^{-s})
// zeta(s) for integer s >= 2; the bracket is computed as an exact rational,
// so the sieved zeros at s = 2 and s = 4 come out exactly zero.
mp::ApproxReal psi_dirichlet_sum(long s, const mp::PrecisionContext& ctx);

// sum_{j in Z} 1/(A j^2 + B j + C) by the cotangent collapse quoted at the
// top of this header.  Requires A >= 1 and 4AC - B^2 > 0 (no real roots).
mp::ApproxReal sum_recip_quadratic_Z(long A, long B, long C, mpfr_prec_t prec);

// sum_{m>=1, n in Z} 1/(m^2 (a m^2 + b m n + c n^2)) for a positive-definite
// form: the inner n-sum collapses to the cotangent formula, the leftover
// 1/m^3 part sums to zeta(3) exactly, and the correction decays like
// e^{-pi m sqrt(D)/c}, D = 4ac - b^2.
mp::ApproxReal quad_lattice_sum(const qexp::BQF& form,
                                const mp::PrecisionContext& ctx);

// Residual of the divisor-sieve rearrangement for f(m,n) = m^2 Q(m,n),
// Q positive definite:
//   -(1/48) sum psi(n)/f(m,n)
//     = sum (1/f(m,n) - 16/f(m,2n) - 9/f(m,3n) + 144/f(m,6n)),
// both sides over m >= 1, n in Z, each evaluated with its own closed-form
// inner sum (residue classes mod 6 on the left, stretched forms on the
// right).  The two machineries must cancel to a certified zero.
mp::ApproxReal sieve_defect(const qexp::BQF& form,
                            const mp::PrecisionContext& ctx);

// The four lattice sums that Poisson summation converts into F_3 values:
// lhs = quad_lattice_sum at (24,6,1), (6,3,1), (8,6,3), (2,3,3) for
// id = 1..4; rhs = (pi/sqrt(15) or 2 pi/sqrt(15)) (2 F_3(tau0) + zeta(3))
// at the matching point tau0 on the sqrt(-15) lines.  Both sides returned.
std::pair<mp::ApproxComplex, mp::ApproxComplex> poisson_pair(
    int id, const mp::PrecisionContext& ctx);

enum class LatticeMode { direct, chain };

// The two weighted lattice double sums whose exact values are 11 zeta(4)
// and 6 zeta(4).  direct mode evaluates each from its defining sum after
// the cotangent collapse (zeta parts exact, remainder geometric); chain
// mode reproduces the reduction T = combination of four quad_lattice_sums,
// S = T + 5 zeta(4).
mp::ApproxReal lattice_S(LatticeMode mode, const mp::PrecisionContext& ctx);
mp::ApproxReal lattice_T(LatticeMode mode, const mp::PrecisionContext& ctx);

}  // namespace feynmod::eichler
