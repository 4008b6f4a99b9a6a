// Dirichlet and modular L-values.
//
// Quadratic Dirichlet L-functions are evaluated through the Hurwitz zeta
// decomposition L(chi_d, s) = |d|^{-s} sum_{r=1}^{|d|} chi_d(r) zeta(s, r/|d|)
// for integer s >= 2, and through the generalized Bernoulli number B_{1,chi}
// and the odd-character functional equation at s = 1.
//
// L-values of the three newforms are computed with the completed-L two-sum
// expansion: writing Lambda(s) = (sqrt(N)/2pi)^s Gamma(s) L(s) and using
// Lambda(s) = eps Lambda(k - s), for any split parameter A > 0
//
//   Lambda(s) = sum_n a_n (sqrt(N)/(2pi n))^s     Gamma(s,   2pi n A / sqrt(N))
//       + eps * sum_n a_n (sqrt(N)/(2pi n))^{k-s} Gamma(k-s, 2pi n / (A sqrt(N)))
//
// with upper incomplete gammas of integer order down to Gamma(-1, x).  The
// value is independent of A; the functional-equation sign eps is never
// assumed, it is determined numerically from that independence (and is
// cross-checked against gamma-product closed forms in the tests).

#pragma once

#include <utility>
#include <vector>

#include "feynmod/mp.hpp"
#include "feynmod/qexp.hpp"

namespace feynmod {
namespace lfun {

using mp::ApproxReal;
using mp::ExactRational;
using mp::PrecisionContext;
using qexp::FormId;

// Kronecker symbol (d|n), completely multiplicative in n with period |d|
// for fundamental discriminants d.
int kronecker_symbol(long d, long n);

// L(chi_d, s) for a fundamental discriminant d != 1 and integer s >= 1.
// s = 1 requires an odd character (d < 0); even characters have a pole of
// the completed function there and are rejected with domain_error.
ApproxReal dirichlet_L(long d, long s, const PrecisionContext& ctx);

// Level and weight of the three newforms (coefficients come from
// qexp::newform_qexp; the functional-equation sign from fricke_sign).
struct NewformData {
    FormId id;
    long level;
    long weight;
};
NewformData form_data(FormId id);

// The sign eps in Lambda(s) = eps Lambda(k-s): the unique choice in {+1,-1}
// making the two-sum expansion independent of the split parameter (tested at
// two split points; mismatch below 10^{-digits/2} required, otherwise
// verification_error).
int fricke_sign(FormId id, const PrecisionContext& ctx);

// L(form, s) by the two-sum expansion above.  Supported strip: s >= 1 and
// k - s >= -1.  The optional split parameter must be positive; the value is
// split-independent and defaults to A = 1.
ApproxReal modular_L(FormId id, long s, const PrecisionContext& ctx,
                     const ExactRational& split = ExactRational(1));

// Gamma-product closed forms for the two weight-3 L-values:
//   f15: Gamma(1/15)Gamma(2/15)Gamma(4/15)Gamma(8/15) / (120 sqrt(3) pi)
//   g12: Gamma(1/3)^6 / (2^{17/3} pi^2)
// e14 has no such closed form here and is rejected.
ApproxReal rwz_closed(FormId id, const PrecisionContext& ctx);

// Trace of Frobenius a_p = p + 1 - #E(F_p) for the curve y^2 = x^3 + 1 by
// direct point counting with a quadratic-residue table.  Requires p prime
// with p not dividing 6.
long ec_ap(long p);

// For each good prime p <= pmax (p >= 5), the exact integer
//   (a_p^2 - p) - (chi_{-3}(p) p + b_p)
// where b_p is the p-th coefficient of the weight-3 level-12 form.  Every
// defect must vanish; callers assert on the returned list.
std::vector<std::pair<long, long>> sym2_local_defect(long pmax);

// Hecke-character theta series on the lattice m^2 + 3n^2, exact coefficients
// for exponents < N:
//   psi:  (1/2) sum m chi_{-3}(m) q^{m^2+3n^2}   (weight 2)
//   Psi:  (1/2) sum (m^2 - 3n^2) q^{m^2+3n^2}    (weight 3)
enum class GrossenKind { psi, Psi };
qexp::QExpansion grossen_qexp(GrossenKind kind, long N);

}  // namespace lfun
}  // namespace feynmod
