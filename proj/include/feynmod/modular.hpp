#pragma once
// Evaluation of the Dedekind eta function, eta quotients, Weber functions,
// Eisenstein series, the degree-six hauptmodul t and its inverse, and the
// periods varpi_1, varpi_2, at points of the upper half plane.  Every
// evaluator absorbs its truncation tail into the ball's error radius.

#include <vector>

#include "feynmod/mp.hpp"
#include "feynmod/qexp.hpp"

namespace feynmod::modular {

// A point in the upper half plane.  Evaluators verify Im(tau) > 0 as a ball
// property (domain_error otherwise), and raise convergence_failure when
// Im(tau) is too small for a q-series to converge at the working precision.
using Tau = mp::ApproxComplex;

// Exact description of a quadratic point (a + sqrt(disc)) / den, disc < 0,
// attached to the integer value the hauptmodul t takes there.
struct CMPoint {
    long t_value;
    long a;
    long disc;
    long den;
    Tau eval(const mp::PrecisionContext& ctx) const;
};

// The quadratic points at which t takes the values -32, -2, 1, 4, 16, 64.
const std::vector<CMPoint>& cm_points();
// Lookup by t value; domain_error for values outside the table.
const CMPoint& cm_point(long t_value);

// Dedekind eta: e^{pi i tau/12} times the sparse pentagonal-number series
// for prod (1 - q^n).
mp::ApproxComplex eta(const Tau& tau, const mp::PrecisionContext& ctx);

// prod_k eta(m_k tau)^{e_k} for distinct, sorted multipliers m_k >= 1.
mp::ApproxComplex eta_quotient_eval(const std::vector<qexp::EtaFactor>& spec,
                                    const Tau& tau,
                                    const mp::PrecisionContext& ctx);

enum class WeberKind { f0, f1, f2 };

// The Weber functions
//   f0(tau) = e^{-pi i/24} eta((tau+1)/2) / eta(tau),
//   f1(tau) = eta(tau/2) / eta(tau),
//   f2(tau) = sqrt(2) eta(2 tau) / eta(tau).
mp::ApproxComplex weber(WeberKind kind, const Tau& tau,
                        const mp::PrecisionContext& ctx);

// E_k(tau) for even k >= 2 (k = 2 is the quasi-modular series).
// domain_error for odd or nonpositive k.
mp::ApproxComplex eisenstein_eval(long k, const Tau& tau,
                                  const mp::PrecisionContext& ctx);

// t(tau) = -(eta(tau) eta(3 tau) / (eta(2 tau) eta(6 tau)))^6.
mp::ApproxComplex hauptmodul_t(const Tau& tau, const mp::PrecisionContext& ctx);

// Newton inversion of the hauptmodul: returns tau near seed with
// t(tau) = target.  The logarithmic derivative of t is evaluated through
// weight-2 Eisenstein series; steps are damped to length <= 1/10; the
// returned ball's radius is a first-order bound derived from the final
// residual.  convergence_failure, with iteration diagnostics, when the
// iteration does not settle.
Tau invert_t(const mp::ApproxComplex& target, const Tau& seed,
             const mp::PrecisionContext& ctx);

// The periods
//   varpi(1) = (eta(2 tau) eta(6 tau))^4 / (eta(tau) eta(3 tau))^2,
//   varpi(2) = (eta(tau) eta(3 tau))^4 / (eta(2 tau) eta(6 tau))^2.
// `which` must be 1 or 2.
mp::ApproxComplex varpi(int which, const Tau& tau, const mp::PrecisionContext& ctx);

}  // namespace feynmod::modular
