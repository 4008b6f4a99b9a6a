#pragma once
// Double-exponential (tanh-sinh) quadrature over a finite interval, in ball
// arithmetic and in plain double precision.  The ball version reports the
// propagated integrand radii plus a level-to-level convergence estimate in
// the result's error radius; it is the workhorse behind every integral
// representation in this project.

#include <functional>

#include "feynmod/mp.hpp"

namespace feynmod::quad {

struct TanhSinhOptions {
    // First refinement level whose value is compared against the previous
    // one; levels below it are always computed.
    int min_level = 4;
    // Hard cap on refinement.  Level l places nodes at spacing 2^-l, so the
    // node count roughly doubles per level.
    int max_level = 11;
    // Stop refining once consecutive levels agree to 2^-tol_bits (absolute,
    // scaled by max(1, |I|)).  0 means: use the context's precision.
    long tol_bits = 0;
};

// Integral of f over [a, b] (finite, a < b).  Abscissas are passed to f as
// balls strictly inside (a, b); integrable endpoint behavior is tolerated
// because the double-exponential weights crush it.  The returned ball's
// radius contains the summed node radii, the truncation slack of the node
// window, and twice the final level-to-level difference; the difference
// estimate is empirical, so a result that stopped at max_level without
// meeting the tolerance is returned with a correspondingly wide radius
// rather than raised as an error.
mp::ApproxComplex integrate_ts(
    const std::function<mp::ApproxComplex(const mp::ApproxReal&)>& f,
    const mp::ApproxReal& a, const mp::ApproxReal& b,
    const mp::PrecisionContext& ctx, const TanhSinhOptions& opt = {});

// Same rule for a real-valued integrand.
mp::ApproxReal integrate_ts_real(
    const std::function<mp::ApproxReal(const mp::ApproxReal&)>& f,
    const mp::ApproxReal& a, const mp::ApproxReal& b,
    const mp::PrecisionContext& ctx, const TanhSinhOptions& opt = {});

// Plain double-precision tanh-sinh on [a, b] for the 5-8 digit cross-checks;
// refines until |I_l - I_{l-1}| <= tol * max(1, |I_l|) or max_level.
double integrate_ts_d(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-12, int max_level = 10);

}  // namespace feynmod::quad
