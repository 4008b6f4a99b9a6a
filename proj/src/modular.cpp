#include "feynmod/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "feynmod/errors.hpp"
#include "feynmod/special.hpp"

namespace feynmod::modular {

using mp::ApproxComplex;
using mp::ApproxReal;
using mp::ExactRational;
using mp::Mag;
using mp::PrecisionContext;

namespace {

void require_upper_half(const Tau& tau, const char* where) {
    if (!tau.im().definitely_positive()) {
        throw domain_error(std::string(where) + ": tau must lie in the upper half plane");
    }
}

// q = e^{2 pi i tau}.
ApproxComplex nome(const Tau& tau, mpfr_prec_t prec) {
    ApproxReal two_pi = mp::mul_2si(mp::const_pi(prec), 1);
    return mp::exp_ball(mp::mul_i(tau * two_pi));
}

// Upper bound on |q| as a double, biased upward.
double nome_abs_up(const ApproxComplex& q) {
    return q.abs_upper().to_double() * (1.0 + 1e-9);
}

// Mag holding 2^{ceil(l2) + 1} for a log2-space bound l2.
Mag mag_from_log2(double l2) {
    if (l2 < -1e18) return Mag::zero();
    return Mag::two_pow(static_cast<long>(std::ceil(l2)) + 1);
}

}  // namespace

Tau CMPoint::eval(const PrecisionContext& ctx) const {
    mpfr_prec_t p = ctx.prec_bits;
    ExactRational re_q(a, den);
    re_q.canonicalize();
    ApproxReal re = ApproxReal::of_mpq(re_q, p);
    ApproxReal im = mp::mul_mpq(mp::sqrt_ul(static_cast<unsigned long>(-disc), p),
                                ExactRational(1, den));
    return Tau(re, im);
}

const std::vector<CMPoint>& cm_points() {
    static const std::vector<CMPoint> table = {
        {-32, 0, -3, 3}, {-2, 0, -3, 6},  {1, -3, -15, 24},
        {4, -3, -3, 12}, {16, 3, -3, 6},  {64, -3, -15, 6},
    };
    return table;
}

const CMPoint& cm_point(long t_value) {
    for (const auto& p : cm_points()) {
        if (p.t_value == t_value) return p;
    }
    throw domain_error("cm_point: no tabulated point for this t value");
}

ApproxComplex eta(const Tau& tau, const PrecisionContext& ctx) {
    require_upper_half(tau, "eta");
    const mpfr_prec_t p = ctx.prec_bits;
    ApproxComplex q = nome(tau, p);
    const double qd = nome_abs_up(q);
    if (!(qd < 0.999)) {
        throw convergence_failure("eta: |q| too close to 1; Im(tau) is too small");
    }
    const double log2q = std::log2(qd);  // < 0
    const double bits = static_cast<double>(p) + 10.0;

    ApproxComplex acc = ApproxComplex::of_real(ApproxReal::of_long(1, p));
    Mag tail;
    bool converged = false;
    for (long k = 1; k < 200000; ++k) {
        long e1 = k * (3 * k - 1) / 2;
        long e2 = k * (3 * k + 1) / 2;
        ApproxComplex term = mp::pow_si(q, e1) + mp::pow_si(q, e2);
        if (k % 2 == 1) {
            acc -= term;
        } else {
            acc += term;
        }
        // First omitted exponent; the remaining terms are dominated by a
        // geometric series with ratio qd.
        long next = (k + 1) * (3 * (k + 1) - 1) / 2;
        double lt = static_cast<double>(next) * log2q * (1.0 - 1e-12) +
                    std::log2(2.0 / (1.0 - qd));
        if (lt < -bits) {
            tail = mag_from_log2(lt);
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw convergence_failure("eta: series did not reach the requested tolerance");
    }
    acc.widen(tail);
    ApproxComplex prefactor =
        mp::exp_ball(mp::mul_i(mp::mul_mpq(tau, ExactRational(1, 12)) * mp::const_pi(p)));
    return prefactor * acc;
}

ApproxComplex eta_quotient_eval(const std::vector<qexp::EtaFactor>& spec,
                                const Tau& tau, const PrecisionContext& ctx) {
    if (spec.empty()) throw domain_error("eta_quotient_eval: empty spec");
    for (size_t i = 0; i + 1 < spec.size(); ++i) {
        if (spec[i].multiplier >= spec[i + 1].multiplier) {
            throw domain_error("eta_quotient_eval: multipliers must be distinct and sorted");
        }
    }
    require_upper_half(tau, "eta_quotient_eval");
    const mpfr_prec_t p = ctx.prec_bits;
    ApproxComplex acc = ApproxComplex::of_real(ApproxReal::of_long(1, p));
    for (const auto& f : spec) {
        if (f.multiplier < 1 || f.exponent == 0) {
            throw domain_error("eta_quotient_eval: invalid factor");
        }
        ApproxComplex e = eta(mp::mul_mpq(tau, ExactRational(f.multiplier)), ctx);
        acc *= mp::pow_si(e, f.exponent);
    }
    return acc;
}

ApproxComplex weber(WeberKind kind, const Tau& tau, const PrecisionContext& ctx) {
    require_upper_half(tau, "weber");
    const mpfr_prec_t p = ctx.prec_bits;
    ApproxComplex one = ApproxComplex::of_real(ApproxReal::of_long(1, p));
    ApproxComplex denom = eta(tau, ctx);
    switch (kind) {
        case WeberKind::f0: {
            ApproxComplex shifted = mp::mul_mpq(tau + one, ExactRational(1, 2));
            ApproxComplex num = eta(shifted, ctx);
            ApproxComplex phase = mp::exp_ball(
                mp::mul_i(ApproxComplex::of_real(mp::mul_mpq(mp::const_pi(p), ExactRational(-1, 24)))));
            return phase * (num / denom);
        }
        case WeberKind::f1: {
            ApproxComplex num = eta(mp::mul_mpq(tau, ExactRational(1, 2)), ctx);
            return num / denom;
        }
        case WeberKind::f2: {
            ApproxComplex num = eta(mp::mul_mpq(tau, ExactRational(2)), ctx);
            ApproxReal root2 = mp::sqrt_ul(2, p);
            return root2 * (num / denom);
        }
    }
    throw domain_error("weber: unknown kind");
}

ApproxComplex eisenstein_eval(long k, const Tau& tau, const PrecisionContext& ctx) {
    if (k < 2 || k % 2 != 0) {
        throw domain_error("eisenstein_eval: weight must be even and >= 2");
    }
    require_upper_half(tau, "eisenstein_eval");
    const mpfr_prec_t p = ctx.prec_bits;
    ApproxComplex q = nome(tau, p);
    const double qd = nome_abs_up(q);
    if (!(qd < 0.999)) {
        throw convergence_failure("eisenstein_eval: |q| too close to 1; Im(tau) is too small");
    }
    const double log2q = std::log2(qd);
    const double bits = static_cast<double>(p) + 10.0;

    ExactRational factor =
        ExactRational(-2 * k) / special::bernoulli(static_cast<unsigned long>(k));
    const double lf = std::log2(std::fabs(factor.get_d())) + 1e-6;
    const double kd = static_cast<double>(k);

    ApproxComplex acc = ApproxComplex::of_real(ApproxReal::of_long(1, p));
    ApproxComplex qn = ApproxComplex::of_real(ApproxReal::of_long(1, p));
    Mag tail;
    bool converged = false;
    for (long n = 1; n < 10000000; ++n) {
        qn *= q;
        acc += mp::mul_mpq(qn, factor * qexp::sigma_power(k - 1, n));
        // sigma_{k-1}(m) <= m^k, and for m > n the ratio of consecutive
        // bounds is at most rho below; stop once the geometric majorant of
        // the omitted terms is negligible.
        double nd = static_cast<double>(n);
        double rho = qd * std::pow((nd + 2.0) / (nd + 1.0), kd);
        if (rho < 0.9999) {
            double lt = lf + kd * std::log2(nd + 1.0) * (1.0 + 1e-12) +
                        (nd + 1.0) * log2q * (1.0 - 1e-12) - std::log2(1.0 - rho);
            if (lt < -bits) {
                tail = mag_from_log2(lt);
                converged = true;
                break;
            }
        }
    }
    if (!converged) {
        throw convergence_failure("eisenstein_eval: series did not converge");
    }
    acc.widen(tail);
    return acc;
}

ApproxComplex hauptmodul_t(const Tau& tau, const PrecisionContext& ctx) {
    require_upper_half(tau, "hauptmodul_t");
    ApproxComplex e1 = eta(tau, ctx);
    ApproxComplex e2 = eta(mp::mul_mpq(tau, ExactRational(2)), ctx);
    ApproxComplex e3 = eta(mp::mul_mpq(tau, ExactRational(3)), ctx);
    ApproxComplex e6 = eta(mp::mul_mpq(tau, ExactRational(6)), ctx);
    ApproxComplex ratio = (e1 * e3) / (e2 * e6);
    return -mp::pow_si(ratio, 6);
}

namespace {

// Strip the radius: the ball centered at the midpoint with radius zero.
ApproxComplex snap(const ApproxComplex& z) {
    return ApproxComplex(ApproxReal::from_parts(z.re().mid(), Mag::zero()),
                         ApproxReal::from_parts(z.im().mid(), Mag::zero()));
}

// log2 upper bound of a Mag, safe far below double underflow.
double mag_log2(const Mag& m) {
    if (m.is_zero()) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(mpfr_get_exp(m.raw()));
}

// (log t)'(tau) = (pi i / 2) (E2(tau) + 3 E2(3 tau) - 2 E2(2 tau) - 6 E2(6 tau)).
ApproxComplex log_derivative_t(const Tau& tau, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.prec_bits;
    ApproxComplex s = eisenstein_eval(2, tau, ctx);
    s += mp::mul_mpq(eisenstein_eval(2, mp::mul_mpq(tau, ExactRational(3)), ctx),
                     ExactRational(3));
    s -= mp::mul_mpq(eisenstein_eval(2, mp::mul_mpq(tau, ExactRational(2)), ctx),
                     ExactRational(2));
    s -= mp::mul_mpq(eisenstein_eval(2, mp::mul_mpq(tau, ExactRational(6)), ctx),
                     ExactRational(6));
    ApproxComplex half_pi_i =
        mp::mul_i(ApproxComplex::of_real(mp::mul_2si(mp::const_pi(p), -1)));
    return half_pi_i * s;
}

}  // namespace

Tau invert_t(const ApproxComplex& target, const Tau& seed, const PrecisionContext& ctx) {
    require_upper_half(seed, "invert_t");
    PrecisionContext work = ctx;
    work.prec_bits = ctx.prec_bits + 64;
    const mpfr_prec_t wp = work.prec_bits;

    const double target_scale =
        std::max(1.0, mp::abs_ball(target).to_double());
    const double tol_log2 = -(static_cast<double>(ctx.prec_bits) + 20.0) +
                            std::log2(target_scale);

    Tau cur = snap(ApproxComplex(mp::round_to_prec(seed.re(), wp),
                                 mp::round_to_prec(seed.im(), wp)));

    double last_resid = std::numeric_limits<double>::infinity();
    ApproxComplex prev_raw;  // previous undamped Newton step
    bool have_prev = false;
    for (int iter = 0; iter < 80; ++iter) {
        ApproxComplex t_val;
        ApproxComplex deriv;
        try {
            t_val = hauptmodul_t(cur, work);
            deriv = t_val * log_derivative_t(cur, work);
        } catch (const convergence_failure& e) {
            throw convergence_failure(
                std::string("invert_t: iterate left the convergent region (") + e.what() + ")");
        }
        if (mp::abs_ball(deriv).contains_zero()) {
            throw convergence_failure("invert_t: derivative indistinguishable from zero");
        }
        ApproxComplex resid = t_val - target;
        last_resid = mag_log2(mp::abs_ball(resid).abs_upper());
        if (last_resid < tol_log2) {
            // First-order error transport.  At a simple root of t - target
            // this bounds |tau - tau*| by ~|resid / t'|; doubling also covers
            // the double roots at the involution fixed points, where the
            // Newton correction approaches half the true error.
            ApproxComplex err = resid / deriv;
            Mag r = err.abs_upper() + err.abs_upper();
            Tau out(ApproxReal::from_parts(cur.re().mid(), r),
                    ApproxReal::from_parts(cur.im().mid(), r));
            return ApproxComplex(mp::round_to_prec(out.re(), ctx.prec_bits),
                                 mp::round_to_prec(out.im(), ctx.prec_bits));
        }
        ApproxComplex delta = resid / deriv;
        // Aitken acceleration: a stable ratio between consecutive raw steps
        // signals linear convergence (a multiple root of t - target); the
        // geometric sum of the remaining steps is delta / (1 - ratio).
        if (have_prev && !mp::abs_ball(prev_raw).contains_zero()) {
            ApproxComplex ratio = delta / prev_raw;
            double r = mp::abs_ball(ratio).to_double();
            if (r >= 0.3 && r <= 0.95) {
                ApproxComplex one_c = ApproxComplex::of_real(ApproxReal::of_long(1, wp));
                delta = delta / (one_c - ratio);
            }
        }
        prev_raw = resid / deriv;
        have_prev = true;
        double dlen = mp::abs_ball(delta).to_double();
        if (dlen > 0.1) {
            delta = mp::mul_mpq(delta, ExactRational(1, static_cast<long>(std::ceil(dlen / 0.1))));
        }
        Tau next = snap(cur - delta);
        int halvings = 0;
        while (!next.im().definitely_positive() && halvings < 60) {
            delta = mp::mul_mpq(delta, ExactRational(1, 2));
            next = snap(cur - delta);
            ++halvings;
        }
        if (!next.im().definitely_positive()) {
            throw convergence_failure("invert_t: step pushed tau out of the upper half plane");
        }
        cur = next;
    }
    std::ostringstream msg;
    msg << "invert_t: no convergence after 80 iterations; last residual ~ 2^"
        << last_resid;
    throw convergence_failure(msg.str());
}

ApproxComplex varpi(int which, const Tau& tau, const PrecisionContext& ctx) {
    if (which != 1 && which != 2) throw domain_error("varpi: which must be 1 or 2");
    require_upper_half(tau, "varpi");
    ApproxComplex e1 = eta(tau, ctx);
    ApproxComplex e2 = eta(mp::mul_mpq(tau, ExactRational(2)), ctx);
    ApproxComplex e3 = eta(mp::mul_mpq(tau, ExactRational(3)), ctx);
    ApproxComplex e6 = eta(mp::mul_mpq(tau, ExactRational(6)), ctx);
    ApproxComplex a = e2 * e6;
    ApproxComplex b = e1 * e3;
    if (which == 1) return mp::pow_si(a, 4) / mp::pow_si(b, 2);
    return mp::pow_si(b, 4) / mp::pow_si(a, 2);
}

}  // namespace feynmod::modular
