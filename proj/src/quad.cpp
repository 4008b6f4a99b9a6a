#include "feynmod/quad.hpp"

#include <algorithm>
#include <cmath>

#include "feynmod/errors.hpp"

namespace feynmod::quad {
namespace {

using mp::ApproxComplex;
using mp::ApproxReal;
using mp::Mag;

// log2 of an upper bound, -inf when exactly zero.  Goes through the mpfr
// exponent so it stays meaningful far outside double range.
double mag_log2(const Mag& m) {
    if (m.is_zero()) return -1e300;
    if (!m.is_finite()) return 1e300;
    double d = m.to_double();
    if (d > 0 && std::isfinite(d)) return std::log2(d);
    // Out of double range: fall back to the raw exponent.
    return static_cast<double>(mpfr_get_exp(m.raw()));
}

template <class V>
struct VOps;
template <>
struct VOps<ApproxReal> {
    static ApproxReal zero(mpfr_prec_t p) { return ApproxReal::zero(p); }
    static ApproxReal round(const ApproxReal& v, mpfr_prec_t p) {
        return mp::round_to_prec(v, p);
    }
};
template <>
struct VOps<ApproxComplex> {
    static ApproxComplex zero(mpfr_prec_t p) { return ApproxComplex::zero(p); }
    static ApproxComplex round(const ApproxComplex& v, mpfr_prec_t p) {
        return ApproxComplex(mp::round_to_prec(v.re(), p),
                             mp::round_to_prec(v.im(), p));
    }
};

// Outermost node position: the smallest T with the bare weight
// (pi/2) e^t exp(-pi e^t) below 2^-bits, solved iteratively.  The extra
// margin absorbs integrable endpoint growth of the integrand.
double window_cutoff(long bits) {
    double L = 2.0 * (static_cast<double>(bits) + 10.0) * 0.6931471805599453;
    double T = std::log(2.0 * std::max(3.0, L) / 3.141592653589793);
    for (int i = 0; i < 3; ++i)
        T = std::log(2.0 * (L + T + 2.0) / 3.141592653589793);
    return std::max(T, 1.0);
}

template <class V>
V ts_core(const std::function<V(const ApproxReal&)>& f, const ApproxReal& a,
          const ApproxReal& b, const mp::PrecisionContext& ctx,
          const TanhSinhOptions& opt) {
    if (!(b - a).definitely_positive())
        throw feynmod::domain_error("integrate_ts: interval is not positive");
    const mpfr_prec_t prec = ctx.prec_bits + 32;
    const long tol_bits = opt.tol_bits > 0 ? opt.tol_bits : ctx.prec_bits;

    const ApproxReal c = mul_2si(a + b, -1);
    const ApproxReal hw = mul_2si(b - a, -1);
    const ApproxReal half_pi = mul_2si(mp::const_pi(prec), -1);
    const ApproxReal two = ApproxReal::of_long(2, prec);
    const double T = window_cutoff(prec + 16);

    // f(weight-scaled) at t = +-k 2^-level; the abscissa is reached as an
    // offset from the nearer endpoint through 1 -+ tanh(u) = 2/(e^{2|u|}+1),
    // which keeps it strictly inside the interval near the ends.
    auto eval_at = [&](long k, int level) -> V {
        ApproxReal t = mul_2si(ApproxReal::of_long(k, prec), -level);
        ApproxReal et = exp_ball(t);
        ApproxReal iet = recip(et);
        ApproxReal sh = mul_2si(et - iet, -1);
        ApproxReal ch = mul_2si(et + iet, -1);
        ApproxReal u = half_pi * sh;
        ApproxReal d = mul_2si(recip(add_long(exp_ball(mul_2si(u, 1)), 1)), 1);
        ApproxReal w = half_pi * ch * (d * (two - d));
        if (k == 0) return f(c) * w;
        ApproxReal off = hw * d;
        V s = f(b - off) * w;
        s += f(a + off) * w;
        return s;
    };

    int level = std::clamp(opt.min_level - 1, 1, opt.max_level);
    V sum = VOps<V>::zero(prec);
    {
        long kmax = static_cast<long>(std::ceil(T * std::ldexp(1.0, level)));
        sum = eval_at(0, level);
        for (long k = 1; k <= kmax; ++k) sum += eval_at(k, level);
        sum = mul_2si(sum, -level);
    }
    Mag last_diff = Mag::two_pow(16);
    bool converged = false;
    for (++level; level <= opt.max_level; ++level) {
        long kmax = static_cast<long>(std::ceil(T * std::ldexp(1.0, level)));
        V odd = VOps<V>::zero(prec);
        for (long k = 1; k <= kmax; k += 2) odd += eval_at(k, level);
        V next = mul_2si(sum, -1) + mul_2si(odd, -level);
        V diff = next - sum;
        sum = next;
        last_diff = diff.abs_upper();
        double scale_l2 = std::max(0.0, mag_log2(sum.abs_upper()));
        if (level >= opt.min_level &&
            mag_log2(last_diff) <= scale_l2 - static_cast<double>(tol_bits)) {
            converged = true;
            break;
        }
    }
    // Convergence estimate (doubled; quadrupled when the cap was hit) plus
    // the window-truncation slack, both scaled by the half-width.
    Mag extra = mul_2si(last_diff, converged ? 1 : 2);
    extra += Mag::two_pow(-(ctx.prec_bits + 8));
    V out = sum * hw;
    out.widen(extra * hw.abs_upper());
    return VOps<V>::round(out, ctx.prec_bits);
}

}  // namespace

ApproxComplex integrate_ts(
    const std::function<ApproxComplex(const ApproxReal&)>& f,
    const ApproxReal& a, const ApproxReal& b, const mp::PrecisionContext& ctx,
    const TanhSinhOptions& opt) {
    return ts_core<ApproxComplex>(f, a, b, ctx, opt);
}

ApproxReal integrate_ts_real(
    const std::function<ApproxReal(const ApproxReal&)>& f,
    const ApproxReal& a, const ApproxReal& b, const mp::PrecisionContext& ctx,
    const TanhSinhOptions& opt) {
    return ts_core<ApproxReal>(f, a, b, ctx, opt);
}

double integrate_ts_d(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_level) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    const double half_pi = 1.5707963267948966;
    const double T = window_cutoff(64);
    auto node_sum = [&](long k, double h) {
        double t = static_cast<double>(k) * h;
        double sh = std::sinh(t), ch = std::cosh(t);
        double u = half_pi * sh;
        double d = 2.0 / (std::exp(2.0 * std::abs(u)) + 1.0);
        double w = half_pi * ch * d * (2.0 - d);
        if (k == 0) return f(c) * w;
        double off = hw * d;
        return (f(b - off) + f(a + off)) * w;
    };
    int level = 2;
    double h = std::ldexp(1.0, -level);
    long kmax = static_cast<long>(std::ceil(T / h));
    double sum = node_sum(0, h);
    for (long k = 1; k <= kmax; ++k) sum += node_sum(k, h);
    sum *= h;
    for (++level; level <= max_level; ++level) {
        h = std::ldexp(1.0, -level);
        kmax = static_cast<long>(std::ceil(T / h));
        double odd = 0.0;
        for (long k = 1; k <= kmax; k += 2) odd += node_sum(k, h);
        double next = 0.5 * sum + h * odd;
        double diff = std::abs(next - sum);
        sum = next;
        if (level >= 5 && diff <= tol * std::max(1.0, std::abs(sum))) break;
    }
    return sum * hw;
}

}  // namespace feynmod::quad
