// Exact q-expansions: truncated Fourier series with rational coefficients and
// a rational leading exponent.  A QExpansion represents
//     sum_{k=0}^{len-1} coeff[k] * q^(lead + k)
// with every coefficient exact and the truncation order tracked exactly: the
// object stands for its polynomial part plus an unknown tail of order
// >= lead + len ("order()" below).  Arithmetic (sum, product, power,
// inversion, integer stretch q -> q^a) propagates the truncation order of the
// least-known operand so no claimed coefficient is ever contaminated.
#ifndef FEYNMOD_QEXP_HPP
#define FEYNMOD_QEXP_HPP

#include <vector>

#include "feynmod/mp.hpp"

namespace feynmod::qexp {

using mp::ApproxComplex;
using mp::ApproxReal;
using mp::ExactRational;
using mp::PrecisionContext;

class QExpansion {
  public:
    // Zero expansion known through exponents < order.
    static QExpansion zero(const ExactRational& order);
    // c * q^e, known through exponents < e + n_known.
    static QExpansion monomial(const ExactRational& c, const ExactRational& e,
                               long n_known);
    // Integer-exponent series c0 + c1 q + ... from a coefficient vector.
    static QExpansion from_coeffs(std::vector<ExactRational> coeffs);
    // Series sum coeffs[k] q^{lead+k}, known through < lead + coeffs.size().
    static QExpansion with_lead(const ExactRational& lead,
                                std::vector<ExactRational> coeffs);

    const ExactRational& lead() const { return lead_; }
    long length() const { return static_cast<long>(coeff_.size()); }
    // First exponent about which nothing is claimed: lead + length.
    ExactRational order() const;
    // Coefficient of q^e; zero when e is below order and off the support;
    // domain_error when e >= order (the coefficient is not known).
    ExactRational coefficient(const ExactRational& e) const;
    // Coefficient by offset k from the leading exponent (0 <= k < length).
    const ExactRational& at(long k) const { return coeff_[static_cast<size_t>(k)]; }

    // Drop leading zeros (never past the truncation order).
    QExpansion normalized() const;
    // Keep only exponents < new_order (must not exceed order()).
    QExpansion truncated(const ExactRational& new_order) const;

    friend QExpansion operator+(const QExpansion& a, const QExpansion& b);
    friend QExpansion operator-(const QExpansion& a, const QExpansion& b);
    friend QExpansion operator*(const QExpansion& a, const QExpansion& b);
    QExpansion operator-() const;
    friend QExpansion mul_scalar(const QExpansion& a, const ExactRational& c);
    // Integer power (n >= 1 always valid; n <= 0 requires invertibility).
    friend QExpansion pow_int(const QExpansion& a, long n);
    // Reciprocal; requires a nonzero leading coefficient.
    friend QExpansion inverse(const QExpansion& a);
    // q -> q^a for integer a >= 1 (series in tau -> series in a*tau).
    friend QExpansion stretch(const QExpansion& a, long m);
    // Multiply by the exact monomial q^delta (exponent shift only).
    friend QExpansion shift_exponent(const QExpansion& a, const ExactRational& delta);

    // Evaluate at q = e^{2 pi i tau}; the unknown tail is charged to the
    // radius via the geometric bound |q|^order / (1 - |q|) * max plausible
    // coefficient growth is NOT assumed -- instead the caller-supplied
    // tail_scale multiplies |q|^order/(1-|q|).  See eta/eisenstein users.
    ApproxComplex eval(const ApproxComplex& tau, const PrecisionContext& ctx,
                       double tail_scale) const;

  private:
    ExactRational lead_;                 // exponent of coeff_[0]
    std::vector<ExactRational> coeff_;   // step-1 integer offsets from lead_
    ExactRational order_;                // nothing known at exponent >= order_
};

QExpansion mul_scalar(const QExpansion& a, const ExactRational& c);
QExpansion pow_int(const QExpansion& a, long n);
QExpansion inverse(const QExpansion& a);
QExpansion stretch(const QExpansion& a, long m);
QExpansion shift_exponent(const QExpansion& a, const ExactRational& delta);

// eta(m tau)^e as a formal series in q = e^{2 pi i tau}, exact through
// exponents < N: q^{m e/24} prod_{n>=1}(1 - q^{mn})^e.
QExpansion eta_power_qexp(long m, long e, long N);

// Product over an eta-quotient spec [(m1,e1),...]; exact through < N.
struct EtaFactor {
    long multiplier;  // m >= 1
    long exponent;    // e != 0
};
QExpansion eta_quotient_qexp(const std::vector<EtaFactor>& spec, long N);

// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n,
// exact through < N.  Rejects odd or k < 2.
QExpansion eisenstein_qexp(long k, long N);

// Theta series of a positive-definite binary quadratic form:
// coefficient of q^j = #{(m,n) : a m^2 + b m n + c n^2 = j}, j < N.
struct BQF {
    long a, b, c;
    long discriminant() const { return b * b - 4 * a * c; }
};
QExpansion theta_bqf_qexp(const BQF& form, long N);

// The three cusp forms used downstream, exact integer coefficients through < N.
//  f15: weight 3 level 15 -- built BOTH as
//       eta(t)eta(3t)eta(5t)eta(15t) * theta[1,1,4]  and as
//       eta^3(3t)eta^3(5t) + eta^3(t)eta^3(15t); the two must agree
//       coefficientwise (hard failure otherwise).
//  g12: eta^3(2t)eta^3(6t).
//  e14: eta(t)eta(2t)eta(7t)eta(14t), gated by a Hecke-multiplicativity
//       self-check a_{mn} = a_m a_n for coprime m,n with mn <= 30.
enum class FormId { f15, g12, e14 };
QExpansion newform_qexp(FormId id, long N);

// sigma(q) = (1/5)(-E4(t) + 16 E4(2t) + 9 E4(3t) - 144 E4(6t)),
// exact rational coefficients through < N; constant term -24.
QExpansion sigma_weight_qexp(long N);

// Exact divisor power sum sigma_t(n) = sum_{d|n} d^t (t may be negative).
ExactRational sigma_power(long t, unsigned long n);

}  // namespace feynmod::qexp

#endif
