#include "feynmod/diffop.hpp"

#include <utility>

namespace feynmod {
namespace diffop {

namespace {

ExactRational rq(long num, long den) {
    ExactRational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// RationalPoly

RationalPoly::RationalPoly(std::vector<ExactRational> coeffs)
    : coeff_(std::move(coeffs)) {
    trim();
}

RationalPoly RationalPoly::constant(const ExactRational& c) {
    return RationalPoly({c});
}

RationalPoly RationalPoly::monomial(const ExactRational& c, long n) {
    if (n < 0) throw domain_error("monomial exponent must be nonnegative");
    std::vector<ExactRational> v(static_cast<size_t>(n) + 1, ExactRational(0));
    v.back() = c;
    return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
    while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
}

long RationalPoly::degree() const {
    return static_cast<long>(coeff_.size()) - 1;
}

ExactRational RationalPoly::coefficient(long n) const {
    if (n < 0) throw domain_error("negative coefficient index");
    if (n >= static_cast<long>(coeff_.size())) return ExactRational(0);
    return coeff_[static_cast<size_t>(n)];
}

const ExactRational& RationalPoly::leading() const {
    if (coeff_.empty()) throw domain_error("zero polynomial has no leading coefficient");
    return coeff_.back();
}

RationalPoly RationalPoly::derivative() const {
    if (coeff_.size() <= 1) return RationalPoly();
    std::vector<ExactRational> d(coeff_.size() - 1);
    for (size_t i = 1; i < coeff_.size(); ++i)
        d[i - 1] = coeff_[i] * ExactRational(static_cast<long>(i));
    return RationalPoly(std::move(d));
}

ExactRational RationalPoly::eval(const ExactRational& x) const {
    ExactRational acc(0);
    for (size_t i = coeff_.size(); i-- > 0;) acc = acc * x + coeff_[i];
    return acc;
}

ApproxReal RationalPoly::eval_ball(const ApproxReal& x) const {
    ApproxReal acc = ApproxReal::zero(x.prec());
    for (size_t i = coeff_.size(); i-- > 0;)
        acc = acc * x + ApproxReal::of_mpq(coeff_[i], x.prec());
    return acc;
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
    std::vector<ExactRational> s(std::max(coeff_.size(), o.coeff_.size()),
                                 ExactRational(0));
    for (size_t i = 0; i < coeff_.size(); ++i) s[i] += coeff_[i];
    for (size_t i = 0; i < o.coeff_.size(); ++i) s[i] += o.coeff_[i];
    return RationalPoly(std::move(s));
}

RationalPoly RationalPoly::operator-() const {
    std::vector<ExactRational> s(coeff_.size());
    for (size_t i = 0; i < coeff_.size(); ++i) s[i] = -coeff_[i];
    return RationalPoly(std::move(s));
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const {
    return *this + (-o);
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
    if (coeff_.empty() || o.coeff_.empty()) return RationalPoly();
    std::vector<ExactRational> s(coeff_.size() + o.coeff_.size() - 1,
                                 ExactRational(0));
    for (size_t i = 0; i < coeff_.size(); ++i)
        for (size_t j = 0; j < o.coeff_.size(); ++j)
            s[i + j] += coeff_[i] * o.coeff_[j];
    return RationalPoly(std::move(s));
}

RationalPoly RationalPoly::mul_scalar(const ExactRational& c) const {
    std::vector<ExactRational> s(coeff_.size());
    for (size_t i = 0; i < coeff_.size(); ++i) s[i] = coeff_[i] * c;
    return RationalPoly(std::move(s));
}

void RationalPoly::divmod(const RationalPoly& d, RationalPoly* q,
                          RationalPoly* r) const {
    if (d.is_zero()) throw domain_error("polynomial division by zero");
    std::vector<ExactRational> rem = coeff_;
    long dd = d.degree();
    long qdeg = degree() - dd;
    std::vector<ExactRational> quo(qdeg >= 0 ? static_cast<size_t>(qdeg) + 1 : 0,
                                   ExactRational(0));
    const ExactRational& lead = d.leading();
    for (long k = qdeg; k >= 0; --k) {
        ExactRational c = rem[static_cast<size_t>(k + dd)] / lead;
        quo[static_cast<size_t>(k)] = c;
        if (c == 0) continue;
        for (long j = 0; j <= dd; ++j)
            rem[static_cast<size_t>(k + j)] -= c * d.coeff_[static_cast<size_t>(j)];
    }
    if (qdeg >= 0) rem.resize(static_cast<size_t>(dd));
    if (q) *q = RationalPoly(std::move(quo));
    if (r) *r = RationalPoly(std::move(rem));
}

RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
    while (!b.is_zero()) {
        RationalPoly r;
        a.divmod(b, nullptr, &r);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.mul_scalar(ExactRational(1) / a.leading());
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction()
    : num_(), den_(RationalPoly::constant(ExactRational(1))) {}

RationalFunction::RationalFunction(RationalPoly num, RationalPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw domain_error("rational function with zero denominator");
    reduce();
}

RationalFunction RationalFunction::from_poly(RationalPoly p) {
    return RationalFunction(std::move(p), RationalPoly::constant(ExactRational(1)));
}

RationalFunction RationalFunction::constant(const ExactRational& c) {
    return from_poly(RationalPoly::constant(c));
}

void RationalFunction::reduce() {
    if (num_.is_zero()) {
        den_ = RationalPoly::constant(ExactRational(1));
        return;
    }
    RationalPoly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        RationalPoly q;
        num_.divmod(g, &q, nullptr);
        num_ = q;
        den_.divmod(g, &q, nullptr);
        den_ = q;
    }
    ExactRational lead = den_.leading();
    if (lead != 1) {
        ExactRational inv = ExactRational(1) / lead;
        num_ = num_.mul_scalar(inv);
        den_ = den_.mul_scalar(inv);
    }
}

RationalFunction RationalFunction::derivative() const {
    RationalPoly n = num_.derivative() * den_ - num_ * den_.derivative();
    return RationalFunction(std::move(n), den_ * den_);
}

ExactRational RationalFunction::eval(const ExactRational& x) const {
    ExactRational d = den_.eval(x);
    if (d == 0) throw pole_error("rational function evaluated at a pole");
    return num_.eval(x) / d;
}

ApproxReal RationalFunction::eval_ball(const ApproxReal& x) const {
    ApproxReal d = den_.eval_ball(x);
    if (d.contains_zero())
        throw pole_error("denominator not bounded away from zero");
    return num_.eval_ball(x) / d;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw domain_error("division by the zero rational function");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}

// ---------------------------------------------------------------------------
// DiffOperator

DiffOperator::DiffOperator(std::vector<RationalFunction> coeffs)
    : coeff_(std::move(coeffs)) {
    while (coeff_.size() > 1 && coeff_.back().is_zero()) coeff_.pop_back();
    if (coeff_.empty()) coeff_.emplace_back();
}

const RationalFunction& DiffOperator::coefficient(long j) const {
    if (j < 0 || j > order()) throw domain_error("operator coefficient index out of range");
    return coeff_[static_cast<size_t>(j)];
}

DiffOperator monicize(const DiffOperator& op) {
    const RationalFunction& lead = op.coefficient(op.order());
    if (lead.is_zero()) throw domain_error("cannot monicize the zero operator");
    std::vector<RationalFunction> c;
    c.reserve(static_cast<size_t>(op.order()) + 1);
    for (long j = 0; j <= op.order(); ++j) c.push_back(op.coefficient(j) / lead);
    return DiffOperator(std::move(c));
}

DiffOperator symmetric_square(const DiffOperator& op2) {
    if (op2.order() != 2)
        throw domain_error("symmetric square requires a second-order operator");
    DiffOperator m = monicize(op2);
    const RationalFunction& p = m.coefficient(1);
    const RationalFunction& q = m.coefficient(0);
    RationalFunction two = RationalFunction::constant(ExactRational(2));
    RationalFunction three = RationalFunction::constant(ExactRational(3));
    RationalFunction four = RationalFunction::constant(ExactRational(4));
    std::vector<RationalFunction> c(4);
    c[3] = RationalFunction::constant(ExactRational(1));
    c[2] = three * p;
    c[1] = p.derivative() + two * p * p + four * q;
    c[0] = four * p * q + two * q.derivative();
    return DiffOperator(std::move(c));
}

DiffOperator pf_L3() {
    RationalPoly c3({rq(0, 1), rq(0, 1), rq(64, 1), rq(-20, 1), rq(1, 1)});
    RationalPoly c2({rq(0, 1), rq(192, 1), rq(-90, 1), rq(6, 1)});
    RationalPoly c1({rq(64, 1), rq(-68, 1), rq(7, 1)});
    RationalPoly c0({rq(-4, 1), rq(1, 1)});
    return DiffOperator({RationalFunction::from_poly(c0),
                         RationalFunction::from_poly(c1),
                         RationalFunction::from_poly(c2),
                         RationalFunction::from_poly(c3)});
}

DiffOperator pf_L2() {
    RationalPoly b2({rq(0, 1), rq(64, 1), rq(-20, 1), rq(1, 1)});
    RationalPoly b1({rq(64, 1), rq(-30, 1), rq(2, 1)});
    RationalPoly b0({rq(-2, 1), rq(1, 4)});
    return DiffOperator({RationalFunction::from_poly(b0),
                         RationalFunction::from_poly(b1),
                         RationalFunction::from_poly(b2)});
}

}  // namespace diffop
}  // namespace feynmod
