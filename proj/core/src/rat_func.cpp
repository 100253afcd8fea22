#include "btrack/rat_func.hpp"

#include <sstream>

#include "btrack/errors.hpp"

namespace btrack {

RatFuncElem::RatFuncElem(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
    if (num.is_zero()) {
        num_ = Polynomial{};
        den_ = Polynomial::constant(Rational(1));
        return;
    }
    const Polynomial g = Polynomial::gcd(num, den);
    if (g.degree() > 0) {
        num = num.divmod(g).first;
        den = den.divmod(g).first;
    }
    const Rational lead = den.leading();
    num_ = num * Polynomial::constant(lead.reciprocal());
    den_ = den.monic();
}

RatFuncElem RatFuncField::from_rational(const Rational& q) const {
    return RatFuncElem(Polynomial::constant(q), Polynomial::constant(Rational(1)));
}

RatFuncElem RatFuncField::generator() const {
    return RatFuncElem(Polynomial::variable(), Polynomial::constant(Rational(1)));
}

RatFuncElem RatFuncField::add(const Value& a, const Value& b) const {
    return RatFuncElem(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

RatFuncElem RatFuncField::neg(const Value& a) const {
    return RatFuncElem(-a.num(), a.den());
}

RatFuncElem RatFuncField::sub(const Value& a, const Value& b) const {
    return add(a, neg(b));
}

RatFuncElem RatFuncField::mul(const Value& a, const Value& b) const {
    return RatFuncElem(a.num() * b.num(), a.den() * b.den());
}

RatFuncElem RatFuncField::div(const Value& a, const Value& b) const {
    if (b.is_zero()) throw DivisionByZero("rational-function division by zero");
    return RatFuncElem(a.num() * b.den(), a.den() * b.num());
}

RatFuncElem RatFuncField::pow_int(const Value& a, long e) const {
    if (e == 0) return one();
    Value base = e < 0 ? div(one(), a) : a;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    Value acc = one();
    while (n) {
        if (n & 1) acc = mul(acc, base);
        base = mul(base, base);
        n >>= 1;
    }
    return acc;
}

RatFuncElem RatFuncField::root(const Value& a, unsigned k) const {
    if (a.is_constant()) {
        return from_rational(kth_root_value(a.constant_value(), k, cfg_.working_precision));
    }
    throw NoTransfer(
        "k-th roots of non-constant rational functions leave the field; "
        "this backend only validates real-closed-field facts on constants");
}

RatFuncElem RatFuncField::transcendental(FuncTag f, const Value& x) const {
    if (f == FuncTag::Abs) return abs(x);
    if (x.is_constant()) {
        if (f == FuncTag::Sqrt) return root(x, 2);
        return from_rational(transcendental_value(f, x.constant_value(), cfg_.working_precision));
    }
    throw NoTransfer(std::string(btrack::to_string(f)) +
                     " cannot be extended to non-constant elements of the "
                     "rational-function field: the ordered-field extension "
                     "carries no transfer principle");
}

RatFuncElem RatFuncField::abs(const Value& a) const {
    return sign_at_infinity(a) == Sign::Negative ? neg(a) : a;
}

Sign RatFuncField::sign_at_infinity(const Value& a) const {
    if (a.is_zero()) return Sign::Zero;
    // den is monic, so the sign at infinity is the numerator's leading sign
    return sign_of(a.num().leading().sign());
}

std::strong_ordering RatFuncField::cmp(const Value& a, const Value& b) const {
    switch (sign_at_infinity(sub(a, b))) {
        case Sign::Negative: return std::strong_ordering::less;
        case Sign::Positive: return std::strong_ordering::greater;
        case Sign::Zero: return std::strong_ordering::equal;
    }
    return std::strong_ordering::equal;
}

Classification RatFuncField::classify(const Value& a) const {
    if (a.is_zero()) return {MagnitudeTag::Zero, Sign::Zero};
    const Sign s = sign_at_infinity(a);
    const int d = a.num().degree() - a.den().degree();
    if (d > 0) return {MagnitudeTag::Infinite, s};
    if (d < 0) return {MagnitudeTag::Infinitesimal, s};
    return {MagnitudeTag::Appreciable, s};
}

Rational RatFuncField::st(const Value& a) const {
    const Classification c = classify(a);
    if (c.tag == MagnitudeTag::Infinite)
        throw NotFinite("standard part of an infinite rational function");
    if (c.is_small()) return Rational(0);
    // limit at infinity: ratio of leading coefficients (den monic)
    return a.num().leading();
}

bool RatFuncField::infinitely_close(const Value& a, const Value& b) const {
    return classify(sub(a, b)).is_small();
}

std::string RatFuncField::to_string(const Value& a) const {
    if (a.den() == Polynomial::constant(Rational(1))) return a.num().to_string();
    std::ostringstream os;
    os << "(" << a.num().to_string() << ")/(" << a.den().to_string() << ")";
    return os.str();
}

} // namespace btrack
