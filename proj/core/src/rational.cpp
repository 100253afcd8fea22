#include "btrack/rational.hpp"

#include <cctype>
#include <ostream>

namespace btrack {

Rational::Rational(long num, long den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(mpq_class q) : v_(std::move(q)) {
    v_.canonicalize();
}

Rational Rational::from_string(std::string_view s) {
    // strip whitespace
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw NonNumericValue("empty numeric literal");

    std::string str(s);
    auto dot = str.find('.');
    if (dot != std::string::npos) {
        if (str.find('/') != std::string::npos)
            throw NonNumericValue("mixed decimal and fraction: " + str);
        std::string digits = str.substr(0, dot) + str.substr(dot + 1);
        std::size_t frac = str.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw NonNumericValue("bad decimal literal: " + str);
        mpz_class num;
        if (num.set_str(digits, 10) != 0)
            throw NonNumericValue("bad decimal literal: " + str);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        mpq_class q(num, den);
        q.canonicalize();
        return Rational(q);
    }

    mpq_class q;
    if (q.set_str(str, 10) != 0)
        throw NonNumericValue("bad rational literal: " + str);
    if (q.get_den() == 0) throw DivisionByZero("rational with zero denominator");
    q.canonicalize();
    return Rational(q);
}

Rational Rational::pow10(long k) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0) return Rational(p);
    mpq_class q(1, p);
    return Rational(q);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero()) throw DivisionByZero("division by zero");
    return Rational(mpq_class(v_ / o.v_));
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw DivisionByZero("reciprocal of zero");
    mpq_class r;
    mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
    return Rational(r);
}

Rational Rational::pow_int(long e) const {
    if (e == 0) return Rational(1);
    const Rational base = e < 0 ? reciprocal() : *this;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.v_.get_num().get_mpz_t(), n);
    mpz_pow_ui(den.get_mpz_t(), base.v_.get_den().get_mpz_t(), n);
    return Rational(mpq_class(num, den)); // already canonical: gcd preserved by powering
}

mpz_class Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return q;
}

mpz_class Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return q;
}

Rational Rational::round_to_digits(int digits) const {
    const Rational scale = pow10(digits);
    const Rational scaled = *this * scale;
    // round half away from zero
    mpz_class num = scaled.numerator(), den = scaled.denominator();
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class r2 = ::abs(r) * 2;
    if (r2 >= den) q += sgn(r);
    return Rational(q) / scale;
}

std::string Rational::to_string() const {
    return v_.get_str();
}

std::string Rational::to_decimal(int digits, bool truncate) const {
    const Rational v = truncate ? *this : round_to_digits(digits);
    // truncate mode floors toward -inf; rounding mode already landed on the grid
    mpz_class scaled = (v * pow10(digits)).floor();
    const bool neg = sgn(scaled) < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.get_str();
    if (digits == 0) return (neg ? "-" : "") + s;
    if (static_cast<int>(s.size()) <= digits)
        s.insert(0, std::string(static_cast<std::size_t>(digits) + 1 - s.size(), '0'));
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return (neg ? "-" : "") + s;
}

std::size_t Rational::bit_size() const {
    return mpz_sizeinbase(v_.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(v_.get_den().get_mpz_t(), 2);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
}

Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace btrack
