#include "btrack/polynomial.hpp"

#include <sstream>

#include "btrack/errors.hpp"

namespace btrack {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
    if (degree() > kMaxDegree)
        throw DegreeOverflow("polynomial degree exceeds " + std::to_string(kMaxDegree));
}

Polynomial Polynomial::constant(const Rational& c) {
    if (c.is_zero()) return Polynomial{};
    return Polynomial({c});
}

Polynomial Polynomial::variable() {
    return Polynomial({Rational(0), Rational(1)});
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Polynomial::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
    return c_[static_cast<std::size_t>(i)];
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Rational> out(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const {
    std::vector<Rational> out = c_;
    for (auto& c : out) c = -c;
    Polynomial p;
    p.c_ = std::move(out);
    return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial{};
    std::vector<Rational> out(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            out[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(out));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    Polynomial q, r = *this;
    while (!r.is_zero() && r.degree() >= d.degree()) {
        const int shift = r.degree() - d.degree();
        const Rational factor = r.leading() / d.leading();
        std::vector<Rational> t(static_cast<std::size_t>(shift) + 1, Rational(0));
        t.back() = factor;
        Polynomial term(std::move(t));
        q = q + term;
        r = r - term * d;
    }
    return {q, r};
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> out = c_;
    const Rational lead = c_.back();
    for (auto& c : out) c /= lead;
    Polynomial p;
    p.c_ = std::move(out);
    return p;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial{};
    std::vector<Rational> out(c_.size() - 1, Rational(0));
    for (std::size_t i = 1; i < c_.size(); ++i)
        out[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return Polynomial(std::move(out));
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
    // Euclid with monic normalization each round keeps coefficients tame.
    while (!b.is_zero()) {
        Polynomial r = a.divmod(b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

std::string Polynomial::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational c = coeff(i);
        if (c.is_zero()) continue;
        const Rational a = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        if (i == 0) {
            os << a.to_string();
        } else {
            if (!(a == Rational(1))) os << a.to_string() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

} // namespace btrack
