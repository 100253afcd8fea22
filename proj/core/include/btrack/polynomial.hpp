#ifndef BTRACK_POLYNOMIAL_HPP
#define BTRACK_POLYNOMIAL_HPP

#include <string>
#include <vector>

#include "btrack/rational.hpp"

namespace btrack {

/// Dense univariate polynomial with rational coefficients. coeff(i) is the
/// coefficient of x^i; the representation never stores trailing zeros.
/// Degrees are capped so runaway algebra fails loudly instead of crawling.
class Polynomial {
public:
    static constexpr int kMaxDegree = 512;

    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);
    static Polynomial constant(const Rational& c);
    static Polynomial variable(); // x

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const Rational& leading() const { return c_.back(); }
    Rational coeff(int i) const;
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_constant() const { return c_.size() <= 1; }
    Rational constant_value() const { return c_.empty() ? Rational(0) : c_[0]; }

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    bool operator==(const Polynomial&) const = default;

    /// Quotient and remainder of exact polynomial division.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;
    Polynomial monic() const;
    Polynomial derivative() const;
    Rational eval(const Rational& x) const;

    static Polynomial gcd(Polynomial a, Polynomial b); // monic gcd

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

} // namespace btrack

#endif
