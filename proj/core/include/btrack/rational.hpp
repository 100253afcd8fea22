#ifndef BTRACK_RATIONAL_HPP
#define BTRACK_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "btrack/errors.hpp"

namespace btrack {

/// Arbitrary-precision rational scalar in canonical form: denominator > 0,
/// gcd(|num|, den) = 1. This is the coefficient/ground type of every backend.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}          // NOLINT: implicit by design
    Rational(long num, long den);
    explicit Rational(const mpz_class& n) : v_(n) {}
    explicit Rational(mpq_class q);

    /// Accepts "p", "p/q", and decimal literals like "-1.25" or ".5".
    static Rational from_string(std::string_view s);
    static Rational pow10(long k); // 10^k, k may be negative

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    std::strong_ordering operator<=>(const Rational& o) const {
        int c = cmp(v_, o.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    Rational abs() const { return sign() < 0 ? -*this : *this; }
    Rational reciprocal() const;
    Rational pow_int(long e) const; // e < 0 takes the reciprocal first

    mpz_class floor() const;
    mpz_class ceil() const;
    /// Nearest multiple of 10^-digits (ties away from zero).
    Rational round_to_digits(int digits) const;

    /// Canonical "p/q" (or "p" for integers).
    std::string to_string() const;
    /// Fixed-point decimal with `digits` fractional digits, rounded to
    /// nearest (ties away from zero). truncate=true floors toward -inf
    /// instead, matching positional digit extraction.
    std::string to_decimal(int digits, bool truncate = false) const;

    double to_double() const { return v_.get_d(); }

    /// Combined numerator+denominator size in bits; used as a growth guard.
    std::size_t bit_size() const;

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.abs(); }
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

} // namespace btrack

#endif
