#ifndef BTRACK_RAT_FUNC_HPP
#define BTRACK_RAT_FUNC_HPP

#include <compare>
#include <string>

#include "btrack/classification.hpp"
#include "btrack/polynomial.hpp"
#include "btrack/transcendental.hpp"

namespace btrack {

/// Element of the real rational-function field R(x), kept in canonical form:
/// gcd(num, den) = 1 and den monic. The field is ordered by the behavior of
/// the function at infinity, which makes x larger than every constant — a
/// proper ordered extension of the rationals with no transcendental
/// structure at all.
class RatFuncElem {
public:
    RatFuncElem() : num_(), den_(Polynomial::constant(Rational(1))) {}
    RatFuncElem(Polynomial num, Polynomial den); // normalizes

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    bool operator==(const RatFuncElem&) const = default;

private:
    Polynomial num_, den_;
};

class RatFuncField {
public:
    using Value = RatFuncElem;

    explicit RatFuncField(FieldConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }
    const FieldConfig& config() const { return cfg_; }

    Value zero() const { return RatFuncElem{}; }
    Value one() const { return from_rational(Rational(1)); }
    Value from_rational(const Rational& q) const;
    Value generator() const; // the distinguished infinite element x

    Value add(const Value& a, const Value& b) const;
    Value sub(const Value& a, const Value& b) const;
    Value neg(const Value& a) const;
    Value mul(const Value& a, const Value& b) const;
    Value div(const Value& a, const Value& b) const;
    Value pow_int(const Value& a, long e) const;
    /// Roots exist only for constants (and are materialized); non-constant
    /// arguments have no rational-function root in general and are refused.
    Value root(const Value& a, unsigned k) const;
    /// Constants delegate to numeric evaluation; anything else is the
    /// documented NoTransfer failure of this backend.
    Value transcendental(FuncTag f, const Value& x) const;
    Value abs(const Value& a) const;

    std::strong_ordering cmp(const Value& a, const Value& b) const;
    Classification classify(const Value& a) const;
    Rational st(const Value& a) const;
    bool infinitely_close(const Value& a, const Value& b) const;

    /// Sign of the function at infinity.
    Sign sign_at_infinity(const Value& a) const;

    std::string to_string(const Value& a) const;

private:
    FieldConfig cfg_;
};

} // namespace btrack

#endif
