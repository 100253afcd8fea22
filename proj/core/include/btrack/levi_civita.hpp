#ifndef BTRACK_LEVI_CIVITA_HPP
#define BTRACK_LEVI_CIVITA_HPP

#include <compare>
#include <string>
#include <vector>

#include "btrack/classification.hpp"
#include "btrack/rational.hpp"
#include "btrack/transcendental.hpp"

namespace btrack {

struct LCTerm {
    Rational exponent;
    Rational coeff;
    bool operator==(const LCTerm&) const = default;
};

/// Truncated Levi-Civita number: a finite series of eps-powers with rational
/// exponents and coefficients. Terms are strictly increasing in exponent,
/// never zero, and capped at the field's truncation order. The empty list is
/// zero. eps itself is the term (1,1); its reciprocal (-1,1) is infinite.
class LCNumber {
public:
    LCNumber() = default;
    explicit LCNumber(std::vector<LCTerm> terms) : terms_(std::move(terms)) {}

    const std::vector<LCTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    const Rational& leading_exponent() const { return terms_.front().exponent; }
    const Rational& leading_coeff() const { return terms_.front().coeff; }

    bool operator==(const LCNumber&) const = default;

private:
    std::vector<LCTerm> terms_;
};

/// Field object holding the truncation/precision configuration; values are
/// immutable and all operations are pure.
class LeviCivitaField {
public:
    using Value = LCNumber;

    explicit LeviCivitaField(FieldConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }
    const FieldConfig& config() const { return cfg_; }

    Value zero() const { return LCNumber{}; }
    Value one() const { return from_rational(Rational(1)); }
    Value from_rational(const Rational& q) const;
    Value from_terms(std::vector<LCTerm> terms) const; // normalizes + truncates
    Value epsilon() const { return from_terms({{Rational(1), Rational(1)}}); }
    Value epsilon_power(const Rational& q) const { return from_terms({{q, Rational(1)}}); }
    Value infinite_unit() const { return epsilon_power(Rational(-1)); } // 1/eps

    Value add(const Value& a, const Value& b) const;
    Value sub(const Value& a, const Value& b) const;
    Value neg(const Value& a) const;
    Value mul(const Value& a, const Value& b) const;
    Value div(const Value& a, const Value& b) const; // series long division
    Value pow_int(const Value& a, long e) const;
    /// k-th root via leading-term factorization + binomial series; the
    /// leading coefficient must be positive for even k.
    Value root(const Value& a, unsigned k) const;
    /// Taylor expansion of f at the standard part; finite arguments only.
    Value transcendental(FuncTag f, const Value& x) const;
    Value abs(const Value& a) const;

    std::strong_ordering cmp(const Value& a, const Value& b) const;
    Classification classify(const Value& a) const;
    Rational st(const Value& a) const; // throws NotFinite on infinite elements
    bool infinitely_close(const Value& a, const Value& b) const;

    /// Coefficient at a given exponent (0 if absent).
    Rational coeff_at(const Value& a, const Rational& exponent) const;
    /// Largest |coefficient| over all retained terms (0 for zero).
    Rational max_abs_coeff(const Value& a) const;

    std::string to_string(const Value& a) const;
    /// Machine format: [[exponent, coefficient], ...] with both as strings.
    std::string to_json(const Value& a) const;

private:
    FieldConfig cfg_;
};

} // namespace btrack

#endif
