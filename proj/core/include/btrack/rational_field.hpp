#ifndef BTRACK_RATIONAL_FIELD_HPP
#define BTRACK_RATIONAL_FIELD_HPP

#include <compare>

#include "btrack/classification.hpp"
#include "btrack/rational.hpp"
#include "btrack/transcendental.hpp"

namespace btrack {

/// The standard rationals as a backend: the ground line every sequence term
/// lives on. Transcendental calls materialize at working precision; there
/// are no infinitesimals here, so classify never returns one.
class RationalField {
public:
    using Value = Rational;

    explicit RationalField(FieldConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }
    const FieldConfig& config() const { return cfg_; }

    Value zero() const { return Rational(0); }
    Value one() const { return Rational(1); }
    Value from_rational(const Rational& q) const { return q; }

    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b) const { return a / b; }
    Value neg(const Value& a) const { return -a; }
    Value pow_int(const Value& a, long e) const { return a.pow_int(e); }
    Value root(const Value& a, unsigned k) const {
        return kth_root_value(a, k, cfg_.working_precision);
    }
    Value transcendental(FuncTag f, const Value& x) const {
        return transcendental_value(f, x, cfg_.working_precision);
    }
    Value abs(const Value& a) const { return a.abs(); }

    std::strong_ordering cmp(const Value& a, const Value& b) const { return a <=> b; }
    Classification classify(const Value& a) const {
        if (a.is_zero()) return {MagnitudeTag::Zero, Sign::Zero};
        return {MagnitudeTag::Appreciable, sign_of(a.sign())};
    }
    Rational st(const Value& a) const { return a; }
    bool infinitely_close(const Value& a, const Value& b) const { return a == b; }

    std::string to_string(const Value& a) const { return a.to_string(); }

private:
    FieldConfig cfg_;
};

} // namespace btrack

#endif
