#ifndef BTRACK_TRANSCENDENTAL_HPP
#define BTRACK_TRANSCENDENTAL_HPP

#include <optional>

#include "btrack/rational.hpp"

namespace btrack {

enum class FuncTag : std::uint8_t { Sin, Cos, Exp, Log, Sqrt, Abs };

const char* to_string(FuncTag f);
std::optional<FuncTag> func_tag_from_name(std::string_view name);

// Transcendental base-point values are materialized as rationals with
// absolute error below 10^-digits. Results for arguments where the value is
// exactly rational (sin 0, exp 0, log 1, sqrt of a perfect square, ...) come
// back exact. Values are memoized process-wide.
Rational transcendental_value(FuncTag f, const Rational& x, int digits);

/// k-th root (k >= 1) of a nonnegative rational, exact when the operand is a
/// perfect k-th power, else within 10^-digits.
Rational kth_root_value(const Rational& x, unsigned k, int digits);

/// Exact k-th root if both numerator and denominator are perfect powers.
std::optional<Rational> exact_kth_root(const Rational& x, unsigned k);

} // namespace btrack

#endif
