#ifndef BTRACK_CLASSIFICATION_HPP
#define BTRACK_CLASSIFICATION_HPP

#include <cstdint>
#include <string>

#include "btrack/rational.hpp"

namespace btrack {

// Magnitude trichotomy (plus zero) over a non-Archimedean ordered field:
// infinitesimal = below every positive rational in absolute value,
// infinite = above every rational, appreciable = finite and neither.
enum class MagnitudeTag : std::uint8_t { Zero, Infinitesimal, Appreciable, Infinite };

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

struct Classification {
    MagnitudeTag tag = MagnitudeTag::Zero;
    Sign sign = Sign::Zero;

    bool operator==(const Classification&) const = default;
    bool is_finite() const { return tag != MagnitudeTag::Infinite; }
    bool is_small() const {
        return tag == MagnitudeTag::Zero || tag == MagnitudeTag::Infinitesimal;
    }
};

inline const char* to_string(MagnitudeTag t) {
    switch (t) {
        case MagnitudeTag::Zero: return "Zero";
        case MagnitudeTag::Infinitesimal: return "Infinitesimal";
        case MagnitudeTag::Appreciable: return "Appreciable";
        case MagnitudeTag::Infinite: return "Infinite";
    }
    return "?";
}

inline const char* to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "Negative";
        case Sign::Zero: return "Zero";
        case Sign::Positive: return "Positive";
    }
    return "?";
}

inline Sign sign_of(int s) {
    return s < 0 ? Sign::Negative : s > 0 ? Sign::Positive : Sign::Zero;
}

inline Sign flip(Sign s) { return sign_of(-static_cast<int>(s)); }

/// Per-field tuning knobs shared by all backends.
struct FieldConfig {
    int truncation_order = 32;                  // max retained series terms
    int working_precision = 50;                 // decimal digits for transcendental base values
    std::int64_t sequence_cutoff = 1 << 20;     // max index examined in the sequence model
    Rational st_tolerance = Rational(1, 1000000000); // 10^-9

    void validate() const {
        if (truncation_order < 1 || working_precision < 1 || sequence_cutoff < 1)
            throw ConstructionError("field config values must be >= 1");
        if (st_tolerance.sign() <= 0)
            throw ConstructionError("st tolerance must be positive");
    }
};

} // namespace btrack

#endif
