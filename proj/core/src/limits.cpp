#include <vector>

#include "btrack/errors.hpp"
#include "btrack/sequences.hpp"

namespace btrack {

namespace {

// anything whose exact representation blows past this is not worth chasing
constexpr std::size_t kTermBitBudget = 6'000'000;

} // namespace

StEstimate estimate_limit(const HyperSeq& x, const FieldConfig& cfg,
                          const std::function<std::optional<Rational>(std::int64_t)>&
                              tail_correction) {
    const Rational tol = cfg.st_tolerance;
    const Rational step_tol = tol / Rational(8);
    const int precision = cfg.working_precision + 10;

    int max_j = 0;
    while ((std::int64_t{1} << (max_j + 1)) <= cfg.sequence_cutoff && max_j < 40) ++max_j;

    std::vector<std::int64_t> probes;
    std::vector<Rational> raw;       // rounded probe values (plus correction)
    std::vector<std::vector<Rational>> tableau;
    std::vector<Rational> diagonal;

    const auto probe_value = [&](std::int64_t n) -> Rational {
        Rational v = x.at(n);
        if (v.bit_size() > kTermBitBudget)
            throw Undecided("term size at index " + std::to_string(n) +
                            " exceeds the evaluation budget");
        if (tail_correction) {
            if (auto c = tail_correction(n)) v += *c;
        }
        return v.round_to_digits(precision);
    };

    for (int j = 3; j <= max_j; ++j) {
        const std::int64_t n = std::int64_t{1} << j;
        probes.push_back(n);
        raw.push_back(probe_value(n));

        // Richardson row: R[k] = R[k-1] + (R[k-1] - prev[k-1]) / (2^k - 1)
        std::vector<Rational> row;
        row.reserve(tableau.size() + 1);
        row.push_back(raw.back());
        if (!tableau.empty()) {
            const std::vector<Rational>& prev = tableau.back();
            Rational denom(1);
            for (std::size_t k = 1; k <= prev.size() && k <= 12; ++k) {
                denom = denom * Rational(2);
                const Rational& fine = row[k - 1];
                const Rational& coarse = prev[k - 1];
                row.push_back(fine + (fine - coarse) / (denom - Rational(1)));
            }
        }
        tableau.push_back(row);
        diagonal.push_back(row.back());

        const std::size_t m = diagonal.size();
        if (m < 3) continue;
        const Rational& cand = diagonal[m - 1];
        if ((diagonal[m - 1] - diagonal[m - 2]).abs() >= step_tol) continue;
        if ((diagonal[m - 2] - diagonal[m - 3]).abs() >= step_tol) continue;

        // plausibility: the raw ladder must approach the candidate
        const Rational res2 = (raw[m - 3] - cand).abs();
        const Rational res1 = (raw[m - 2] - cand).abs();
        const Rational res0 = (raw[m - 1] - cand).abs();
        if (!(res0 <= res1 + step_tol && res1 <= res2 + step_tol)) continue;

        // off-ladder guards: the sequence, not just the 2^j subsequence,
        // must sit near the candidate (catches alternating rules)
        bool guards_ok = true;
        for (std::size_t g = m - 2; g < m; ++g) {
            const std::int64_t base = probes[g];
            const Rational allowed =
                Rational(4) * (raw[g] - cand).abs() + Rational(4) * tol;
            for (const std::int64_t off_n : {base + 1, base + base / 2}) {
                const Rational v = probe_value(off_n);
                if ((v - cand).abs() > allowed) {
                    guards_ok = false;
                    break;
                }
            }
            if (!guards_ok) break;
        }
        if (!guards_ok) continue;

        StEstimate e;
        e.value = cand;
        e.exact = false;
        e.probes = probes;
        e.method = tail_correction ? "richardson ladder with tail correction"
                                   : "richardson ladder";
        return e;
    }
    throw Undecided("limit estimate failed to stabilize within tolerance " +
                    tol.to_string() + " by index " +
                    std::to_string(cfg.sequence_cutoff));
}

} // namespace btrack
