#ifndef BTRACK_SEQUENCES_HPP
#define BTRACK_SEQUENCES_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "btrack/asymptotics.hpp"
#include "btrack/classification.hpp"
#include "btrack/expr.hpp"
#include "btrack/rational_field.hpp"

namespace btrack {

class SeqRule;
using SeqRulePtr = std::shared_ptr<SeqRule>;

/// Hyperreal representative: a total term rule n |-> rational (n >= 1) with
/// a memoized prefix. Division holes and similar point failures are patched
/// to 0 and recorded; finite index sets are negligible under cofinite
/// agreement, so patches never influence a verdict.
class HyperSeq {
public:
    explicit HyperSeq(SeqRulePtr rule);

    Rational at(std::int64_t n) const;
    std::vector<std::int64_t> exceptions() const;
    std::string describe() const;

    const SeqRulePtr& rule() const { return rule_; }

private:
    SeqRulePtr rule_;
};

/// Sequence whose terms are positive, nondecreasing, unbounded integers:
/// the index bound of hyperfinite sums and products. Construction samples
/// the rule up to the configured cutoff and rejects violations.
class HyperNat {
public:
    HyperNat(HyperSeq seq, ExprPtr rule_expr)
        : seq_(std::move(seq)), expr_(std::move(rule_expr)) {}

    const HyperSeq& seq() const { return seq_; }
    const ExprPtr& expr() const { return expr_; }
    std::int64_t value_at(std::int64_t n) const;

private:
    HyperSeq seq_;
    ExprPtr expr_;
};

enum class CompareVerdict : std::uint8_t { Less, Greater, EventuallyEqual, Undecided };
const char* to_string(CompareVerdict v);

struct CompareReport {
    CompareVerdict verdict = CompareVerdict::Undecided;
    std::vector<std::int64_t> probe_indices;
    std::vector<std::int64_t> exception_set;
    std::string dominance_pattern;
};

struct StEstimate {
    Rational value;
    bool exact = false;
    std::vector<std::int64_t> probes;
    std::string method;
};

struct NullQuotientReport {
    Rational represented;       // st estimate of the Cauchy sequence
    bool exact = false;
    std::vector<std::int64_t> probes;
    std::string coset_witness;  // description of rule - <represented>
    std::string narrative;      // the two-quotient analogy, spelled out
};

/// The computable fragment of the sequence-quotient construction: termwise
/// ring operations, cofinite (Frechet) agreement, and explicit Undecided
/// verdicts wherever only a free ultrafilter could decide.
class SequenceField {
public:
    using Value = HyperSeq;

    explicit SequenceField(FieldConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }
    const FieldConfig& config() const { return cfg_; }

    Value zero() const { return from_rational(Rational(0)); }
    Value one() const { return from_rational(Rational(1)); }
    Value from_rational(const Rational& q) const;
    /// Rule over the index variable n; recognizes alternating-sign rules.
    Value from_expr(const ExprPtr& rule) const;
    /// Parses with the sequence-rule grammar (general exponents allowed).
    Value parse_rule(std::string_view text) const;

    Value add(const Value& a, const Value& b) const { return arith(BinOp::Add, a, b); }
    Value sub(const Value& a, const Value& b) const { return arith(BinOp::Sub, a, b); }
    Value mul(const Value& a, const Value& b) const { return arith(BinOp::Mul, a, b); }
    Value div(const Value& a, const Value& b) const { return arith(BinOp::Div, a, b); }
    Value arith(BinOp op, const Value& a, const Value& b) const;
    Value neg(const Value& a) const;
    Value pow_int(const Value& a, long e) const;
    Value root(const Value& a, unsigned k) const;
    Value transcendental(FuncTag f, const Value& x) const;
    Value abs(const Value& a) const;

    /// Term-by-term application of a one-variable function expression.
    Value apply(const ExprPtr& f_of_x, const Value& a) const;
    /// Finite mutations: verdicts and standard parts must not move.
    Value with_finite_overrides(const Value& a,
                                std::map<std::int64_t, Rational> overrides) const;

    Classification classify(const Value& a) const; // throws Undecided
    Rational st(const Value& a) const;             // throws NotFinite/Undecided
    StEstimate st_detail(const Value& a) const;
    bool infinitely_close(const Value& a, const Value& b) const; // throws Undecided
    CompareReport compare(const Value& a, const Value& b) const;

    HyperNat make_hypernat(const ExprPtr& rule) const;
    HyperNat identity_hypernat() const; // <n>
    Value partial_sum(const ExprPtr& term_k, const HyperNat& N) const;
    Value partial_product(const ExprPtr& term_k, const HyperNat& N) const;

    NullQuotientReport null_quotient_report(const Value& a) const;

    Asymptotics analyze(const Value& a) const;
    std::string to_string(const Value& a) const;

private:
    FieldConfig cfg_;
};

/// Ladder limit estimation at geometric probe indices with Richardson
/// extrapolation, off-ladder consistency guards, and an optional additive
/// tail correction (for hyperfinite sums with a matched monotone profile).
StEstimate estimate_limit(const HyperSeq& x, const FieldConfig& cfg,
                          const std::function<std::optional<Rational>(std::int64_t)>&
                              tail_correction = {});

} // namespace btrack

#endif
