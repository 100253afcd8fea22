#ifndef BTRACK_SEQ_RULE_HPP
#define BTRACK_SEQ_RULE_HPP

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "btrack/asymptotics.hpp"
#include "btrack/rational.hpp"

namespace btrack {

/// Internal polymorphic term rule behind HyperSeq. `at` memoizes, patches
/// value-level holes (division by zero, domain errors) to 0 and records the
/// index; `term` is the raw rule. Analysis results are cached per config.
class SeqRule {
public:
    virtual ~SeqRule() = default;

    Rational at(std::int64_t n) const;
    std::vector<std::int64_t> exceptions() const;
    Asymptotics analyze(const FieldConfig& cfg) const;

    virtual Rational term(std::int64_t n) const = 0;
    virtual std::string describe() const = 0;
    virtual void collect_child_exceptions(std::set<std::int64_t>&) const {}

protected:
    virtual Asymptotics analyze_impl(const FieldConfig& cfg) const = 0;

    mutable std::mutex mu_;
    mutable std::map<std::int64_t, Rational> memo_;
    mutable std::set<std::int64_t> patched_;
    mutable std::optional<std::pair<FieldConfig, Asymptotics>> analysis_;
};

inline bool same_config(const FieldConfig& a, const FieldConfig& b) {
    return a.truncation_order == b.truncation_order &&
           a.working_precision == b.working_precision &&
           a.sequence_cutoff == b.sequence_cutoff && a.st_tolerance == b.st_tolerance;
}

} // namespace btrack

#endif
