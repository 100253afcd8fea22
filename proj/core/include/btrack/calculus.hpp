#ifndef BTRACK_CALCULUS_HPP
#define BTRACK_CALCULUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "btrack/expr.hpp"
#include "btrack/levi_civita.hpp"
#include "btrack/rat_func.hpp"
#include "btrack/rational_field.hpp"
#include "btrack/sequences.hpp"

namespace btrack::calculus {

struct ProbeRecord {
    std::string description;          // which infinitesimal / hyperpoint
    std::optional<Classification> increment_class;
    std::optional<bool> increment_small; // tag-level smallness, when certified
    std::optional<Rational> increment_st; // standard part of finite increments
    std::string error;                // backend error name when evaluation failed
};

enum class ContinuityVerdict : std::uint8_t { PassToOrder, Fail, Undecided };
const char* to_string(ContinuityVerdict v);

struct ContinuityReport {
    Rational point;
    std::vector<ProbeRecord> probes;
    ContinuityVerdict verdict = ContinuityVerdict::Undecided;
    std::string detail;
};

struct DerivativeDetail {
    Rational value;
    std::vector<std::pair<std::string, Rational>> probe_values; // probe -> st(ratio)
};

/// st((f(x0+dx) - f(x0)) / dx), checked across a battery of probe
/// infinitesimals; disagreement raises NotDifferentiable.
DerivativeDetail derivative_detail(const ExprPtr& f, const Rational& x0,
                                   const LeviCivitaField& field);
DerivativeDetail derivative_detail(const ExprPtr& f, const Rational& x0,
                                   const SequenceField& field);
Rational derivative(const ExprPtr& f, const Rational& x0, const LeviCivitaField& field);
Rational derivative(const ExprPtr& f, const Rational& x0, const SequenceField& field);

ContinuityReport continuity_at(const ExprPtr& f, const Rational& x0,
                               const LeviCivitaField& field);
ContinuityReport continuity_at(const ExprPtr& f, const Rational& x0,
                               const SequenceField& field);

/// Increment tests at hyperpoints pushed against the open ends of (a,b);
/// a function failing only there is continuous but not uniformly so.
ContinuityReport uniform_continuity_probe(const ExprPtr& f, const Rational& a,
                                          const Rational& b,
                                          const LeviCivitaField& field);

HyperSeq hyperfinite_sum(const ExprPtr& term_k, const HyperNat& N,
                         const SequenceField& field);
HyperSeq hyperfinite_product(const ExprPtr& term_k, const HyperNat& N,
                             const SequenceField& field);

struct EulerExpResult {
    HyperSeq seq;
    StEstimate st;
};
/// (1 + kz/N)^N as a growing-exponent sequence; the standard part estimate
/// comes from the sequence itself, not from the exponential it approximates.
EulerExpResult euler_exp(const Rational& k, const Rational& z, const HyperNat& N,
                         const SequenceField& field);

struct BinomialTermResult {
    int r = 0;
    HyperSeq seq;
    StEstimate st;
};
/// First m terms C(N,r) (kz/N)^r of the finite-binomial expansion of
/// (1+kz/N)^N; each has the exact limit (kz)^r / r!.
std::vector<BinomialTermResult> euler_binomial_expand(const Rational& k,
                                                      const Rational& z,
                                                      const HyperNat& N, int m,
                                                      const SequenceField& field);

struct IvtResult {
    std::string decimal;
    bool exact_hit = false;
    Rational lo, hi; // final bracketing interval (lo == hi on exact hits)
    int rounds = 0;
};
/// Repeated ten-part subdivision of a sign-changing interval, emitting one
/// decimal digit per round; ties pick the leftmost sign-changing piece.
IvtResult ivt_root(const ExprPtr& f, const Rational& a, const Rational& b,
                   int digits, const FieldConfig& cfg);

struct OffsetSpec {
    ExprPtr offset_of_n; // hyper-offset, already composed with N's rule
    std::string description;
};
/// Parses "-1/N", "q/N", "c + q/N", or a plain rule in n; N is replaced by
/// the hyperinteger's rule.
OffsetSpec parse_offset(std::string_view text, const HyperNat& N);

enum class SumTheoremVerdict : std::uint8_t {
    UniformEvidence,
    NonUniformWitness,
    Undecided,
};
const char* to_string(SumTheoremVerdict v);

struct SumTheoremReport {
    std::string series_term;
    std::string probe_point;
    std::optional<Classification> remainder_class;
    std::optional<Rational> remainder_st;
    SumTheoremVerdict verdict = SumTheoremVerdict::Undecided;
    std::vector<ProbeRecord> probes;
    std::string detail;
};
/// Series-tail behavior at a point infinitely close to x0: an appreciable
/// remainder with hyperfinitely many terms witnesses non-uniform
/// convergence; infinitesimal remainders across the battery corroborate
/// uniformity. Terms must be geometric in k (coeff(x) * base(x)^k).
SumTheoremReport sum_theorem_probe(const ExprPtr& u_k, const Rational& x0,
                                   const OffsetSpec& offset, const HyperNat& N,
                                   const SequenceField& field);

struct TransferPointResult {
    std::string point;
    std::optional<Rational> residual;
    std::string error; // backend error name (NoTransfer is a finding)
};

struct TransferReport {
    std::vector<TransferPointResult> points;
    Rational threshold;
    bool pass = false;
    bool no_transfer = false;
};

Rational residual_magnitude(const LeviCivitaField& f, const LCNumber& v);
Rational residual_magnitude(const RatFuncField& f, const RatFuncElem& v);
Rational residual_magnitude(const SequenceField& f, const HyperSeq& v);
Rational residual_magnitude(const RationalField& f, const Rational& v);

template <NumberField F>
TransferReport transfer_check(const ExprPtr& lhs, const ExprPtr& rhs, const F& field,
                              const std::vector<std::pair<std::string,
                                                          typename F::Value>>& points) {
    TransferReport rep;
    rep.threshold = Rational::pow10(-(field.config().working_precision - 5));
    const ExprPtr diff = Expr::bin(BinOp::Sub, lhs, rhs);
    bool all_pass = true;
    for (const auto& [desc, value] : points) {
        TransferPointResult pr;
        pr.point = desc;
        try {
            Bindings<F> b;
            b.emplace("x", value);
            const typename F::Value d = evaluate(*diff, field, b);
            pr.residual = residual_magnitude(field, d);
            if (*pr.residual >= rep.threshold) all_pass = false;
        } catch (const Error& e) {
            pr.error = e.name();
            all_pass = false;
            if (e.name() == "NoTransfer") rep.no_transfer = true;
        }
        rep.points.push_back(std::move(pr));
    }
    rep.pass = all_pass;
    return rep;
}

} // namespace btrack::calculus

#endif
