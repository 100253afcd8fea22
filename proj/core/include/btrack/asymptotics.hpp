#ifndef BTRACK_ASYMPTOTICS_HPP
#define BTRACK_ASYMPTOTICS_HPP

#include <optional>
#include <string>

#include "btrack/classification.hpp"
#include "btrack/expr.hpp"
#include "btrack/rat_func.hpp"

namespace btrack {

/// Certified eventual behavior of a term rule as the index grows. Anything
/// not certified stays Unknown: the comparison layer maps Unknown onto the
/// Undecided verdict rather than guessing, because sampled signs alone
/// cannot rule out a flip beyond the cutoff.
enum class AsymptoticMag : std::uint8_t {
    Zero,     // terms tend to 0
    Finite,   // terms tend to a nonzero finite value
    Infinite, // |terms| grow beyond every bound
    Unknown,
};

struct Asymptotics {
    AsymptoticMag mag = AsymptoticMag::Unknown;
    std::optional<Rational> exact_limit;  // the limit, when it is a known rational
    Sign eventual_sign = Sign::Zero;
    bool sign_known = false;
    bool identically_zero = false;   // zero at all but finitely many indices
    bool nonzero_eventually = false; // at most finitely many zero terms
    bool nonzero_known = false;
    bool convergent_known = false;   // mag is Zero-or-Finite even if undetermined
    bool domain_trouble = false;     // evaluation may fail at infinitely many indices
    std::optional<RatFuncElem> ratfunc; // exact lowering over the index variable
    std::string pattern;

    static Asymptotics unknown(std::string pat = "unmatched") {
        Asymptotics a;
        a.pattern = std::move(pat);
        return a;
    }
};

/// Exact lowering of an expression in `var` into the rational-function
/// field ordered at infinity; fails on transcendental calls and non-integer
/// exponents. The field's own order then decides eventual sign/dominance.
std::optional<RatFuncElem> lower_to_ratfunc(const Expr& e, const std::string& var);

/// Behavior of an expression over the index variable n as n -> infinity.
Asymptotics analyze_expr(const Expr& e, const FieldConfig& cfg,
                         const std::string& var = "n");

/// Behavior of an expression whose variables have known behaviors of their
/// own (function composition over a non-expression sequence).
Asymptotics analyze_expr_env(const Expr& e, const FieldConfig& cfg,
                             const std::map<std::string, Asymptotics>& env);

Asymptotics from_ratfunc(const RatFuncElem& rf, const FieldConfig& cfg);
Asymptotics combine(BinOp op, const Asymptotics& a, const Asymptotics& b,
                    const FieldConfig& cfg);
Asymptotics function_wrap(FuncTag f, const Asymptotics& arg, const FieldConfig& cfg);
Asymptotics negate(Asymptotics a);

/// base(n)^expo(n) with expo a nonnegative-integer-valued rule growing to
/// infinity; certifies the classic limit forms including base -> 1.
Asymptotics power_asymptotics(const Expr& base, const Expr& expo, const FieldConfig& cfg);

/// Partial sums of term(k) from k=1; certifies convergence/divergence for
/// rational-function terms and for ratfunc-times-geometric terms.
Asymptotics partial_sum_asymptotics(const Expr& term_k, const FieldConfig& cfg);
Asymptotics partial_product_asymptotics(const Expr& term_k, const FieldConfig& cfg);

/// Matches term(k) = coeff * k^p (rational p); used for integral-tail
/// corrections of slowly convergent sums.
struct MonomialPattern {
    Rational coeff;
    Rational power;
};
std::optional<MonomialPattern> match_monomial_in_k(const Expr& term_k);

/// Matches term(k) = A(k) * base^k with base free of k. The coefficient may
/// be a rational function of k (enough for convergence analysis); tail
/// closed forms additionally need it k-free.
struct GeometricPattern {
    ExprPtr coeff;
    ExprPtr base;                        // k-free base expression
    std::optional<Rational> literal_base; // set when the base is a literal
};
std::optional<GeometricPattern> match_geometric_in_k(const Expr& term_k);

} // namespace btrack

#endif
