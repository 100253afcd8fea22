#ifndef BTRACK_EXPR_HPP
#define BTRACK_EXPR_HPP

#include <concepts>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "btrack/classification.hpp"
#include "btrack/errors.hpp"
#include "btrack/rational.hpp"
#include "btrack/transcendental.hpp"

namespace btrack {

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression AST over one variable (plus series index variables).
///
/// Value-expression grammar (the contract for every CLI input):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' signed_rational)?
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' atom
/// Unary minus binds tighter than '^', which binds tighter than '*','/',
/// which bind tighter than '+','-'. There is no implicit multiplication.
///
/// Sequence rules use the same grammar with one relaxation: an exponent may
/// also be an index variable or a parenthesized expression, which is how
/// rules like (-1)^n and series terms like x^k are written.
class Expr {
public:
    struct Lit { Rational value; };
    struct Var { std::string name; };
    struct Neg { ExprPtr arg; };
    struct Bin { BinOp op; ExprPtr lhs, rhs; };
    struct Call { FuncTag func; ExprPtr arg; };
    using Node = std::variant<Lit, Var, Neg, Bin, Call>;

    explicit Expr(Node n) : node_(std::move(n)) {}
    const Node& node() const { return node_; }

    static ExprPtr lit(Rational v);
    static ExprPtr var(std::string name);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr bin(BinOp op, ExprPtr l, ExprPtr r);
    static ExprPtr call(FuncTag f, ExprPtr a);

private:
    Node node_;
};

struct ParseOptions {
    std::vector<std::string> variables = {"x", "n", "k"};
    bool general_exponents = false; // sequence-rule relaxation
};

ExprPtr parse_expr(std::string_view text, const ParseOptions& opts = {});

std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

bool structurally_equal(const Expr& a, const Expr& b);
bool contains_var(const Expr& e, std::string_view name);
ExprPtr substitute(const ExprPtr& e, std::string_view name, const ExprPtr& replacement);

/// Standard differentiation rules; the result is simplified only by constant
/// folding and the usual 0/1 identity collapses. Requires literal exponents.
ExprPtr differentiate(const ExprPtr& e, std::string_view var = "x");

// Folding smart constructors, shared by differentiate and rule builders.
ExprPtr mk_neg(ExprPtr a);
ExprPtr mk_bin(BinOp op, ExprPtr l, ExprPtr r);

/// Ordered-field backend interface: what an expression needs to evaluate.
template <class F>
concept NumberField = requires(const F& f, const typename F::Value& v,
                               const Rational& q, FuncTag t) {
    typename F::Value;
    { f.from_rational(q) } -> std::same_as<typename F::Value>;
    { f.add(v, v) } -> std::same_as<typename F::Value>;
    { f.sub(v, v) } -> std::same_as<typename F::Value>;
    { f.mul(v, v) } -> std::same_as<typename F::Value>;
    { f.div(v, v) } -> std::same_as<typename F::Value>;
    { f.neg(v) } -> std::same_as<typename F::Value>;
    { f.pow_int(v, long{}) } -> std::same_as<typename F::Value>;
    { f.root(v, unsigned{}) } -> std::same_as<typename F::Value>;
    { f.transcendental(t, v) } -> std::same_as<typename F::Value>;
    { f.classify(v) } -> std::same_as<Classification>;
    { f.st(v) } -> std::same_as<Rational>;
};

template <class F>
using Bindings = std::map<std::string, typename F::Value, std::less<>>;

/// Extracts a rational exponent from an evaluated sub-expression. Exponents
/// in the grammar are either literals or (in sequence rules) index-variable
/// expressions, so they always land on an exact rational.
Rational exponent_value(const Expr& e,
                        const std::map<std::string, Rational, std::less<>>& rational_bindings);

template <NumberField F>
typename F::Value evaluate(const Expr& e, const F& field, const Bindings<F>& bindings) {
    using V = typename F::Value;
    struct Visitor {
        const F& field;
        const Bindings<F>& bindings;

        V operator()(const Expr::Lit& l) const { return field.from_rational(l.value); }
        V operator()(const Expr::Var& v) const {
            auto it = bindings.find(v.name);
            if (it == bindings.end())
                throw UnboundVariable("variable '" + v.name + "' is not bound");
            return it->second;
        }
        V operator()(const Expr::Neg& n) const { return field.neg(eval(*n.arg)); }
        V operator()(const Expr::Call& c) const {
            return field.transcendental(c.func, eval(*c.arg));
        }
        V operator()(const Expr::Bin& b) const {
            if (b.op == BinOp::Pow) return pow(b);
            const V l = eval(*b.lhs);
            const V r = eval(*b.rhs);
            switch (b.op) {
                case BinOp::Add: return field.add(l, r);
                case BinOp::Sub: return field.sub(l, r);
                case BinOp::Mul: return field.mul(l, r);
                case BinOp::Div: return field.div(l, r);
                default: break;
            }
            throw DomainError("bad binary operator");
        }

        V pow(const Expr::Bin& b) const {
            // exponents evaluate on the rational line, never in the backend
            std::map<std::string, Rational, std::less<>> rb;
            for (const auto& [name, value] : bindings) {
                try {
                    rb.emplace(name, field.st(value));
                } catch (const Error&) {
                    // non-finite binding: only an error if the exponent uses it
                }
            }
            const Rational q = exponent_value(*b.rhs, rb);
            const V base = eval(*b.lhs);
            if (q.is_integer()) {
                const mpz_class n = q.numerator();
                if (!n.fits_slong_p())
                    throw DomainError("exponent too large: " + q.to_string());
                return field.pow_int(base, n.get_si());
            }
            const mpz_class den = q.denominator();
            const mpz_class num = q.numerator();
            if (!den.fits_ulong_p() || !num.fits_slong_p() || den.get_ui() > 64)
                throw DomainError("unsupported rational exponent: " + q.to_string());
            return field.pow_int(field.root(base, static_cast<unsigned>(den.get_ui())),
                                 num.get_si());
        }

        V eval(const Expr& e) const { return std::visit(*this, e.node()); }
    };
    return Visitor{field, bindings}.eval(e);
}

} // namespace btrack

#endif
