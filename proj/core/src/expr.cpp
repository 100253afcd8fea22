#include "btrack/expr.hpp"

#include <cctype>
#include <sstream>

namespace btrack {

ExprPtr Expr::lit(Rational v) { return std::make_shared<Expr>(Lit{std::move(v)}); }
ExprPtr Expr::var(std::string name) { return std::make_shared<Expr>(Var{std::move(name)}); }
ExprPtr Expr::neg(ExprPtr a) { return std::make_shared<Expr>(Neg{std::move(a)}); }
ExprPtr Expr::bin(BinOp op, ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(Bin{op, std::move(l), std::move(r)});
}
ExprPtr Expr::call(FuncTag f, ExprPtr a) { return std::make_shared<Expr>(Call{f, std::move(a)}); }

namespace {

const Rational* as_literal(const Expr& e) {
    if (auto* l = std::get_if<Expr::Lit>(&e.node())) return &l->value;
    return nullptr;
}

// ---------------------------------------------------------------- parser

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const ParseOptions& opts;

    explicit Parser(std::string_view t, const ParseOptions& o) : text(t), opts(o) {}

    [[noreturn]] void fail(std::size_t at, std::vector<std::string> expected) {
        std::ostringstream os;
        os << "parse error at byte " << at << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            os << (i ? " | " : "") << expected[i];
        throw ParseError(at, std::move(expected), os.str());
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    Rational number() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos == start) fail(start, {"number"});
        return Rational::from_string(text.substr(start, pos - start));
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        return std::string(text.substr(start, pos - start));
    }

    // digits ('/' digits)? with optional leading '-'; only used after '^'
    Rational signed_rational() {
        skip_ws();
        const bool neg = eat('-');
        Rational num = number();
        const std::size_t save = pos;
        if (eat('/')) {
            skip_ws();
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                Rational den = number();
                if (den.is_zero()) fail(save, {"nonzero denominator"});
                num = num / den;
            } else {
                pos = save; // the '/' was a division operator
            }
        }
        return neg ? -num : num;
    }

    ExprPtr exponent() {
        skip_ws();
        const char c = peek();
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return Expr::lit(signed_rational());
        if (opts.general_exponents) {
            if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t at = pos;
                std::string name = ident();
                check_variable(name, at);
                return Expr::var(std::move(name));
            }
            if (eat('(')) {
                ExprPtr e = expr();
                if (!eat(')')) fail(pos, {")"});
                return e;
            }
            fail(pos, {"rational exponent", "index variable", "("});
        }
        fail(pos, {"rational exponent"});
    }

    void check_variable(const std::string& name, std::size_t at) {
        for (const auto& v : opts.variables)
            if (v == name) return;
        std::vector<std::string> expected;
        expected.reserve(opts.variables.size());
        for (const auto& v : opts.variables) expected.push_back("variable " + v);
        fail(at, std::move(expected));
    }

    ExprPtr atom() {
        skip_ws();
        const std::size_t at = pos;
        if (eat('-')) {
            ExprPtr inner = atom();
            if (auto* l = as_literal(*inner)) return Expr::lit(-*l); // fold -literal
            return Expr::neg(std::move(inner));
        }
        if (eat('(')) {
            ExprPtr e = expr();
            if (!eat(')')) fail(pos, {")"});
            return e;
        }
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return Expr::lit(number());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name = ident();
            skip_ws();
            if (pos < text.size() && text[pos] == '(') {
                auto f = func_tag_from_name(name);
                if (!f) fail(at, {"function sin|cos|exp|log|sqrt|abs"});
                ++pos;
                ExprPtr arg = expr();
                if (!eat(')')) fail(pos, {")"});
                return Expr::call(*f, std::move(arg));
            }
            check_variable(name, at);
            return Expr::var(std::move(name));
        }
        fail(at, {"number", "identifier", "(", "-"});
    }

    ExprPtr factor() {
        ExprPtr base = atom();
        if (eat('^')) return Expr::bin(BinOp::Pow, std::move(base), exponent());
        return base;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        for (;;) {
            if (eat('*')) lhs = Expr::bin(BinOp::Mul, std::move(lhs), factor());
            else if (eat('/')) lhs = Expr::bin(BinOp::Div, std::move(lhs), factor());
            else return lhs;
        }
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            if (eat('+')) lhs = Expr::bin(BinOp::Add, std::move(lhs), term());
            else if (eat('-')) lhs = Expr::bin(BinOp::Sub, std::move(lhs), term());
            else return lhs;
        }
    }

    ExprPtr parse() {
        skip_ws();
        if (pos == text.size()) fail(pos, {"expression"});
        ExprPtr e = expr();
        skip_ws();
        if (pos != text.size()) fail(pos, {"operator", "end of input"});
        return e;
    }
};

// ---------------------------------------------------------------- printer

// precedence levels: Add/Sub 1, Mul/Div 2, Pow/unary 3
int prec_of(BinOp op) {
    switch (op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 3;
    }
    return 0;
}

const char* op_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return " + ";
        case BinOp::Sub: return " - ";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Pow: return "^";
    }
    return "?";
}

void print(const Expr& e, std::ostream& os, int parent_prec) {
    struct Visitor {
        std::ostream& os;
        int parent_prec;

        void operator()(const Expr::Lit& l) const {
            if (l.value.sign() < 0 && parent_prec > 0) {
                os << "(" << l.value.to_string() << ")";
            } else {
                os << l.value.to_string();
            }
        }
        void operator()(const Expr::Var& v) const { os << v.name; }
        void operator()(const Expr::Neg& n) const {
            // unary minus binds tighter than '^'; parenthesize anything weaker
            os << "-";
            const bool need = std::holds_alternative<Expr::Bin>(n.arg->node());
            if (need) os << "(";
            print(*n.arg, os, 0);
            if (need) os << ")";
        }
        void operator()(const Expr::Call& c) const {
            os << to_string(c.func) << "(";
            print(*c.arg, os, 0);
            os << ")";
        }
        void operator()(const Expr::Bin& b) const {
            const int p = prec_of(b.op);
            const bool need = p < parent_prec;
            if (need) os << "(";
            if (b.op == BinOp::Pow) {
                print(*b.lhs, os, 4); // base must be atom-tight
                os << "^";
                // literal and variable exponents print bare; expressions need parens
                if (auto* l = std::get_if<Expr::Lit>(&b.rhs->node())) {
                    os << l->value.to_string();
                } else if (auto* v = std::get_if<Expr::Var>(&b.rhs->node())) {
                    os << v->name;
                } else {
                    os << "(";
                    print(*b.rhs, os, 0);
                    os << ")";
                }
            } else {
                print(*b.lhs, os, p);
                os << op_text(b.op);
                print(*b.rhs, os, p + 1);
            }
            if (need) os << ")";
        }
    };
    std::visit(Visitor{os, parent_prec}, e.node());
}

} // namespace

ExprPtr parse_expr(std::string_view text, const ParseOptions& opts) {
    Parser p(text, opts);
    return p.parse();
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(e, os, 0);
    return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node().index() != b.node().index()) return false;
    if (auto* la = std::get_if<Expr::Lit>(&a.node()))
        return la->value == std::get<Expr::Lit>(b.node()).value;
    if (auto* va = std::get_if<Expr::Var>(&a.node()))
        return va->name == std::get<Expr::Var>(b.node()).name;
    if (auto* na = std::get_if<Expr::Neg>(&a.node()))
        return structurally_equal(*na->arg, *std::get<Expr::Neg>(b.node()).arg);
    if (auto* ba = std::get_if<Expr::Bin>(&a.node())) {
        const auto& bb = std::get<Expr::Bin>(b.node());
        return ba->op == bb.op && structurally_equal(*ba->lhs, *bb.lhs) &&
               structurally_equal(*ba->rhs, *bb.rhs);
    }
    const auto& ca = std::get<Expr::Call>(a.node());
    const auto& cb = std::get<Expr::Call>(b.node());
    return ca.func == cb.func && structurally_equal(*ca.arg, *cb.arg);
}

bool contains_var(const Expr& e, std::string_view name) {
    if (auto* v = std::get_if<Expr::Var>(&e.node())) return v->name == name;
    if (auto* n = std::get_if<Expr::Neg>(&e.node())) return contains_var(*n->arg, name);
    if (auto* b = std::get_if<Expr::Bin>(&e.node()))
        return contains_var(*b->lhs, name) || contains_var(*b->rhs, name);
    if (auto* c = std::get_if<Expr::Call>(&e.node())) return contains_var(*c->arg, name);
    return false;
}

ExprPtr substitute(const ExprPtr& e, std::string_view name, const ExprPtr& replacement) {
    if (auto* v = std::get_if<Expr::Var>(&e->node()))
        return v->name == name ? replacement : e;
    if (auto* n = std::get_if<Expr::Neg>(&e->node())) {
        ExprPtr arg = substitute(n->arg, name, replacement);
        return arg == n->arg ? e : Expr::neg(std::move(arg));
    }
    if (auto* b = std::get_if<Expr::Bin>(&e->node())) {
        ExprPtr l = substitute(b->lhs, name, replacement);
        ExprPtr r = substitute(b->rhs, name, replacement);
        return (l == b->lhs && r == b->rhs) ? e : Expr::bin(b->op, std::move(l), std::move(r));
    }
    if (auto* c = std::get_if<Expr::Call>(&e->node())) {
        ExprPtr arg = substitute(c->arg, name, replacement);
        return arg == c->arg ? e : Expr::call(c->func, std::move(arg));
    }
    return e;
}

// ------------------------------------------------ folding constructors

ExprPtr mk_neg(ExprPtr a) {
    if (auto* l = as_literal(*a)) return Expr::lit(-*l);
    if (auto* n = std::get_if<Expr::Neg>(&a->node())) return n->arg;
    return Expr::neg(std::move(a));
}

ExprPtr mk_bin(BinOp op, ExprPtr l, ExprPtr r) {
    const Rational* lv = as_literal(*l);
    const Rational* rv = as_literal(*r);
    switch (op) {
        case BinOp::Add:
            if (lv && lv->is_zero()) return r;
            if (rv && rv->is_zero()) return l;
            if (lv && rv) return Expr::lit(*lv + *rv);
            break;
        case BinOp::Sub:
            if (rv && rv->is_zero()) return l;
            if (lv && lv->is_zero()) return mk_neg(std::move(r));
            if (lv && rv) return Expr::lit(*lv - *rv);
            break;
        case BinOp::Mul:
            if ((lv && lv->is_zero()) || (rv && rv->is_zero())) return Expr::lit(Rational(0));
            if (lv && *lv == Rational(1)) return r;
            if (rv && *rv == Rational(1)) return l;
            if (lv && rv) return Expr::lit(*lv * *rv);
            break;
        case BinOp::Div:
            if (rv && *rv == Rational(1)) return l;
            if (lv && rv && !rv->is_zero()) return Expr::lit(*lv / *rv);
            break;
        case BinOp::Pow:
            if (rv && *rv == Rational(1)) return l;
            if (rv && rv->is_zero()) return Expr::lit(Rational(1));
            if (lv && rv && rv->is_integer() && rv->numerator().fits_slong_p())
                return Expr::lit(lv->pow_int(rv->numerator().get_si()));
            break;
    }
    return Expr::bin(op, std::move(l), std::move(r));
}

// ----------------------------------------------------- differentiation

namespace {

ExprPtr diff(const ExprPtr& e, std::string_view var) {
    struct Visitor {
        const ExprPtr& self;
        std::string_view var;

        ExprPtr operator()(const Expr::Lit&) const { return Expr::lit(Rational(0)); }
        ExprPtr operator()(const Expr::Var& v) const {
            return Expr::lit(Rational(v.name == var ? 1 : 0));
        }
        ExprPtr operator()(const Expr::Neg& n) const {
            return mk_neg(diff(n.arg, var));
        }
        ExprPtr operator()(const Expr::Bin& b) const {
            switch (b.op) {
                case BinOp::Add: return mk_bin(BinOp::Add, diff(b.lhs, var), diff(b.rhs, var));
                case BinOp::Sub: return mk_bin(BinOp::Sub, diff(b.lhs, var), diff(b.rhs, var));
                case BinOp::Mul:
                    return mk_bin(BinOp::Add,
                                  mk_bin(BinOp::Mul, diff(b.lhs, var), b.rhs),
                                  mk_bin(BinOp::Mul, b.lhs, diff(b.rhs, var)));
                case BinOp::Div:
                    return mk_bin(BinOp::Div,
                                  mk_bin(BinOp::Sub,
                                         mk_bin(BinOp::Mul, diff(b.lhs, var), b.rhs),
                                         mk_bin(BinOp::Mul, b.lhs, diff(b.rhs, var))),
                                  mk_bin(BinOp::Pow, b.rhs, Expr::lit(Rational(2))));
                case BinOp::Pow: {
                    const Rational* q = as_literal(*b.rhs);
                    if (!q)
                        throw DomainError("differentiation requires literal exponents, got ^" +
                                          to_string(*b.rhs));
                    if (contains_var(*b.rhs, var))
                        throw DomainError("exponent depends on the differentiation variable");
                    // d(u^q) = q * u^(q-1) * u'
                    return mk_bin(BinOp::Mul,
                                  mk_bin(BinOp::Mul, Expr::lit(*q),
                                         mk_bin(BinOp::Pow, b.lhs,
                                                Expr::lit(*q - Rational(1)))),
                                  diff(b.lhs, var));
                }
            }
            throw DomainError("bad binary operator");
        }
        ExprPtr operator()(const Expr::Call& c) const {
            const ExprPtr du = diff(c.arg, var);
            switch (c.func) {
                case FuncTag::Sin:
                    return mk_bin(BinOp::Mul, Expr::call(FuncTag::Cos, c.arg), du);
                case FuncTag::Cos:
                    return mk_bin(BinOp::Mul,
                                  mk_neg(Expr::call(FuncTag::Sin, c.arg)), du);
                case FuncTag::Exp:
                    return mk_bin(BinOp::Mul, Expr::call(FuncTag::Exp, c.arg), du);
                case FuncTag::Log:
                    return mk_bin(BinOp::Div, du, c.arg);
                case FuncTag::Sqrt:
                    return mk_bin(BinOp::Div, du,
                                  mk_bin(BinOp::Mul, Expr::lit(Rational(2)),
                                         Expr::call(FuncTag::Sqrt, c.arg)));
                case FuncTag::Abs:
                    // valid away from zeros of the argument; division reports the kink
                    return mk_bin(BinOp::Mul,
                                  mk_bin(BinOp::Div, Expr::call(FuncTag::Abs, c.arg), c.arg),
                                  du);
            }
            throw DomainError("bad function tag");
        }
    };
    return std::visit(Visitor{e, var}, e->node());
}

} // namespace

ExprPtr differentiate(const ExprPtr& e, std::string_view var) {
    return diff(e, var);
}

Rational exponent_value(const Expr& e,
                        const std::map<std::string, Rational, std::less<>>& rb) {
    struct Visitor {
        const std::map<std::string, Rational, std::less<>>& rb;

        Rational operator()(const Expr::Lit& l) const { return l.value; }
        Rational operator()(const Expr::Var& v) const {
            if (v.name != "n" && v.name != "k" && v.name != "N")
                throw DomainError("exponent may only use index variables, got " + v.name);
            auto it = rb.find(v.name);
            if (it == rb.end())
                throw UnboundVariable("exponent variable '" + v.name + "' is not bound");
            return it->second;
        }
        Rational operator()(const Expr::Neg& n) const { return -eval(*n.arg); }
        Rational operator()(const Expr::Call&) const {
            throw DomainError("function calls are not allowed in exponents");
        }
        Rational operator()(const Expr::Bin& b) const {
            const Rational l = eval(*b.lhs);
            const Rational r = eval(*b.rhs);
            switch (b.op) {
                case BinOp::Add: return l + r;
                case BinOp::Sub: return l - r;
                case BinOp::Mul: return l * r;
                case BinOp::Div: return l / r;
                case BinOp::Pow: {
                    if (!r.is_integer() || !r.numerator().fits_slong_p())
                        throw DomainError("nested exponent must be an integer");
                    return l.pow_int(r.numerator().get_si());
                }
            }
            throw DomainError("bad binary operator");
        }
        Rational eval(const Expr& e) const { return std::visit(*this, e.node()); }
    };
    return Visitor{rb}.eval(e);
}

} // namespace btrack
