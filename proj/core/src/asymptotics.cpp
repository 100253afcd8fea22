#include "btrack/asymptotics.hpp"

#include <sstream>

#include "btrack/rational_field.hpp"

namespace btrack {

namespace {

// Keep the invariants tied together: a known nonzero rational limit fixes
// the eventual sign and rules out zeros from some index on.
Asymptotics normalized(Asymptotics a) {
    if (a.exact_limit && !a.exact_limit->is_zero()) {
        a.mag = AsymptoticMag::Finite;
        a.eventual_sign = sign_of(a.exact_limit->sign());
        a.sign_known = true;
        a.nonzero_eventually = true;
        a.nonzero_known = true;
    }
    if (a.mag == AsymptoticMag::Finite || a.mag == AsymptoticMag::Infinite) {
        a.nonzero_eventually = true;
        a.nonzero_known = true;
    }
    // Finite alone means appreciable magnitude, not convergence
    if (a.mag == AsymptoticMag::Zero || a.exact_limit.has_value())
        a.convergent_known = true;
    if (a.identically_zero) {
        a.mag = AsymptoticMag::Zero;
        a.exact_limit = Rational(0);
        a.eventual_sign = Sign::Zero;
        a.sign_known = true;
        a.convergent_known = true;
    }
    return a;
}

Asymptotics exact_constant(const Rational& q) {
    Asymptotics a;
    a.exact_limit = q;
    a.pattern = "constant";
    if (q.is_zero()) a.identically_zero = true;
    else a.mag = AsymptoticMag::Finite;
    return normalized(a);
}

// Rigorous index beyond which |P(k)| stays within [1/2, 3/2] * |lead| * k^deg.
Rational poly_settle_index(const Polynomial& p) {
    if (p.degree() <= 0) return Rational(1);
    Rational s(0);
    for (int i = 0; i < p.degree(); ++i) s += p.coeff(i).abs();
    return max(Rational(1), Rational(2) * s / p.leading().abs());
}

// Behavior of base^q for a literal rational exponent.
Asymptotics literal_power(const Asymptotics& base, const Rational& q) {
    if (q.is_zero()) return exact_constant(Rational(1));
    Asymptotics r;
    r.domain_trouble = base.domain_trouble;
    r.pattern = "(" + base.pattern + ")^" + q.to_string();
    if (base.mag == AsymptoticMag::Unknown) {
        Asymptotics u = Asymptotics::unknown(r.pattern);
        u.domain_trouble = base.domain_trouble;
        return u;
    }
    const bool integer = q.is_integer();
    const bool even = integer && q.numerator() % 2 == 0;
    if (!integer && !(base.sign_known && base.eventual_sign == Sign::Positive)) {
        Asymptotics t = Asymptotics::unknown(r.pattern);
        t.domain_trouble = true; // fractional power of possibly negative terms
        return t;
    }
    if (base.identically_zero) {
        if (q.sign() < 0) return Asymptotics::unknown(r.pattern);
        r.identically_zero = true;
        return normalized(r);
    }
    const bool inverted = q.sign() < 0;
    AsymptoticMag m = base.mag;
    if (m == AsymptoticMag::Zero) {
        if (!(base.nonzero_known && base.nonzero_eventually) && inverted)
            r.domain_trouble = true;
        m = inverted ? AsymptoticMag::Infinite : AsymptoticMag::Zero;
    } else if (m == AsymptoticMag::Infinite) {
        m = inverted ? AsymptoticMag::Zero : AsymptoticMag::Infinite;
    }
    r.mag = m;
    r.convergent_known = base.convergent_known && m != AsymptoticMag::Infinite;
    if (m == AsymptoticMag::Zero) r.exact_limit = Rational(0);
    if (base.exact_limit && integer && q.numerator().fits_slong_p() &&
        !(base.exact_limit->is_zero() && inverted))
        r.exact_limit = base.exact_limit->pow_int(q.numerator().get_si());
    if (base.sign_known) {
        if (even) {
            r.eventual_sign =
                base.eventual_sign == Sign::Zero ? Sign::Zero : Sign::Positive;
        } else {
            r.eventual_sign = base.eventual_sign;
        }
        r.sign_known = true;
    }
    if (base.nonzero_known && base.nonzero_eventually) {
        r.nonzero_eventually = true;
        r.nonzero_known = true;
    }
    return normalized(r);
}

} // namespace

std::optional<RatFuncElem> lower_to_ratfunc(const Expr& e, const std::string& var) {
    RatFuncField rf; // default config: lowering is config-independent
    Bindings<RatFuncField> b;
    b.emplace(var, rf.generator());
    try {
        return evaluate(e, rf, b);
    } catch (const Error&) {
        return std::nullopt; // calls, foreign variables, non-integer exponents
    }
}

Asymptotics from_ratfunc(const RatFuncElem& rf, const FieldConfig& cfg) {
    RatFuncField field(cfg);
    Asymptotics a;
    a.ratfunc = rf;
    const Classification c = field.classify(rf);
    a.eventual_sign = c.sign;
    a.sign_known = true;
    switch (c.tag) {
        case MagnitudeTag::Zero:
            a.identically_zero = true;
            break;
        case MagnitudeTag::Infinitesimal:
            a.mag = AsymptoticMag::Zero;
            a.exact_limit = Rational(0);
            a.nonzero_eventually = true; // nonzero ratfunc has finitely many roots
            a.nonzero_known = true;
            break;
        case MagnitudeTag::Appreciable:
            a.mag = AsymptoticMag::Finite;
            a.exact_limit = field.st(rf);
            break;
        case MagnitudeTag::Infinite:
            a.mag = AsymptoticMag::Infinite;
            break;
    }
    std::ostringstream os;
    os << "rational(" << rf.num().degree() - rf.den().degree() << ")";
    a.pattern = os.str();
    return normalized(a);
}

Asymptotics negate(Asymptotics a) {
    if (a.exact_limit) a.exact_limit = -*a.exact_limit;
    a.eventual_sign = flip(a.eventual_sign);
    if (a.ratfunc) {
        RatFuncField rf;
        a.ratfunc = rf.neg(*a.ratfunc);
    }
    return a;
}

Asymptotics combine(BinOp op, const Asymptotics& a, const Asymptotics& b,
                    const FieldConfig& cfg) {
    // exact route first
    if (a.ratfunc && b.ratfunc) {
        RatFuncField rf(cfg);
        try {
            switch (op) {
                case BinOp::Add: return from_ratfunc(rf.add(*a.ratfunc, *b.ratfunc), cfg);
                case BinOp::Sub: return from_ratfunc(rf.sub(*a.ratfunc, *b.ratfunc), cfg);
                case BinOp::Mul: return from_ratfunc(rf.mul(*a.ratfunc, *b.ratfunc), cfg);
                case BinOp::Div: return from_ratfunc(rf.div(*a.ratfunc, *b.ratfunc), cfg);
                default: break;
            }
        } catch (const Error&) {
            return Asymptotics::unknown("rational combination failed");
        }
    }

    Asymptotics r;
    r.domain_trouble = a.domain_trouble || b.domain_trouble;
    r.pattern = a.pattern + (op == BinOp::Add ? "+" : op == BinOp::Sub ? "-"
                             : op == BinOp::Mul ? "*" : "/") + b.pattern;
    const auto unknown = [&r](const char* why) {
        Asymptotics u = Asymptotics::unknown(why);
        u.domain_trouble = r.domain_trouble;
        return u;
    };

    switch (op) {
        case BinOp::Sub:
            return combine(BinOp::Add, a, negate(b), cfg);
        case BinOp::Add: {
            if (a.mag == AsymptoticMag::Unknown || b.mag == AsymptoticMag::Unknown)
                return unknown("sum with unknown part");
            if (a.exact_limit && b.exact_limit) {
                r.exact_limit = *a.exact_limit + *b.exact_limit;
                if (r.exact_limit->is_zero()) {
                    // limits cancel: both tend to the same value; the
                    // difference direction needs the exact route we lack
                    if (a.identically_zero && b.identically_zero) r.identically_zero = true;
                    else { r.mag = AsymptoticMag::Zero; r.exact_limit = Rational(0); }
                    return normalized(r);
                }
                return normalized(r);
            }
            // infinite + (finite or zero or same-sign infinite)
            if (a.mag == AsymptoticMag::Infinite || b.mag == AsymptoticMag::Infinite) {
                const Asymptotics& inf = a.mag == AsymptoticMag::Infinite ? a : b;
                const Asymptotics& other = a.mag == AsymptoticMag::Infinite ? b : a;
                if (other.mag == AsymptoticMag::Zero || other.mag == AsymptoticMag::Finite) {
                    r.mag = AsymptoticMag::Infinite;
                    r.eventual_sign = inf.eventual_sign;
                    r.sign_known = inf.sign_known;
                    return normalized(r);
                }
                if (other.mag == AsymptoticMag::Infinite && inf.sign_known &&
                    other.sign_known && inf.eventual_sign == other.eventual_sign) {
                    r.mag = AsymptoticMag::Infinite;
                    r.eventual_sign = inf.eventual_sign;
                    r.sign_known = true;
                    return normalized(r);
                }
                return unknown("competing infinite parts");
            }
            // finite-or-zero + finite-or-zero, at least one without exact limit
            if (a.mag == AsymptoticMag::Zero && b.mag == AsymptoticMag::Zero) {
                r.mag = AsymptoticMag::Zero;
                r.exact_limit = Rational(0);
                if (a.sign_known && b.sign_known && a.eventual_sign == b.eventual_sign) {
                    r.eventual_sign = a.eventual_sign;
                    r.sign_known = true;
                    if (r.eventual_sign != Sign::Zero) {
                        r.nonzero_eventually = true;
                        r.nonzero_known = true;
                    }
                }
                return normalized(r);
            }
            if (a.mag == AsymptoticMag::Zero || b.mag == AsymptoticMag::Zero) {
                const Asymptotics& fin = a.mag == AsymptoticMag::Zero ? b : a;
                r.mag = AsymptoticMag::Finite;
                r.eventual_sign = fin.eventual_sign;
                r.sign_known = fin.sign_known;
                r.exact_limit = fin.exact_limit;
                r.convergent_known = fin.convergent_known;
                return normalized(r);
            }
            // finite + finite: magnitudes may cancel, so mag stays Unknown
            r.convergent_known = a.convergent_known && b.convergent_known;
            return normalized(r);
        }
        case BinOp::Mul: {
            if (a.identically_zero || b.identically_zero) {
                r.identically_zero = true;
                return normalized(r);
            }
            if (a.mag == AsymptoticMag::Unknown || b.mag == AsymptoticMag::Unknown)
                return unknown("product with unknown part");
            if (a.sign_known && b.sign_known) {
                r.eventual_sign = sign_of(static_cast<int>(a.eventual_sign) *
                                          static_cast<int>(b.eventual_sign));
                r.sign_known = true;
            }
            if (a.exact_limit && b.exact_limit)
                r.exact_limit = *a.exact_limit * *b.exact_limit;
            const bool any_zero = a.mag == AsymptoticMag::Zero || b.mag == AsymptoticMag::Zero;
            const bool any_inf = a.mag == AsymptoticMag::Infinite || b.mag == AsymptoticMag::Infinite;
            if (any_zero && any_inf) return unknown("zero times infinite");
            if (any_zero) r.mag = AsymptoticMag::Zero;
            else if (any_inf) r.mag = AsymptoticMag::Infinite;
            else r.mag = AsymptoticMag::Finite;
            if (r.mag == AsymptoticMag::Zero) r.exact_limit = Rational(0);
            if (r.mag == AsymptoticMag::Finite)
                r.convergent_known = a.convergent_known && b.convergent_known;
            if (a.nonzero_known && a.nonzero_eventually && b.nonzero_known &&
                b.nonzero_eventually) {
                r.nonzero_eventually = true;
                r.nonzero_known = true;
            }
            return normalized(r);
        }
        case BinOp::Div: {
            if (b.identically_zero) return unknown("division by identically zero");
            if (!(b.nonzero_known && b.nonzero_eventually) &&
                b.mag != AsymptoticMag::Infinite)
                r.domain_trouble = true; // zeros of the divisor not ruled out
            // invert b, then multiply
            Asymptotics inv;
            inv.pattern = "1/(" + b.pattern + ")";
            inv.sign_known = b.sign_known;
            inv.eventual_sign = b.eventual_sign;
            switch (b.mag) {
                case AsymptoticMag::Zero: inv.mag = AsymptoticMag::Infinite; break;
                case AsymptoticMag::Finite:
                    inv.mag = AsymptoticMag::Finite;
                    inv.convergent_known = b.convergent_known;
                    if (b.exact_limit && !b.exact_limit->is_zero())
                        inv.exact_limit = b.exact_limit->reciprocal();
                    break;
                case AsymptoticMag::Infinite: inv.mag = AsymptoticMag::Zero;
                    inv.exact_limit = Rational(0);
                    inv.nonzero_eventually = true;
                    inv.nonzero_known = true;
                    break;
                case AsymptoticMag::Unknown: return unknown("division by unknown part");
            }
            Asymptotics res = combine(BinOp::Mul, a, normalized(inv), cfg);
            res.domain_trouble = res.domain_trouble || r.domain_trouble;
            res.pattern = r.pattern;
            return res;
        }
        default:
            return unknown("unsupported combination");
    }
}

Asymptotics function_wrap(FuncTag f, const Asymptotics& arg, const FieldConfig& cfg) {
    Asymptotics r;
    r.domain_trouble = arg.domain_trouble;
    r.pattern = std::string(to_string(f)) + "(" + arg.pattern + ")";
    const auto trouble = [&r]() {
        Asymptotics t = Asymptotics::unknown(r.pattern);
        t.domain_trouble = true;
        return t;
    };

    switch (f) {
        case FuncTag::Abs: {
            r = arg;
            r.pattern = "abs(" + arg.pattern + ")";
            r.ratfunc.reset();
            if (r.exact_limit) r.exact_limit = r.exact_limit->abs();
            if (arg.mag == AsymptoticMag::Zero || arg.mag == AsymptoticMag::Finite ||
                arg.mag == AsymptoticMag::Infinite) {
                // |.| fixes the sign even when the argument's sign is unknown
                if (arg.identically_zero) return normalized(r);
                r.eventual_sign = (arg.nonzero_known && arg.nonzero_eventually)
                                      ? Sign::Positive
                                      : arg.eventual_sign;
                r.sign_known = arg.nonzero_known && arg.nonzero_eventually;
            }
            return normalized(r);
        }
        case FuncTag::Exp: {
            r.eventual_sign = Sign::Positive;
            r.sign_known = true;
            r.nonzero_eventually = true;
            r.nonzero_known = true;
            if (arg.mag == AsymptoticMag::Zero) {
                r.mag = AsymptoticMag::Finite;
                r.exact_limit = Rational(1);
            } else if (arg.mag == AsymptoticMag::Finite) {
                r.mag = AsymptoticMag::Finite; // e^L, transcendental but finite nonzero
                r.convergent_known = arg.convergent_known;
                r.exact_limit.reset();
            } else if (arg.mag == AsymptoticMag::Infinite && arg.sign_known) {
                r.mag = arg.eventual_sign == Sign::Positive ? AsymptoticMag::Infinite
                                                            : AsymptoticMag::Zero;
                if (r.mag == AsymptoticMag::Zero) r.exact_limit = Rational(0);
            } else {
                return Asymptotics::unknown(r.pattern);
            }
            return normalized(r);
        }
        case FuncTag::Log: {
            const bool positive_eventually =
                arg.sign_known && arg.eventual_sign == Sign::Positive;
            if (!positive_eventually) return trouble();
            if (arg.mag == AsymptoticMag::Zero) {
                r.mag = AsymptoticMag::Infinite;
                r.eventual_sign = Sign::Negative;
                r.sign_known = true;
            } else if (arg.mag == AsymptoticMag::Infinite) {
                r.mag = AsymptoticMag::Infinite;
                r.eventual_sign = Sign::Positive;
                r.sign_known = true;
            } else if (arg.mag == AsymptoticMag::Finite && arg.exact_limit) {
                const Rational& L = *arg.exact_limit;
                if (L == Rational(1)) {
                    // log of something tending to 1 tends to 0; direction
                    // follows the approach side when the exact route knows it
                    r.mag = AsymptoticMag::Zero;
                    r.exact_limit = Rational(0);
                    if (arg.ratfunc) {
                        RatFuncField rf(cfg);
                        const Classification c =
                            rf.classify(rf.sub(*arg.ratfunc, rf.one()));
                        if (c.tag == MagnitudeTag::Zero) r.identically_zero = true;
                        else {
                            r.eventual_sign = c.sign;
                            r.sign_known = true;
                            r.nonzero_eventually = true;
                            r.nonzero_known = true;
                        }
                    }
                } else {
                    r.mag = AsymptoticMag::Finite;
                    r.convergent_known = arg.convergent_known;
                    r.eventual_sign = L > Rational(1) ? Sign::Positive : Sign::Negative;
                    r.sign_known = true;
                }
            } else {
                return Asymptotics::unknown(r.pattern);
            }
            return normalized(r);
        }
        case FuncTag::Sqrt: {
            const bool nonnegative = arg.sign_known &&
                (arg.eventual_sign == Sign::Positive || arg.identically_zero);
            if (!nonnegative) return trouble();
            r = arg;
            r.pattern = "sqrt(" + arg.pattern + ")";
            r.ratfunc.reset();
            if (r.exact_limit) {
                auto root = exact_kth_root(*r.exact_limit, 2);
                if (root) r.exact_limit = *root;
                else r.exact_limit.reset();
            }
            return normalized(r);
        }
        case FuncTag::Sin:
        case FuncTag::Cos: {
            if (arg.mag == AsymptoticMag::Zero) {
                if (f == FuncTag::Cos) {
                    r.mag = AsymptoticMag::Finite;
                    r.exact_limit = Rational(1);
                    return normalized(r);
                }
                r.mag = AsymptoticMag::Zero;
                r.exact_limit = Rational(0);
                // sin t has t's sign near 0
                r.eventual_sign = arg.eventual_sign;
                r.sign_known = arg.sign_known;
                r.nonzero_eventually = arg.nonzero_known && arg.nonzero_eventually;
                r.nonzero_known = r.nonzero_eventually;
                if (arg.identically_zero) r.identically_zero = true;
                return normalized(r);
            }
            if (arg.mag == AsymptoticMag::Finite && arg.exact_limit) {
                // sin/cos of a nonzero rational is nonzero; certify the sign
                // numerically at working precision
                const Rational v = transcendental_value(f, *arg.exact_limit,
                                                        cfg.working_precision);
                r.mag = AsymptoticMag::Finite;
                r.convergent_known = true; // limit exists: f(L)
                if (v.abs() > Rational::pow10(-(cfg.working_precision - 10))) {
                    r.eventual_sign = sign_of(v.sign());
                    r.sign_known = true;
                }
                return normalized(r);
            }
            Asymptotics u = Asymptotics::unknown(r.pattern); // oscillatory
            u.domain_trouble = arg.domain_trouble;
            return u;
        }
    }
    return Asymptotics::unknown(r.pattern);
}

Asymptotics analyze_expr(const Expr& e, const FieldConfig& cfg, const std::string& var) {
    if (auto rf = lower_to_ratfunc(e, var)) return from_ratfunc(*rf, cfg);

    struct Visitor {
        const FieldConfig& cfg;
        const std::string& var;

        Asymptotics operator()(const Expr::Lit& l) const { return exact_constant(l.value); }
        Asymptotics operator()(const Expr::Var& v) const {
            if (v.name != var) return Asymptotics::unknown("foreign variable " + v.name);
            Asymptotics a;
            a.mag = AsymptoticMag::Infinite;
            a.eventual_sign = Sign::Positive;
            a.sign_known = true;
            a.pattern = var;
            return normalized(a);
        }
        Asymptotics operator()(const Expr::Neg& n) const {
            return negate(analyze_expr(*n.arg, cfg, var));
        }
        Asymptotics operator()(const Expr::Bin& b) const {
            if (b.op == BinOp::Pow) {
                // literal exponent: repeated multiplication / root on the arg
                if (auto* l = std::get_if<Expr::Lit>(&b.rhs->node()))
                    return literal_power(analyze_expr(*b.lhs, cfg, var), l->value);
                // index-variable exponent over a lowerable base: power form
                return power_asymptotics(*b.lhs, *b.rhs, cfg);
            }
            return combine(b.op, analyze_expr(*b.lhs, cfg, var),
                           analyze_expr(*b.rhs, cfg, var), cfg);
        }
        Asymptotics operator()(const Expr::Call& c) const {
            return function_wrap(c.func, analyze_expr(*c.arg, cfg, var), cfg);
        }
    };
    return std::visit(Visitor{cfg, var}, e.node());
}

Asymptotics analyze_expr_env(const Expr& e, const FieldConfig& cfg,
                             const std::map<std::string, Asymptotics>& env) {
    struct Visitor {
        const FieldConfig& cfg;
        const std::map<std::string, Asymptotics>& env;

        Asymptotics operator()(const Expr::Lit& l) const { return exact_constant(l.value); }
        Asymptotics operator()(const Expr::Var& v) const {
            auto it = env.find(v.name);
            if (it == env.end())
                return Asymptotics::unknown("unbound variable " + v.name);
            return it->second;
        }
        Asymptotics operator()(const Expr::Neg& n) const {
            return negate(analyze_expr_env(*n.arg, cfg, env));
        }
        Asymptotics operator()(const Expr::Bin& b) const {
            if (b.op == BinOp::Pow) {
                auto* l = std::get_if<Expr::Lit>(&b.rhs->node());
                if (!l) return Asymptotics::unknown("composed power");
                return literal_power(analyze_expr_env(*b.lhs, cfg, env), l->value);
            }
            return combine(b.op, analyze_expr_env(*b.lhs, cfg, env),
                           analyze_expr_env(*b.rhs, cfg, env), cfg);
        }
        Asymptotics operator()(const Expr::Call& c) const {
            return function_wrap(c.func, analyze_expr_env(*c.arg, cfg, env), cfg);
        }
    };
    return std::visit(Visitor{cfg, env}, e.node());
}

Asymptotics power_asymptotics(const Expr& base, const Expr& expo, const FieldConfig& cfg) {
    auto B = lower_to_ratfunc(base, "n");
    auto E = lower_to_ratfunc(expo, "n");
    if (!B || !E) return Asymptotics::unknown("power with non-rational base/exponent");

    RatFuncField rf(cfg);
    const Classification ec = rf.classify(*E);
    if (ec.tag != MagnitudeTag::Infinite || ec.sign != Sign::Positive)
        return Asymptotics::unknown("power exponent not growing");

    const Classification bc = rf.classify(*B);
    const Sign base_sign = bc.sign;
    Asymptotics r;

    if (bc.tag == MagnitudeTag::Zero) {
        r.identically_zero = true;
        r.pattern = "power(base=0)";
        return normalized(r);
    }
    if (bc.tag == MagnitudeTag::Infinite) {
        r.mag = AsymptoticMag::Infinite;
        r.sign_known = base_sign == Sign::Positive;
        r.eventual_sign = base_sign == Sign::Positive ? Sign::Positive : Sign::Zero;
        r.pattern = "power(base->inf)";
        return normalized(r);
    }

    const Rational b_lim = rf.st(*B); // 0 for infinitesimal base
    const Rational abs_lim = b_lim.abs();
    if (abs_lim < Rational(1)) {
        r.mag = AsymptoticMag::Zero;
        r.exact_limit = Rational(0);
        if (base_sign == Sign::Positive) {
            r.eventual_sign = Sign::Positive;
            r.sign_known = true;
            r.nonzero_eventually = true;
            r.nonzero_known = true;
        }
        r.pattern = "power(|base|-><1)";
        return normalized(r);
    }
    if (abs_lim > Rational(1)) {
        r.mag = AsymptoticMag::Infinite;
        if (base_sign == Sign::Positive) {
            r.eventual_sign = Sign::Positive;
            r.sign_known = true;
        }
        r.pattern = "power(|base|->>1)";
        return normalized(r);
    }

    if (b_lim == Rational(-1) && B->is_constant()) {
        // exactly alternating: appreciable magnitude, sign needs an ultrafilter
        r.mag = AsymptoticMag::Finite;
        r.sign_known = false;
        r.pattern = "power(base=-1): alternating sign";
        Asymptotics n = normalized(r);
        n.convergent_known = false;
        return n;
    }

    // |base| -> 1: write base = 1 + v (or -1 + v); only the positive side is
    // certified, via E*v -> c giving the limit e^c
    if (b_lim == Rational(1)) {
        const RatFuncElem v = rf.sub(*B, rf.one());
        const RatFuncElem w = rf.mul(*E, v);
        const Classification wc = rf.classify(w);
        if (wc.tag == MagnitudeTag::Zero || wc.tag == MagnitudeTag::Appreciable ||
            wc.tag == MagnitudeTag::Infinitesimal) {
            const Rational c = rf.st(w);
            r.mag = AsymptoticMag::Finite;
            r.convergent_known = true; // limit exists: exp(c)
            r.eventual_sign = Sign::Positive;
            r.sign_known = true;
            if (c.is_zero() && wc.tag != MagnitudeTag::Appreciable)
                r.exact_limit = Rational(1);
            r.pattern = "power(base->1, scaled-log->" + c.to_string() + ")";
            return normalized(r);
        }
        if (wc.tag == MagnitudeTag::Infinite) {
            if (wc.sign == Sign::Positive) {
                r.mag = AsymptoticMag::Infinite;
                r.eventual_sign = Sign::Positive;
                r.sign_known = true;
            } else {
                r.mag = AsymptoticMag::Zero;
                r.exact_limit = Rational(0);
                r.eventual_sign = Sign::Positive;
                r.sign_known = true;
                r.nonzero_eventually = true;
                r.nonzero_known = true;
            }
            r.pattern = "power(base->1, scaled-log->inf)";
            return normalized(r);
        }
    }
    return Asymptotics::unknown("power(base->-1)"); // oscillating magnitude-1 base
}

namespace {

// Tail bound for sums of |c| * k^d (d <= -2 rational) starting past index m:
// integral comparison with the settled-polynomial constant folded in.
Rational monomial_tail_bound(const Rational& c, const Rational& d, long m, int precision) {
    // sum_{k>m} k^d <= integral_m^inf t^d dt = m^(d+1)/(-d-1)
    const Rational mq(m);
    const Rational exponent = d + Rational(1); // negative
    // m^(d+1) for rational d: materialize via root when needed
    Rational mpow;
    if (exponent.is_integer()) {
        mpow = mq.pow_int(exponent.numerator().get_si());
    } else {
        const long num = exponent.numerator().get_si();
        const unsigned den = static_cast<unsigned>(exponent.denominator().get_ui());
        mpow = kth_root_value(mq, den, precision).pow_int(num) * Rational(2); // headroom
    }
    return c.abs() * mpow / (-exponent);
}

} // namespace

Asymptotics partial_sum_asymptotics(const Expr& term_k, const FieldConfig& cfg) {
    RationalField ground(cfg);

    // rational-function terms: integral test decides everything
    if (auto t = lower_to_ratfunc(term_k, "k")) {
        RatFuncField rf(cfg);
        Asymptotics r;
        if (t->is_zero()) {
            r.identically_zero = true;
            r.pattern = "sum(zero terms)";
            return normalized(r);
        }
        const int deg = t->num().degree() - t->den().degree();
        const Sign term_sign = rf.sign_at_infinity(*t);
        if (deg >= -1) {
            r.mag = AsymptoticMag::Infinite;
            r.eventual_sign = term_sign;
            r.sign_known = true;
            r.pattern = "sum(rational terms, deg=" + std::to_string(deg) + ")";
            return normalized(r);
        }
        // deg <= -2: absolutely convergent; pin the sign of the limit by an
        // exact partial sum plus a rigorous tail bound
        r.convergent_known = true;
        r.pattern = "sum(rational terms, deg=" + std::to_string(deg) + ")";
        const Rational settle = max(poly_settle_index(t->num()), poly_settle_index(t->den()));
        const Rational lead_ratio = t->num().leading(); // den monic
        Bindings<RationalField> b;
        long m = 64;
        Rational partial(0);
        long k = 1;
        for (int round = 0; round < 7; ++round) {
            if (Rational(m) < settle) { m *= 4; continue; }
            for (; k <= m; ++k) {
                b.insert_or_assign("k", Rational(k));
                try {
                    partial += evaluate(term_k, ground, b);
                } catch (const Error&) {
                    return Asymptotics::unknown("sum(term undefined at k=" +
                                                std::to_string(k) + ")");
                }
            }
            const Rational tail =
                Rational(3) * monomial_tail_bound(lead_ratio, Rational(deg), m,
                                                  cfg.working_precision);
            if (partial.abs() > tail) {
                r.mag = AsymptoticMag::Finite;
                r.eventual_sign = sign_of(partial.sign());
                r.sign_known = true;
                return normalized(r);
            }
            m *= 4;
        }
        return normalized(r); // convergent, limit sign unresolved
    }

    // geometric terms A(k) * ratio^k with a literal ratio, |ratio| < 1
    if (auto g = match_geometric_in_k(term_k)) {
        if (!g->literal_base)
            return Asymptotics::unknown("sum(geometric, non-literal base)");
        const Rational rho = g->literal_base->abs();
        Asymptotics r;
        if (rho >= Rational(1)) {
            auto A = lower_to_ratfunc(*g->coeff, "k");
            if (A && !A->is_zero() && *g->literal_base > Rational(1)) {
                RatFuncField rf;
                r.mag = AsymptoticMag::Infinite;
                r.eventual_sign = rf.sign_at_infinity(*A);
                r.sign_known = true;
                r.pattern = "sum(geometric, ratio>1)";
                return normalized(r);
            }
            return Asymptotics::unknown("sum(geometric, |ratio|>=1)");
        }
        auto A = lower_to_ratfunc(*g->coeff, "k");
        if (!A) return Asymptotics::unknown("sum(geometric, unlowerable coeff)");
        r.convergent_known = true;
        r.pattern = "sum(geometric, |ratio|<1)";
        if (A->is_zero()) {
            r.identically_zero = true;
            return normalized(r);
        }
        // |A(k)| <= 3 |lead| k^degA past the settling index, and the bound
        // sequence k^degA rho^k contracts by (1+1/m)^degA * rho beyond m
        const int degA = A->num().degree() - A->den().degree();
        const Rational lead = A->num().leading().abs();
        const Rational settle = max(poly_settle_index(A->num()), poly_settle_index(A->den()));
        Bindings<RationalField> b;
        long m = 64;
        Rational partial(0);
        long k = 1;
        for (int round = 0; round < 6; ++round) {
            const Rational contraction =
                (Rational(1) + Rational(1, m)).pow_int(std::max(degA, 0)) * rho;
            if (Rational(m) < settle || contraction >= Rational(1)) { m *= 4; continue; }
            for (; k <= m; ++k) {
                b.insert_or_assign("k", Rational(k));
                try {
                    partial += evaluate(term_k, ground, b);
                } catch (const Error&) {
                    return Asymptotics::unknown("sum(term undefined at k=" +
                                                std::to_string(k) + ")");
                }
            }
            const Rational head =
                Rational(3) * lead * Rational(m + 1).pow_int(degA) * rho.pow_int(m + 1);
            const Rational tail = head / (Rational(1) - contraction);
            if (partial.abs() > tail) {
                r.mag = AsymptoticMag::Finite;
                r.eventual_sign = sign_of(partial.sign());
                r.sign_known = true;
                return normalized(r);
            }
            m *= 4;
        }
        return normalized(r);
    }

    return Asymptotics::unknown("sum(unmatched term pattern)");
}

Asymptotics partial_product_asymptotics(const Expr& term_k, const FieldConfig& cfg) {
    auto t = lower_to_ratfunc(term_k, "k");
    if (!t) return Asymptotics::unknown("product(unmatched term pattern)");

    RatFuncField rf(cfg);
    RationalField ground(cfg);
    const RatFuncElem w = rf.sub(*t, rf.one()); // t = 1 + w
    const Classification wc = rf.classify(w);

    // a zero factor at any index collapses the product from there on
    const auto prefix_product = [&](long upto) -> std::optional<Rational> {
        Bindings<RationalField> b;
        Rational p(1);
        for (long k = 1; k <= upto; ++k) {
            b.insert_or_assign("k", Rational(k));
            try {
                p *= evaluate(term_k, ground, b);
            } catch (const Error&) {
                return std::nullopt;
            }
            if (p.is_zero()) return Rational(0);
        }
        return p;
    };

    Asymptotics r;
    if (wc.tag == MagnitudeTag::Zero) {
        // all factors 1
        r.exact_limit = Rational(1);
        r.mag = AsymptoticMag::Finite;
        r.pattern = "product(all factors 1)";
        return normalized(r);
    }

    const int deg = w.num().degree() - w.den().degree();
    const Rational settle =
        max(poly_settle_index(w.num()), max(poly_settle_index(w.den()),
            max(poly_settle_index(t->num()), poly_settle_index(t->den()))));
    long m = 64;
    while (Rational(m) < settle && m < (1L << 22)) m *= 2;
    const auto prefix = prefix_product(m);
    if (!prefix) return Asymptotics::unknown("product(term undefined in prefix)");
    if (prefix->is_zero()) {
        r.identically_zero = true;
        r.pattern = "product(zero factor)";
        return normalized(r);
    }
    const Sign prefix_sign = sign_of(prefix->sign());

    if (wc.tag == MagnitudeTag::Infinitesimal && deg <= -2) {
        // sum |w| converges: product converges to a nonzero multiple of the prefix
        r.mag = AsymptoticMag::Finite;
        r.eventual_sign = prefix_sign;
        r.sign_known = true;
        r.pattern = "product(1+w, w~k^" + std::to_string(deg) + ")";
        return normalized(r);
    }
    if (wc.tag == MagnitudeTag::Infinitesimal && deg == -1) {
        // product behaves like k^c with c the leading ratio of w
        const Rational c = w.num().leading();
        r.mag = c.sign() > 0 ? AsymptoticMag::Infinite : AsymptoticMag::Zero;
        if (r.mag == AsymptoticMag::Zero) {
            r.exact_limit = Rational(0);
            r.nonzero_eventually = true;
            r.nonzero_known = true;
        }
        r.eventual_sign = prefix_sign;
        r.sign_known = true;
        r.pattern = "product(1+w, w~" + c.to_string() + "/k)";
        return normalized(r);
    }
    // factors do not tend to 1: compare |t|'s limit with 1
    const Classification tc = rf.classify(*t);
    if (tc.tag == MagnitudeTag::Infinite) {
        r.mag = AsymptoticMag::Infinite;
        r.sign_known = tc.sign == Sign::Positive;
        r.eventual_sign = tc.sign == Sign::Positive ? prefix_sign : Sign::Zero;
        r.pattern = "product(factors->inf)";
        return normalized(r);
    }
    if (tc.tag == MagnitudeTag::Appreciable || tc.tag == MagnitudeTag::Infinitesimal) {
        const Rational L = rf.st(*t);
        if (L.abs() < Rational(1)) {
            r.mag = AsymptoticMag::Zero;
            r.exact_limit = Rational(0);
            r.sign_known = L.sign() >= 0;
            r.eventual_sign = L.sign() >= 0 ? prefix_sign : Sign::Zero;
            r.pattern = "product(|factor|-><1)";
            return normalized(r);
        }
        if (L.abs() > Rational(1)) {
            r.mag = AsymptoticMag::Infinite;
            r.sign_known = L.sign() > 0;
            r.eventual_sign = L.sign() > 0 ? prefix_sign : Sign::Zero;
            r.pattern = "product(|factor|->>1)";
            return normalized(r);
        }
    }
    return Asymptotics::unknown("product(factor->-1)");
}

std::optional<MonomialPattern> match_monomial_in_k(const Expr& term_k) {
    // normalize through the exact route: c * k^p is a one-term numerator and
    // one-term denominator after lowering, so detect it there for integer p;
    // fractional powers are matched syntactically.
    if (auto rf = lower_to_ratfunc(term_k, "k")) {
        if (rf->is_zero()) return std::nullopt;
        const auto& num = rf->num();
        const auto& den = rf->den();
        const auto is_monomial = [](const Polynomial& p) {
            for (int i = 0; i < p.degree(); ++i)
                if (!p.coeff(i).is_zero()) return false;
            return !p.is_zero();
        };
        if (is_monomial(num) && is_monomial(den)) {
            MonomialPattern m;
            m.coeff = num.leading() / den.leading();
            m.power = Rational(num.degree() - den.degree());
            return m;
        }
        return std::nullopt;
    }

    // syntactic fallback: lit / k^q and lit * k^q with rational q
    const auto match_pow = [](const Expr& e) -> std::optional<Rational> {
        if (auto* b = std::get_if<Expr::Bin>(&e.node()); b && b->op == BinOp::Pow) {
            auto* v = std::get_if<Expr::Var>(&b->lhs->node());
            auto* q = std::get_if<Expr::Lit>(&b->rhs->node());
            if (v && v->name == "k" && q) return q->value;
        }
        if (auto* v = std::get_if<Expr::Var>(&e.node()); v && v->name == "k")
            return Rational(1);
        return std::nullopt;
    };
    if (auto* b = std::get_if<Expr::Bin>(&term_k.node())) {
        auto* l = std::get_if<Expr::Lit>(&b->lhs->node());
        if (l) {
            if (auto p = match_pow(*b->rhs)) {
                if (b->op == BinOp::Div) return MonomialPattern{l->value, -*p};
                if (b->op == BinOp::Mul) return MonomialPattern{l->value, *p};
            }
        }
    }
    if (auto p = match_pow(term_k)) return MonomialPattern{Rational(1), *p};
    return std::nullopt;
}

std::optional<GeometricPattern> match_geometric_in_k(const Expr& term_k) {
    // peel multiplicative structure looking for exactly one (k-free)^k factor
    struct Walk {
        ExprPtr base;
        bool failed = false;

        ExprPtr strip(const ExprPtr& e) {
            if (failed) return e;
            if (auto* b = std::get_if<Expr::Bin>(&e->node())) {
                if (b->op == BinOp::Mul) {
                    ExprPtr l = strip(b->lhs);
                    ExprPtr r = strip(b->rhs);
                    return mk_bin(BinOp::Mul, std::move(l), std::move(r));
                }
                if (b->op == BinOp::Pow) {
                    auto* ev = std::get_if<Expr::Var>(&b->rhs->node());
                    if (ev && ev->name == "k" && !contains_var(*b->lhs, "k")) {
                        if (base) { failed = true; return e; }
                        base = b->lhs;
                        return Expr::lit(Rational(1));
                    }
                }
            }
            if (contains_var(*e, "k")) {
                // leftover k-dependence must be rational-function shaped
                if (!lower_to_ratfunc(*e, "k")) failed = true;
            }
            return e;
        }
    };
    Walk w;
    ExprPtr coeff = w.strip(std::make_shared<Expr>(term_k));
    if (w.failed || !w.base) return std::nullopt;
    GeometricPattern g;
    g.coeff = std::move(coeff);
    g.base = w.base;
    if (auto* l = std::get_if<Expr::Lit>(&w.base->node())) g.literal_base = l->value;
    return g;
}

} // namespace btrack
