#include "btrack/calculus.hpp"

#include <algorithm>
#include <sstream>

#include "btrack/asymptotics.hpp"
#include "btrack/errors.hpp"

namespace btrack::calculus {

const char* to_string(ContinuityVerdict v) {
    switch (v) {
        case ContinuityVerdict::PassToOrder: return "PassToOrder";
        case ContinuityVerdict::Fail: return "Fail";
        case ContinuityVerdict::Undecided: return "Undecided";
    }
    return "?";
}

const char* to_string(SumTheoremVerdict v) {
    switch (v) {
        case SumTheoremVerdict::UniformEvidence: return "UniformEvidence";
        case SumTheoremVerdict::NonUniformWitness: return "NonUniformWitness";
        case SumTheoremVerdict::Undecided: return "Undecided";
    }
    return "?";
}

// ------------------------------------------------------------- derivative

namespace {

std::string join_probe_values(
    const std::vector<std::pair<std::string, Rational>>& vals) {
    std::ostringstream os;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) os << ", ";
        os << vals[i].first << " -> " << vals[i].second.to_string();
    }
    return os.str();
}

} // namespace

DerivativeDetail derivative_detail(const ExprPtr& f, const Rational& x0,
                                   const LeviCivitaField& field) {
    const LCNumber eps = field.epsilon();
    const std::vector<std::pair<std::string, LCNumber>> probes = {
        {"eps", eps},
        {"-eps", field.neg(eps)},
        {"2*eps", field.add(eps, eps)},
        {"eps^2", field.mul(eps, eps)},
    };

    Bindings<LeviCivitaField> at_x0;
    at_x0.emplace("x", field.from_rational(x0));
    const LCNumber f0 = evaluate(*f, field, at_x0);

    DerivativeDetail out;
    bool first = true;
    for (const auto& [desc, dx] : probes) {
        Bindings<LeviCivitaField> b;
        b.emplace("x", field.add(field.from_rational(x0), dx));
        const LCNumber fy = evaluate(*f, field, b);
        const LCNumber ratio = field.div(field.sub(fy, f0), dx);
        const Rational st = field.st(ratio); // throws NotFinite on blowup
        out.probe_values.emplace_back(desc, st);
        if (first) {
            out.value = st;
            first = false;
        } else if (!(st == out.value)) {
            throw NotDifferentiable(
                "difference quotient standard parts disagree across probes: " +
                join_probe_values(out.probe_values) + ", " + desc + " -> " +
                st.to_string());
        }
    }
    return out;
}

DerivativeDetail derivative_detail(const ExprPtr& f, const Rational& x0,
                                   const SequenceField& field) {
    const ExprPtr n = Expr::var("n");
    const std::vector<std::pair<std::string, ExprPtr>> probes = {
        {"<1/n>", mk_bin(BinOp::Div, Expr::lit(Rational(1)), n)},
        {"<-1/n>", mk_bin(BinOp::Div, Expr::lit(Rational(-1)), n)},
        {"<1/n^2>", mk_bin(BinOp::Div, Expr::lit(Rational(1)),
                           mk_bin(BinOp::Pow, n, Expr::lit(Rational(2))))},
    };

    RationalField ground(field.config());
    Bindings<RationalField> gb;
    gb.emplace("x", x0);
    const Rational f0 = evaluate(*f, ground, gb);

    DerivativeDetail out;
    const Rational tol = field.config().st_tolerance * Rational(4);
    bool first = true;
    bool all_exact = true;
    for (const auto& [desc, dx] : probes) {
        const ExprPtr shifted =
            substitute(f, "x", mk_bin(BinOp::Add, Expr::lit(x0), dx));
        const ExprPtr ratio =
            mk_bin(BinOp::Div, mk_bin(BinOp::Sub, shifted, Expr::lit(f0)), dx);
        const StEstimate st = field.st_detail(field.from_expr(ratio));
        out.probe_values.emplace_back(desc, st.value);
        all_exact = all_exact && st.exact;
        if (first) {
            out.value = st.value;
            first = false;
        } else {
            const Rational gap = (st.value - out.value).abs();
            const bool agree = all_exact ? gap.is_zero() : gap <= tol;
            if (!agree)
                throw NotDifferentiable(
                    "difference quotient standard parts disagree across probes: " +
                    join_probe_values(out.probe_values));
        }
    }
    return out;
}

Rational derivative(const ExprPtr& f, const Rational& x0, const LeviCivitaField& field) {
    return derivative_detail(f, x0, field).value;
}

Rational derivative(const ExprPtr& f, const Rational& x0, const SequenceField& field) {
    return derivative_detail(f, x0, field).value;
}

// ------------------------------------------------------------- continuity

namespace {

template <NumberField F>
ContinuityReport increment_battery(
    const ExprPtr& f, const Rational& x0, const F& field,
    const std::vector<std::pair<std::string, typename F::Value>>& probe_points) {
    using V = typename F::Value;
    ContinuityReport rep;
    rep.point = x0;

    // f(x0) first; if the point itself is undefined, fall back to pairwise
    // increments between the probe values (a two-sided smallness test), and
    // report a blowup as the point's own domain failure
    std::optional<V> f0;
    std::string point_error;
    try {
        Bindings<F> b;
        b.emplace("x", field.from_rational(x0));
        f0 = evaluate(*f, field, b);
    } catch (const Error& e) {
        point_error = e.name();
    }

    std::vector<std::pair<std::string, std::optional<V>>> values;
    for (const auto& [desc, xval] : probe_points) {
        ProbeRecord pr;
        pr.description = desc;
        try {
            Bindings<F> b;
            b.emplace("x", xval);
            values.emplace_back(desc, evaluate(*f, field, b));
        } catch (const Error& e) {
            pr.error = e.name();
            values.emplace_back(desc, std::nullopt);
        }
        rep.probes.push_back(std::move(pr));
    }

    const auto classify_into = [&](std::size_t idx, const V& increment) {
        ProbeRecord& pr = rep.probes[idx];
        try {
            const Classification c = field.classify(increment);
            pr.increment_class = c;
            pr.increment_small = c.is_small();
        } catch (const Undecided&) {
            // the full classification may need a sign no cofinite check can
            // give; smallness of the tag is often still certified
            try {
                pr.increment_small =
                    field.infinitely_close(increment, field.from_rational(Rational(0)));
            } catch (const Undecided& e2) {
                pr.error = e2.name();
            }
        }
        if (pr.increment_class && pr.increment_class->is_finite()) {
            try {
                pr.increment_st = field.st(increment);
            } catch (const Error&) {
                // informational only
            }
        }
    };

    if (!f0) {
        // undefined point: any infinite probe value makes it a domain error;
        // otherwise test increments between probes pairwise
        std::vector<const V*> finite;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values[i].second) continue;
            Classification c;
            try {
                c = field.classify(*values[i].second);
            } catch (const Undecided&) {
                continue;
            }
            if (c.tag == MagnitudeTag::Infinite)
                throw DomainError("f is undefined at x0=" + x0.to_string() +
                                  " (" + point_error + ") and blows up at probe " +
                                  rep.probes[i].description);
            finite.push_back(&*values[i].second);
        }
        if (finite.size() < 2)
            throw DomainError("f is undefined at x0=" + x0.to_string() + " (" +
                              point_error + ")");
        rep.detail = "f undefined at the point; classifying pairwise probe increments";
        for (std::size_t i = 0; i + 1 < finite.size(); ++i) {
            const V inc = field.sub(*finite[i + 1], *finite[i]);
            classify_into(i, inc);
        }
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values[i].second) continue;
            classify_into(i, field.sub(*values[i].second, *f0));
        }
    }

    bool any_fail = false, any_undecided = false;
    for (const auto& pr : rep.probes) {
        if (pr.increment_small) {
            if (!*pr.increment_small) any_fail = true;
        } else if (!pr.error.empty()) {
            any_undecided = true;
        }
    }
    rep.verdict = any_fail ? ContinuityVerdict::Fail
                : any_undecided ? ContinuityVerdict::Undecided
                                : ContinuityVerdict::PassToOrder;
    return rep;
}

} // namespace

ContinuityReport continuity_at(const ExprPtr& f, const Rational& x0,
                               const LeviCivitaField& field) {
    const LCNumber eps = field.epsilon();
    const LCNumber x0v = field.from_rational(x0);
    std::vector<std::pair<std::string, LCNumber>> points = {
        {"eps", field.add(x0v, eps)},
        {"-eps", field.sub(x0v, eps)},
        {"2*eps", field.add(x0v, field.add(eps, eps))},
        {"eps^2", field.add(x0v, field.mul(eps, eps))},
        {"eps^(1/2)", field.add(x0v, field.root(eps, 2))},
    };
    return increment_battery(f, x0, field, points);
}

ContinuityReport continuity_at(const ExprPtr& f, const Rational& x0,
                               const SequenceField& field) {
    const auto probe = [&](const std::string& text) {
        ParseOptions opts;
        opts.variables = {"n"};
        opts.general_exponents = true;
        const ExprPtr off = parse_expr(text, opts);
        return std::pair<std::string, HyperSeq>(
            "<" + text + ">",
            field.from_expr(mk_bin(BinOp::Add, Expr::lit(x0), off)));
    };
    std::vector<std::pair<std::string, HyperSeq>> points = {
        probe("1/n"),
        probe("-1/n"),
        probe("1/n^2"),
        probe("1/log(n+1)"),
    };
    return increment_battery(f, x0, field, points);
}

ContinuityReport uniform_continuity_probe(const ExprPtr& f, const Rational& a,
                                          const Rational& b,
                                          const LeviCivitaField& field) {
    if (!(a < b)) throw DomainError("empty interval");
    const LCNumber eps = field.epsilon();
    const LCNumber eps2 = field.mul(eps, eps);

    struct HyperPoint {
        std::string name;
        LCNumber x;
        std::vector<std::pair<std::string, LCNumber>> perturbations;
    };
    std::vector<HyperPoint> battery;
    battery.push_back({"a+eps", field.add(field.from_rational(a), eps),
                       {{"eps^2", eps2}, {"-eps^2", field.neg(eps2)}}});
    battery.push_back({"b-eps", field.sub(field.from_rational(b), eps),
                       {{"eps^2", eps2}, {"-eps^2", field.neg(eps2)}}});
    for (int i = 1; i <= 3; ++i) {
        const Rational c = a + (b - a) * Rational(i, 4);
        battery.push_back({"x=" + c.to_string(), field.from_rational(c),
                           {{"eps", eps}, {"-eps", field.neg(eps)}, {"eps^2", eps2}}});
    }

    ContinuityReport rep;
    rep.point = a;
    rep.detail = "hyperpoint increment battery on (" + a.to_string() + ", " +
                 b.to_string() + ")";
    bool any_fail = false, any_undecided = false;
    for (const auto& hp : battery) {
        std::optional<LCNumber> fx;
        try {
            Bindings<LeviCivitaField> bind;
            bind.emplace("x", hp.x);
            fx = evaluate(*f, field, bind);
        } catch (const Error& e) {
            ProbeRecord pr;
            pr.description = hp.name;
            pr.error = e.name();
            rep.probes.push_back(std::move(pr));
            any_undecided = true;
            continue;
        }
        for (const auto& [pname, dx] : hp.perturbations) {
            ProbeRecord pr;
            pr.description = hp.name + " with dx=" + pname;
            try {
                Bindings<LeviCivitaField> bind;
                bind.emplace("x", field.add(hp.x, dx));
                const LCNumber fy = evaluate(*f, field, bind);
                const LCNumber inc = field.sub(fy, *fx);
                pr.increment_class = field.classify(inc);
                pr.increment_small = pr.increment_class->is_small();
                if (pr.increment_class->is_finite()) pr.increment_st = field.st(inc);
                if (!pr.increment_class->is_small()) any_fail = true;
            } catch (const Error& e) {
                pr.error = e.name();
                any_undecided = true;
            }
            rep.probes.push_back(std::move(pr));
        }
    }
    rep.verdict = any_fail ? ContinuityVerdict::Fail
                : any_undecided ? ContinuityVerdict::Undecided
                                : ContinuityVerdict::PassToOrder;
    return rep;
}

// -------------------------------------------------------- hyperfinite ops

HyperSeq hyperfinite_sum(const ExprPtr& term_k, const HyperNat& N,
                         const SequenceField& field) {
    RationalField ground(field.config());
    Bindings<RationalField> b;
    for (long k = 1; k <= 64; ++k) {
        b.insert_or_assign("k", Rational(k));
        try {
            evaluate(*term_k, ground, b);
        } catch (const Error& e) {
            throw DomainError("series term undefined at k=" + std::to_string(k) +
                              ": " + e.what());
        }
    }
    return field.partial_sum(term_k, N);
}

HyperSeq hyperfinite_product(const ExprPtr& term_k, const HyperNat& N,
                             const SequenceField& field) {
    RationalField ground(field.config());
    Bindings<RationalField> b;
    for (long k = 1; k <= 64; ++k) {
        b.insert_or_assign("k", Rational(k));
        try {
            evaluate(*term_k, ground, b);
        } catch (const Error& e) {
            throw DomainError("factor undefined at k=" + std::to_string(k) + ": " +
                              e.what());
        }
    }
    return field.partial_product(term_k, N);
}

EulerExpResult euler_exp(const Rational& k, const Rational& z, const HyperNat& N,
                         const SequenceField& field) {
    const Rational kz = k * z;
    const ExprPtr base = mk_bin(BinOp::Add, Expr::lit(Rational(1)),
                                mk_bin(BinOp::Div, Expr::lit(kz), N.expr()));
    const ExprPtr rule = mk_bin(BinOp::Pow, base, N.expr());
    HyperSeq seq = field.from_expr(rule);
    StEstimate st = field.st_detail(seq);
    return {std::move(seq), std::move(st)};
}

std::vector<BinomialTermResult> euler_binomial_expand(const Rational& k,
                                                      const Rational& z,
                                                      const HyperNat& N, int m,
                                                      const SequenceField& field) {
    if (m < 1 || m > 64) throw DomainError("term count must be in 1..64");
    const Rational kz = k * z;
    std::vector<BinomialTermResult> out;
    Rational factorial(1);
    for (int r = 0; r < m; ++r) {
        if (r > 0) factorial *= Rational(r);
        // C(N,r) (kz/N)^r = prod_{i<r}(N-i) * (kz)^r / (r! * N^r)
        ExprPtr numer = Expr::lit(kz.pow_int(r) / factorial);
        for (int i = 0; i < r; ++i)
            numer = mk_bin(BinOp::Mul, numer,
                           mk_bin(BinOp::Sub, N.expr(), Expr::lit(Rational(i))));
        const ExprPtr rule =
            r == 0 ? numer
                   : mk_bin(BinOp::Div, numer,
                            mk_bin(BinOp::Pow, N.expr(), Expr::lit(Rational(r))));
        HyperSeq seq = field.from_expr(rule);
        StEstimate st = field.st_detail(seq);
        out.push_back(BinomialTermResult{r, std::move(seq), std::move(st)});
    }
    return out;
}

// ---------------------------------------------------------- IVT subdivision

namespace {

Rational eval_at(const ExprPtr& f, const Rational& x, const RationalField& ground) {
    Bindings<RationalField> b;
    b.emplace("x", x);
    return evaluate(*f, ground, b);
}

} // namespace

IvtResult ivt_root(const ExprPtr& f, const Rational& a, const Rational& b,
                   int digits, const FieldConfig& cfg) {
    if (!(a < b)) throw DomainError("empty interval");
    if (digits < 1 || digits > 1000) throw DomainError("digit count must be in 1..1000");
    RationalField ground(cfg);

    // continuity sampling: evaluability plus increment smallness at interior points
    {
        LeviCivitaField lc(cfg);
        for (int i = 1; i <= 3; ++i) {
            const Rational c = a + (b - a) * Rational(i, 4);
            ContinuityReport r;
            try {
                r = continuity_at(f, c, lc);
            } catch (const Error& e) {
                throw NonNumericValue("continuity sampling failed at x=" +
                                      c.to_string() + ": " + e.what());
            }
            if (r.verdict == ContinuityVerdict::Fail)
                throw NonNumericValue("continuity sampling failed at x=" +
                                      c.to_string() + " (appreciable increment)");
        }
    }

    const auto value = [&](const Rational& x) {
        try {
            return eval_at(f, x, ground);
        } catch (const Error& e) {
            throw NonNumericValue("f not evaluable at x=" + x.to_string() + ": " +
                                  e.what());
        }
    };

    Rational lo = a, hi = b;
    Rational flo = value(lo), fhi = value(hi);
    IvtResult res;

    const auto exact_hit = [&](const Rational& x, int rounds) {
        res.decimal = x.to_decimal(digits, /*truncate=*/true);
        res.exact_hit = true;
        res.lo = res.hi = x;
        res.rounds = rounds;
        return res;
    };

    if (flo.is_zero()) return exact_hit(lo, 0);
    if (fhi.is_zero()) return exact_hit(hi, 0);
    if (flo.sign() * fhi.sign() > 0)
        throw NoSignChange("f(" + a.to_string() + ") and f(" + b.to_string() +
                           ") have the same sign");

    for (int round = 1; round <= digits; ++round) {
        const Rational step = (hi - lo) / Rational(10);
        Rational prev_x = lo;
        Rational prev_f = flo;
        bool found = false;
        for (int i = 1; i <= 10; ++i) {
            const Rational x = (i == 10) ? hi : lo + step * Rational(i);
            const Rational fx = (i == 10) ? fhi : value(x);
            if (fx.is_zero()) return exact_hit(x, round);
            if (prev_f.sign() * fx.sign() < 0) {
                lo = prev_x;
                flo = prev_f;
                hi = x;
                fhi = fx;
                found = true;
                break; // leftmost sign change wins
            }
            prev_x = x;
            prev_f = fx;
        }
        if (!found)
            throw NoSignChange("no sign-changing subinterval in round " +
                               std::to_string(round));
    }

    res.decimal = lo.to_decimal(digits, /*truncate=*/true);
    res.exact_hit = false;
    res.lo = lo;
    res.hi = hi;
    res.rounds = digits;
    return res;
}

// ------------------------------------------------------- sum theorem probe

OffsetSpec parse_offset(std::string_view text, const HyperNat& N) {
    ParseOptions opts;
    opts.variables = {"n", "N"};
    opts.general_exponents = true;
    ExprPtr raw = parse_expr(text, opts);
    OffsetSpec spec;
    spec.description = std::string(text);
    spec.offset_of_n = substitute(raw, "N", N.expr());
    return spec;
}

namespace {

ExprPtr polynomial_to_expr(const Polynomial& p, const ExprPtr& x) {
    ExprPtr acc = Expr::lit(Rational(0));
    for (int i = p.degree(); i >= 0; --i)
        acc = mk_bin(BinOp::Add, mk_bin(BinOp::Mul, acc, x), Expr::lit(p.coeff(i)));
    return acc;
}

ExprPtr ratfunc_to_expr(const RatFuncElem& rf, const ExprPtr& x) {
    if (rf.den() == Polynomial::constant(Rational(1)))
        return polynomial_to_expr(rf.num(), x);
    return mk_bin(BinOp::Div, polynomial_to_expr(rf.num(), x),
                  polynomial_to_expr(rf.den(), x));
}

} // namespace

SumTheoremReport sum_theorem_probe(const ExprPtr& u_k, const Rational& x0,
                                   const OffsetSpec& offset, const HyperNat& N,
                                   const SequenceField& field) {
    SumTheoremReport rep;
    rep.series_term = to_string(*u_k);
    rep.probe_point = x0.to_string() + " + (" + offset.description + ")";

    // trivial series
    if (auto zk = lower_to_ratfunc(*u_k, "k"); zk && zk->is_zero()) {
        rep.verdict = SumTheoremVerdict::UniformEvidence;
        rep.remainder_class = Classification{MagnitudeTag::Zero, Sign::Zero};
        rep.remainder_st = Rational(0);
        rep.detail = "series terms vanish identically";
        return rep;
    }

    auto geo = match_geometric_in_k(*u_k);
    if (!geo)
        throw Undecided("series term '" + to_string(*u_k) +
                        "' does not match the geometric family coeff(x)*base(x)^k; "
                        "no closed-form tail is available");
    if (contains_var(*geo->coeff, "k"))
        throw Undecided("series coefficient depends on k; no closed-form tail");

    // tail after the N-th term at point x: q(x) * base(x)^(N+1) with
    // q = coeff / (1 - base), reduced exactly in the rational-function field
    RatFuncField rf;
    auto coeff_rf = lower_to_ratfunc(*geo->coeff, "x");
    auto base_rf = lower_to_ratfunc(*geo->base, "x");
    if (!coeff_rf || !base_rf)
        throw Undecided("series coefficient/base do not lower to rational "
                        "functions of x; no closed-form tail");
    const RatFuncElem one_minus_base = rf.sub(rf.one(), *base_rf);
    if (one_minus_base.is_zero())
        throw DomainError("geometric base is identically 1; the series diverges");
    const RatFuncElem q = rf.div(*coeff_rf, one_minus_base);

    const ExprPtr xvar = Expr::var("x");
    const ExprPtr tail_of_x =
        mk_bin(BinOp::Mul, ratfunc_to_expr(q, xvar),
               mk_bin(BinOp::Pow, geo->base,
                      mk_bin(BinOp::Add, Expr::var("N"), Expr::lit(Rational(1)))));

    const auto tail_at = [&](const ExprPtr& point_of_n,
                             const std::string& desc) -> std::pair<HyperSeq, ProbeRecord> {
        ExprPtr e = substitute(tail_of_x, "x", point_of_n);
        e = substitute(e, "N", N.expr());
        ProbeRecord pr;
        pr.description = desc;
        return {field.from_expr(e), pr};
    };

    // convergence of the series at the hyperpoint: |base(x*)| must stay
    // below 1 on a cofinite set, certified through the exact route
    const ExprPtr xstar = mk_bin(BinOp::Add, Expr::lit(x0), offset.offset_of_n);
    {
        const ExprPtr base_at_star = substitute(geo->base, "x", xstar);
        const Asymptotics above = analyze_expr(
            *mk_bin(BinOp::Sub, Expr::lit(Rational(1)), base_at_star), field.config());
        const Asymptotics below = analyze_expr(
            *mk_bin(BinOp::Add, Expr::lit(Rational(1)), base_at_star), field.config());
        const bool ok = above.sign_known && above.eventual_sign == Sign::Positive &&
                        below.sign_known && below.eventual_sign == Sign::Positive;
        if (!ok)
            throw DomainError("series is not certified convergent at the "
                              "hyperpoint " + rep.probe_point);
    }

    // primary probe: the hyperpoint; baseline: the standard point itself
    auto [primary, primary_pr] = tail_at(xstar, "x* = " + rep.probe_point);
    std::optional<std::pair<HyperSeq, ProbeRecord>> baseline;
    const Rational base_at_x0 = [&] {
        RationalField ground(field.config());
        Bindings<RationalField> b;
        b.emplace("x", x0);
        return evaluate(*geo->base, ground, b);
    }();
    if (base_at_x0.abs() < Rational(1))
        baseline = tail_at(Expr::lit(x0), "x0 = " + x0.to_string());

    bool any_fail = false, any_undecided = false;
    const auto judge = [&](HyperSeq& seq, ProbeRecord& pr, bool is_primary) {
        try {
            const Classification c = field.classify(seq);
            pr.increment_class = c;
            if (!c.is_small()) any_fail = true;
            if (is_primary) {
                rep.remainder_class = c;
                if (c.tag != MagnitudeTag::Infinite) {
                    const StEstimate st = field.st_detail(seq);
                    rep.remainder_st = st.value;
                }
            }
        } catch (const Undecided& e) {
            pr.error = e.name();
            any_undecided = true;
        }
        rep.probes.push_back(pr);
    };
    judge(primary, primary_pr, true);
    if (baseline) judge(baseline->first, baseline->second, false);

    rep.verdict = any_fail ? SumTheoremVerdict::NonUniformWitness
                : any_undecided ? SumTheoremVerdict::Undecided
                                : SumTheoremVerdict::UniformEvidence;
    if (rep.verdict == SumTheoremVerdict::NonUniformWitness)
        rep.detail = "appreciable remainder under an infinitesimal displacement";
    return rep;
}

// ------------------------------------------------------------- transfer

Rational residual_magnitude(const LeviCivitaField& f, const LCNumber& v) {
    return f.max_abs_coeff(v);
}

Rational residual_magnitude(const RatFuncField&, const RatFuncElem& v) {
    if (v.is_zero()) return Rational(0);
    Rational m(0);
    for (const auto& c : v.num().coeffs()) m = max(m, c.abs());
    return m;
}

Rational residual_magnitude(const SequenceField& f, const HyperSeq& v) {
    Rational m(0);
    for (std::int64_t n = 1; n <= 16; ++n) m = max(m, v.at(n).abs());
    for (std::int64_t n = 32; n <= std::min<std::int64_t>(f.config().sequence_cutoff, 4096);
         n *= 2) {
        m = max(m, v.at(n).abs());
        m = max(m, v.at(n + 1).abs());
    }
    return m;
}

Rational residual_magnitude(const RationalField&, const Rational& v) {
    return v.abs();
}

} // namespace btrack::calculus
