#include "btrack/sequences.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

#include "btrack/errors.hpp"
#include "btrack/seq_rule.hpp"

namespace btrack {

const char* to_string(CompareVerdict v) {
    switch (v) {
        case CompareVerdict::Less: return "Less";
        case CompareVerdict::Greater: return "Greater";
        case CompareVerdict::EventuallyEqual: return "EventuallyEqual";
        case CompareVerdict::Undecided: return "Undecided";
    }
    return "?";
}

// ----------------------------------------------------------- SeqRule base

Rational SeqRule::at(std::int64_t n) const {
    if (n < 1) throw DomainError("sequence index must be >= 1");
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
    }
    Rational v;
    bool patched = false;
    try {
        v = term(n);
    } catch (const DivisionByZero&) {
        v = Rational(0);
        patched = true;
    } catch (const DomainError&) {
        v = Rational(0);
        patched = true;
    }
    {
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(n, v);
        if (patched) patched_.insert(n);
    }
    return v;
}

std::vector<std::int64_t> SeqRule::exceptions() const {
    std::set<std::int64_t> all;
    {
        std::lock_guard<std::mutex> lock(mu_);
        all.insert(patched_.begin(), patched_.end());
    }
    collect_child_exceptions(all);
    return {all.begin(), all.end()};
}

Asymptotics SeqRule::analyze(const FieldConfig& cfg) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (analysis_ && same_config(analysis_->first, cfg)) return analysis_->second;
    }
    Asymptotics a = analyze_impl(cfg);
    {
        std::lock_guard<std::mutex> lock(mu_);
        analysis_ = {cfg, a};
    }
    return a;
}

namespace {

RationalField ground_field(const FieldConfig& cfg) {
    return RationalField(cfg);
}

// ------------------------------------------------------------ rule kinds

class ExprRule final : public SeqRule {
public:
    ExprRule(ExprPtr e, FieldConfig cfg) : expr_(std::move(e)), cfg_(cfg) {}

    Rational term(std::int64_t n) const override {
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        b.emplace("n", Rational(static_cast<long>(n)));
        return evaluate(*expr_, f, b);
    }
    std::string describe() const override { return btrack::to_string(*expr_); }
    Asymptotics analyze_impl(const FieldConfig& cfg) const override {
        return analyze_expr(*expr_, cfg, "n");
    }
    const ExprPtr& expr() const { return expr_; }

private:
    ExprPtr expr_;
    FieldConfig cfg_;
};

class AlternatingRule final : public SeqRule {
public:
    AlternatingRule(ExprPtr e, FieldConfig cfg) : expr_(std::move(e)), cfg_(cfg) {}

    Rational term(std::int64_t n) const override {
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        b.emplace("n", Rational(static_cast<long>(n)));
        const Rational v = evaluate(*expr_, f, b);
        return (n % 2 == 0) ? v : -v;
    }
    std::string describe() const override {
        if (auto* l = std::get_if<Expr::Lit>(&expr_->node()); l && l->value == Rational(1))
            return "(-1)^n";
        return "(-1)^n*(" + btrack::to_string(*expr_) + ")";
    }
    Asymptotics analyze_impl(const FieldConfig& cfg) const override {
        Asymptotics base = analyze_expr(*expr_, cfg, "n");
        Asymptotics r;
        r.pattern = "alternating(" + base.pattern + ")";
        r.domain_trouble = base.domain_trouble;
        if (base.identically_zero) {
            r.identically_zero = true;
            r.mag = AsymptoticMag::Zero;
            return r;
        }
        r.mag = base.mag; // |(-1)^n e(n)| = |e(n)|
        if (base.mag == AsymptoticMag::Zero) {
            r.exact_limit = Rational(0);
            r.convergent_known = true;
        }
        r.nonzero_eventually = base.nonzero_eventually;
        r.nonzero_known = base.nonzero_known;
        // the sign alternates: decidedly unknown under cofinite agreement
        r.sign_known = false;
        return r;
    }

private:
    ExprPtr expr_;
    FieldConfig cfg_;
};

class CombineRule final : public SeqRule {
public:
    CombineRule(BinOp op, SeqRulePtr a, SeqRulePtr b, FieldConfig cfg)
        : op_(op), a_(std::move(a)), b_(std::move(b)), cfg_(cfg) {}

    Rational term(std::int64_t n) const override {
        const Rational x = a_->at(n);
        const Rational y = b_->at(n);
        switch (op_) {
            case BinOp::Add: return x + y;
            case BinOp::Sub: return x - y;
            case BinOp::Mul: return x * y;
            case BinOp::Div: return x / y; // zero divisor patches this index
            default: throw DomainError("unsupported termwise operator");
        }
    }
    std::string describe() const override {
        const char* op = op_ == BinOp::Add ? " + " : op_ == BinOp::Sub ? " - "
                         : op_ == BinOp::Mul ? " * " : " / ";
        return "(" + a_->describe() + ")" + op + "(" + b_->describe() + ")";
    }
    Asymptotics analyze_impl(const FieldConfig& cfg) const override {
        return combine(op_, a_->analyze(cfg), b_->analyze(cfg), cfg);
    }
    void collect_child_exceptions(std::set<std::int64_t>& out) const override {
        for (auto e : a_->exceptions()) out.insert(e);
        for (auto e : b_->exceptions()) out.insert(e);
    }

private:
    BinOp op_;
    SeqRulePtr a_, b_;
    FieldConfig cfg_;
};

class ApplyRule final : public SeqRule {
public:
    ApplyRule(ExprPtr f, SeqRulePtr child, FieldConfig cfg)
        : f_(std::move(f)), child_(std::move(child)), cfg_(cfg) {}

    Rational term(std::int64_t n) const override {
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        b.emplace("x", child_->at(n));
        return evaluate(*f_, f, b);
    }
    std::string describe() const override {
        return btrack::to_string(*f_) + " applied termwise to " + child_->describe();
    }
    Asymptotics analyze_impl(const FieldConfig& cfg) const override {
        std::map<std::string, Asymptotics> env;
        env.emplace("x", child_->analyze(cfg));
        return analyze_expr_env(*f_, cfg, env);
    }
    void collect_child_exceptions(std::set<std::int64_t>& out) const override {
        for (auto e : child_->exceptions()) out.insert(e);
    }

private:
    ExprPtr f_;
    SeqRulePtr child_;
    FieldConfig cfg_;
};

class PatchedRule final : public SeqRule {
public:
    PatchedRule(SeqRulePtr child, std::map<std::int64_t, Rational> overrides)
        : child_(std::move(child)), overrides_(std::move(overrides)) {}

    Rational term(std::int64_t n) const override {
        auto it = overrides_.find(n);
        if (it != overrides_.end()) return it->second;
        return child_->at(n);
    }
    std::string describe() const override {
        return child_->describe() + " (with " + std::to_string(overrides_.size()) +
               " finite overrides)";
    }
    Asymptotics analyze_impl(const FieldConfig& cfg) const override {
        return child_->analyze(cfg); // finite changes never matter
    }
    void collect_child_exceptions(std::set<std::int64_t>& out) const override {
        for (auto e : child_->exceptions()) out.insert(e);
    }

private:
    SeqRulePtr child_;
    std::map<std::int64_t, Rational> overrides_;
};

// Running partial sums / products with a cursor; restart points are only
// ever previously stored checkpoints, which keeps evaluation deterministic
// even after the fixed-point switch.
class FoldRule : public SeqRule {
public:
    FoldRule(bool product, ExprPtr term_k, ExprPtr n_expr, FieldConfig cfg)
        : product_(product), term_k_(std::move(term_k)), n_expr_(std::move(n_expr)),
          cfg_(cfg), acc_(product ? 1 : 0) {}

    static constexpr std::int64_t kExactCap = 4096;
    static constexpr std::int64_t kIndexCap = 1LL << 26;

    Rational term(std::int64_t n) const override {
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        b.emplace("n", Rational(static_cast<long>(n)));
        const Rational m_val = evaluate(*n_expr_, f, b);
        if (!m_val.is_integer() || m_val.sign() <= 0)
            throw ConstructionError("hyperfinite bound must be a positive integer, got " +
                                    m_val.to_string() + " at n=" + std::to_string(n));
        if (m_val > Rational(static_cast<long>(kIndexCap)))
            throw Undecided("hyperfinite bound " + m_val.to_string() +
                            " exceeds the evaluation budget");
        return fold_to(m_val.numerator().get_si());
    }

    std::string describe() const override {
        return std::string(product_ ? "prod" : "sum") + "[k=1.." +
               btrack::to_string(*n_expr_) + "](" + btrack::to_string(*term_k_) + ")";
    }

    Asymptotics analyze_impl(const FieldConfig& cfg) const override {
        const Asymptotics bound = analyze_expr(*n_expr_, cfg, "n");
        if (bound.mag != AsymptoticMag::Infinite || bound.eventual_sign != Sign::Positive)
            return Asymptotics::unknown("fold with non-growing bound");
        return product_ ? partial_product_asymptotics(*term_k_, cfg)
                        : partial_sum_asymptotics(*term_k_, cfg);
    }

    const ExprPtr& series_term() const { return term_k_; }
    bool is_product() const { return product_; }

    std::int64_t bound_at(std::int64_t n) const {
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        b.emplace("n", Rational(static_cast<long>(n)));
        const Rational m = evaluate(*n_expr_, f, b);
        if (!m.is_integer() || m.sign() <= 0 || !m.numerator().fits_slong_p())
            throw ConstructionError("bad hyperfinite bound at n=" + std::to_string(n));
        return m.numerator().get_si();
    }

private:
    Rational fold_to(std::int64_t m) const {
        std::lock_guard<std::mutex> lock(fold_mu_);
        if (m < next_k_ - 1) {
            // rewind to the best stored checkpoint at or below m
            auto it = checkpoints_.upper_bound(m);
            if (it == checkpoints_.begin()) {
                next_k_ = 1;
                acc_ = Rational(product_ ? 1 : 0);
            } else {
                --it;
                next_k_ = it->first + 1;
                acc_ = it->second;
            }
        }
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        const int guard_digits = cfg_.working_precision + 15;
        for (; next_k_ <= m; ++next_k_) {
            b.insert_or_assign("k", Rational(static_cast<long>(next_k_)));
            Rational t = evaluate(*term_k_, f, b);
            if (next_k_ == kExactCap + 1) acc_ = acc_.round_to_digits(guard_digits);
            if (next_k_ > kExactCap) t = t.round_to_digits(guard_digits);
            if (product_) {
                acc_ *= t;
                if (next_k_ > kExactCap) acc_ = acc_.round_to_digits(guard_digits);
            } else {
                acc_ += t;
            }
        }
        checkpoints_[m] = acc_;
        return acc_;
    }

    bool product_;
    ExprPtr term_k_, n_expr_;
    FieldConfig cfg_;
    mutable std::mutex fold_mu_;
    mutable std::int64_t next_k_ = 1;
    mutable Rational acc_;
    mutable std::map<std::int64_t, Rational> checkpoints_;
};

// (-1)^n factors, possibly shifted by an integer, possibly inside a product
struct AlternatingSplit {
    ExprPtr rest;  // the rule with the alternating factor removed
    bool flip;     // odd shift: (-1)^(n+1) = -(-1)^n
};

std::optional<AlternatingSplit> split_alternating(const ExprPtr& e) {
    if (auto* b = std::get_if<Expr::Bin>(&e->node())) {
        if (b->op == BinOp::Pow) {
            auto* base = std::get_if<Expr::Lit>(&b->lhs->node());
            if (!base || !(base->value == Rational(-1))) return std::nullopt;
            const Expr& ex = *b->rhs;
            if (auto* v = std::get_if<Expr::Var>(&ex.node()); v && v->name == "n")
                return AlternatingSplit{Expr::lit(Rational(1)), false};
            if (auto* eb = std::get_if<Expr::Bin>(&ex.node());
                eb && (eb->op == BinOp::Add || eb->op == BinOp::Sub)) {
                auto* v = std::get_if<Expr::Var>(&eb->lhs->node());
                auto* c = std::get_if<Expr::Lit>(&eb->rhs->node());
                if (v && v->name == "n" && c && c->value.is_integer())
                    return AlternatingSplit{Expr::lit(Rational(1)),
                                            c->value.numerator() % 2 != 0};
            }
            return std::nullopt;
        }
        if (b->op == BinOp::Mul) {
            if (auto s = split_alternating(b->lhs))
                return AlternatingSplit{mk_bin(BinOp::Mul, s->rest, b->rhs), s->flip};
            if (auto s = split_alternating(b->rhs))
                return AlternatingSplit{mk_bin(BinOp::Mul, b->lhs, s->rest), s->flip};
            return std::nullopt;
        }
        if (b->op == BinOp::Div) {
            if (auto s = split_alternating(b->lhs))
                return AlternatingSplit{mk_bin(BinOp::Div, s->rest, b->rhs), s->flip};
            return std::nullopt;
        }
    }
    if (auto* n = std::get_if<Expr::Neg>(&e->node())) {
        if (auto s = split_alternating(n->arg))
            return AlternatingSplit{s->rest, !s->flip};
    }
    return std::nullopt;
}

const ExprRule* as_expr_rule(const HyperSeq& s) {
    return dynamic_cast<const ExprRule*>(s.rule().get());
}

} // namespace

// ---------------------------------------------------------------- HyperSeq

HyperSeq::HyperSeq(SeqRulePtr rule) : rule_(std::move(rule)) {}
Rational HyperSeq::at(std::int64_t n) const { return rule_->at(n); }
std::vector<std::int64_t> HyperSeq::exceptions() const { return rule_->exceptions(); }
std::string HyperSeq::describe() const { return rule_->describe(); }

std::int64_t HyperNat::value_at(std::int64_t n) const {
    const Rational v = seq_.at(n);
    if (!v.is_integer() || v.sign() <= 0)
        throw ConstructionError("hyperinteger rule produced " + v.to_string() +
                                " at n=" + std::to_string(n));
    if (!v.numerator().fits_slong_p())
        throw Undecided("hyperinteger value exceeds the evaluation budget");
    return v.numerator().get_si();
}

// ------------------------------------------------------------ field proper

HyperSeq SequenceField::from_rational(const Rational& q) const {
    return HyperSeq(std::make_shared<ExprRule>(Expr::lit(q), cfg_));
}

HyperSeq SequenceField::from_expr(const ExprPtr& rule) const {
    if (auto s = split_alternating(rule)) {
        ExprPtr body = s->flip ? mk_neg(s->rest) : s->rest;
        return HyperSeq(std::make_shared<AlternatingRule>(std::move(body), cfg_));
    }
    // fail fast on rules that are undefined everywhere or hide an eventual
    // domain violation; isolated holes are fine and get patched lazily
    const Asymptotics a = analyze_expr(*rule, cfg_, "n");
    if (a.domain_trouble) {
        // sample a prefix: a rule that never evaluates is a construction error
        RationalField f = ground_field(cfg_);
        Bindings<RationalField> b;
        int ok = 0;
        for (std::int64_t n = 1; n <= 16; ++n) {
            b.insert_or_assign("n", Rational(static_cast<long>(n)));
            try {
                evaluate(*rule, f, b);
                ++ok;
            } catch (const Error&) {
            }
        }
        if (ok == 0)
            throw ConstructionError("rule '" + btrack::to_string(*rule) +
                                    "' failed to evaluate at every sampled index");
    }
    return HyperSeq(std::make_shared<ExprRule>(rule, cfg_));
}

HyperSeq SequenceField::parse_rule(std::string_view text) const {
    ParseOptions opts;
    opts.variables = {"n"};
    opts.general_exponents = true;
    return from_expr(parse_expr(text, opts));
}

HyperSeq SequenceField::arith(BinOp op, const Value& a, const Value& b) const {
    if (op == BinOp::Div) {
        const Asymptotics db = analyze(b);
        const bool certified = db.identically_zero
            ? false
            : (db.nonzero_known && db.nonzero_eventually) ||
              db.mag == AsymptoticMag::Infinite;
        if (!certified)
            throw NotEventuallyNonzero(
                "divisor '" + b.describe() +
                "' is not certified nonzero on a cofinite index set");
    }
    const auto* ea = as_expr_rule(a);
    const auto* eb = as_expr_rule(b);
    if (ea && eb)
        return HyperSeq(std::make_shared<ExprRule>(mk_bin(op, ea->expr(), eb->expr()), cfg_));
    return HyperSeq(std::make_shared<CombineRule>(op, a.rule(), b.rule(), cfg_));
}

HyperSeq SequenceField::neg(const Value& a) const {
    if (const auto* ea = as_expr_rule(a))
        return HyperSeq(std::make_shared<ExprRule>(mk_neg(ea->expr()), cfg_));
    return sub(zero(), a);
}

HyperSeq SequenceField::pow_int(const Value& a, long e) const {
    return apply(mk_bin(BinOp::Pow, Expr::var("x"), Expr::lit(Rational(e))), a);
}

HyperSeq SequenceField::root(const Value& a, unsigned k) const {
    return apply(mk_bin(BinOp::Pow, Expr::var("x"),
                        Expr::lit(Rational(1, static_cast<long>(k)))),
                 a);
}

HyperSeq SequenceField::transcendental(FuncTag f, const Value& x) const {
    return apply(Expr::call(f, Expr::var("x")), x);
}

HyperSeq SequenceField::abs(const Value& a) const {
    return apply(Expr::call(FuncTag::Abs, Expr::var("x")), a);
}

HyperSeq SequenceField::apply(const ExprPtr& f_of_x, const Value& a) const {
    HyperSeq result = [&] {
        if (const auto* ea = as_expr_rule(a))
            return from_expr(substitute(f_of_x, "x", ea->expr()));
        return HyperSeq(std::make_shared<ApplyRule>(f_of_x, a.rule(), cfg_));
    }();
    const Asymptotics r = analyze(result);
    if (r.domain_trouble)
        throw DomainError("'" + btrack::to_string(*f_of_x) +
                          "' is not certified evaluable on a cofinite set of terms of " +
                          a.describe());
    return result;
}

HyperSeq SequenceField::with_finite_overrides(
    const Value& a, std::map<std::int64_t, Rational> overrides) const {
    return HyperSeq(std::make_shared<PatchedRule>(a.rule(), std::move(overrides)));
}

Asymptotics SequenceField::analyze(const Value& a) const {
    return a.rule()->analyze(cfg_);
}

Classification SequenceField::classify(const Value& a) const {
    const Asymptotics r = analyze(a);
    if (r.identically_zero) return {MagnitudeTag::Zero, Sign::Zero};
    switch (r.mag) {
        case AsymptoticMag::Zero:
            if (r.nonzero_known && r.nonzero_eventually && r.sign_known &&
                r.eventual_sign != Sign::Zero)
                return {MagnitudeTag::Infinitesimal, r.eventual_sign};
            throw Undecided(
                "sequence tends to 0 but its sign/vanishing pattern is not "
                "certified on a cofinite set; a free ultrafilter would have to decide");
        case AsymptoticMag::Finite:
            if (r.sign_known && r.eventual_sign != Sign::Zero)
                return {MagnitudeTag::Appreciable, r.eventual_sign};
            throw Undecided("appreciable magnitude with undecidable sign (pattern: " +
                            r.pattern + ")");
        case AsymptoticMag::Infinite:
            if (r.sign_known && r.eventual_sign != Sign::Zero)
                return {MagnitudeTag::Infinite, r.eventual_sign};
            throw Undecided("unbounded magnitude with undecidable sign (pattern: " +
                            r.pattern + ")");
        case AsymptoticMag::Unknown:
            break;
    }
    throw Undecided("no dominance pattern matched '" + a.describe() +
                    "' within cutoff " + std::to_string(cfg_.sequence_cutoff));
}

Rational SequenceField::st(const Value& a) const {
    return st_detail(a).value;
}

StEstimate SequenceField::st_detail(const Value& a) const {
    const Asymptotics r = analyze(a);
    if (r.mag == AsymptoticMag::Infinite)
        throw NotFinite("sequence '" + a.describe() + "' grows beyond every rational");
    if (r.exact_limit) {
        StEstimate e;
        e.value = *r.exact_limit;
        e.exact = true;
        e.method = "exact limit (" + r.pattern + ")";
        return e;
    }
    // numeric ladder; hyperfinite sums get their matched tail correction,
    // applied at the hyperfinite bound N(n) rather than the ladder index
    std::function<std::optional<Rational>(std::int64_t)> correction;
    if (const auto* fold = dynamic_cast<const FoldRule*>(a.rule().get());
        fold && !fold->is_product()) {
        const SeqRulePtr keep_alive = a.rule();
        if (auto mono = match_monomial_in_k(*fold->series_term())) {
            if (mono->power < Rational(-1)) {
                const Rational c = mono->coeff;
                const Rational p = mono->power;
                const int prec = cfg_.working_precision;
                correction = [c, p, prec, keep_alive,
                              fold](std::int64_t n) -> std::optional<Rational> {
                    // integral tail: c * N^(p+1) / (-p-1)
                    const Rational N(static_cast<long>(fold->bound_at(n)));
                    const Rational ex = p + Rational(1);
                    Rational npow;
                    if (ex.is_integer()) {
                        npow = N.pow_int(ex.numerator().get_si());
                    } else {
                        npow = kth_root_value(N, static_cast<unsigned>(
                                                     ex.denominator().get_ui()),
                                              prec)
                                   .pow_int(ex.numerator().get_si());
                    }
                    return c * npow / (-ex);
                };
            }
        } else if (auto geo = match_geometric_in_k(*fold->series_term())) {
            auto* cl = std::get_if<Expr::Lit>(&geo->coeff->node());
            if (cl && geo->literal_base && geo->literal_base->abs() < Rational(1)) {
                const Rational c = cl->value;
                const Rational ratio = *geo->literal_base;
                correction = [c, ratio, keep_alive,
                              fold](std::int64_t n) -> std::optional<Rational> {
                    // geometric tail: c * r^(N+1) / (1-r)
                    return c * ratio.pow_int(fold->bound_at(n) + 1) /
                           (Rational(1) - ratio);
                };
            }
        }
    }
    return estimate_limit(a, cfg_, correction);
}

bool SequenceField::infinitely_close(const Value& a, const Value& b) const {
    const Asymptotics d = analyze(sub(a, b));
    if (d.identically_zero || d.mag == AsymptoticMag::Zero) return true;
    if (d.mag == AsymptoticMag::Finite || d.mag == AsymptoticMag::Infinite) return false;
    throw Undecided("difference of '" + a.describe() + "' and '" + b.describe() +
                    "' has no certified asymptotic class");
}

CompareReport SequenceField::compare(const Value& a, const Value& b) const {
    const HyperSeq d = sub(a, b);
    const Asymptotics da = analyze(d);

    CompareReport rep;
    rep.dominance_pattern = da.pattern;
    for (auto e : d.exceptions()) rep.exception_set.push_back(e);

    // probe battery: a dense prefix plus a geometric ladder with odd guards
    std::vector<std::int64_t> probes;
    for (std::int64_t n = 1; n <= 32; ++n) probes.push_back(n);
    for (std::int64_t n = 64; n <= cfg_.sequence_cutoff && n <= (1 << 16); n *= 2) {
        probes.push_back(n);
        probes.push_back(n + 1);
    }
    rep.probe_indices = probes;

    if (da.identically_zero) {
        rep.verdict = CompareVerdict::EventuallyEqual;
        return rep;
    }

    // detected n0: the first probe from which the sampled sign is constant;
    // a verdict needs both the constant sampled tail and the certificate
    std::vector<int> signs;
    signs.reserve(probes.size());
    for (const auto n : probes) signs.push_back(d.at(n).sign());
    const int final_sign = signs.back();
    std::size_t tail_start = signs.size();
    while (tail_start > 0 && signs[tail_start - 1] == final_sign) --tail_start;

    const bool nonzero_certified = da.nonzero_known && da.nonzero_eventually;
    if (da.sign_known && da.eventual_sign != Sign::Zero && nonzero_certified &&
        final_sign == static_cast<int>(da.eventual_sign) &&
        tail_start + 4 <= signs.size()) {
        rep.verdict = da.eventual_sign == Sign::Positive ? CompareVerdict::Greater
                                                         : CompareVerdict::Less;
        return rep;
    }
    rep.verdict = CompareVerdict::Undecided;
    return rep;
}

HyperNat SequenceField::make_hypernat(const ExprPtr& rule) const {
    const Asymptotics a = analyze_expr(*rule, cfg_, "n");
    if (a.mag != AsymptoticMag::Infinite || a.eventual_sign != Sign::Positive ||
        !a.sign_known)
        throw ConstructionError("hyperinteger rule '" + btrack::to_string(*rule) +
                                "' is not certified unbounded and positive");
    HyperSeq seq = from_expr(rule);
    // sample: positive integers, nondecreasing, up to the cutoff ladder
    Rational prev(0);
    std::vector<std::int64_t> samples;
    for (std::int64_t n = 1; n <= 64; ++n) samples.push_back(n);
    for (std::int64_t n = 128; n <= cfg_.sequence_cutoff; n *= 2) samples.push_back(n);
    for (std::int64_t n : samples) {
        const Rational v = seq.at(n);
        if (!v.is_integer() || v.sign() <= 0)
            throw ConstructionError("hyperinteger rule produced non-positive-integer " +
                                    v.to_string() + " at n=" + std::to_string(n));
        if (v < prev)
            throw ConstructionError("hyperinteger rule decreases at n=" +
                                    std::to_string(n));
        prev = v;
    }
    return HyperNat(std::move(seq), rule);
}

HyperNat SequenceField::identity_hypernat() const {
    return make_hypernat(Expr::var("n"));
}

HyperSeq SequenceField::partial_sum(const ExprPtr& term_k, const HyperNat& N) const {
    return HyperSeq(std::make_shared<FoldRule>(false, term_k, N.expr(), cfg_));
}

HyperSeq SequenceField::partial_product(const ExprPtr& term_k, const HyperNat& N) const {
    return HyperSeq(std::make_shared<FoldRule>(true, term_k, N.expr(), cfg_));
}

NullQuotientReport SequenceField::null_quotient_report(const Value& a) const {
    // Cauchy-to-cutoff check: tail oscillation across the probe ladder
    std::vector<std::int64_t> probes{1, 2, 3};
    for (std::int64_t n = 8; n <= cfg_.sequence_cutoff && n <= (1 << 18); n *= 2) {
        probes.push_back(n);
        probes.push_back(n + 1);
        probes.push_back(n + n / 2);
    }
    const std::size_t tail = probes.size() >= 6 ? probes.size() - 6 : 0;
    Rational lo = a.at(probes[tail]), hi = lo;
    for (std::size_t i = tail; i < probes.size(); ++i) {
        const Rational v = a.at(probes[i]);
        lo = min(lo, v);
        hi = max(hi, v);
    }
    const Asymptotics an = analyze(a);
    if (hi - lo > cfg_.st_tolerance && !an.convergent_known)
        throw NotCauchy("tail oscillation " + (hi - lo).to_decimal(12) +
                        " exceeds the tolerance " + cfg_.st_tolerance.to_string() +
                        " by index " + std::to_string(probes.back()));

    NullQuotientReport rep;
    const StEstimate st = st_detail(a);
    rep.represented = st.value;
    rep.exact = st.exact;
    rep.probes = probes;
    rep.coset_witness = "(" + a.describe() + ") - <" + st.value.to_string() +
                        ", " + st.value.to_string() + ", ...>";
    rep.narrative =
        "Two quotients, one pattern. Take Cauchy sequences of rationals and "
        "divide by the ideal of null sequences: every coset collapses to the "
        "single real it converges to, and this sequence's coset is the real "
        "printed above; the witness below is the null sequence carrying it. "
        "Now take ALL real sequences with termwise arithmetic and divide by "
        "the kernel of a finitely additive 0/1 measure that gives every "
        "cofinite set measure 1: cosets no longer collapse, they keep their "
        "convergence speed, which is exactly the infinitesimal information. "
        "The measure must decide one side of every complementary pair of "
        "infinite index sets; such a choice (a free ultrafilter) exists only "
        "non-constructively, so this tool works in the cofinite fragment and "
        "answers Undecided wherever only that choice could answer.";
    return rep;
}

std::string SequenceField::to_string(const Value& a) const {
    std::ostringstream os;
    os << "<" << a.describe() << "> = ";
    for (std::int64_t n = 1; n <= 5; ++n) os << a.at(n).to_string() << ", ";
    os << "...";
    return os.str();
}

} // namespace btrack
