#include <doctest.h>

#include <random>

#include <btrack/calculus.hpp>
#include <btrack/errors.hpp>

#include "oracles.hpp"

using namespace btrack;
using namespace btrack::calculus;

namespace {

const LeviCivitaField LC;
const SequenceField OMEGA;
const FieldConfig CFG;

ExprPtr random_polynomial(std::mt19937& rng, int max_degree) {
    std::uniform_int_distribution<int> deg(0, max_degree), num(-9, 9),
        den(1, 9);
    ExprPtr acc = Expr::lit(Rational(num(rng), den(rng)));
    for (int d = 1; d <= deg(rng); ++d) {
        const Rational c(num(rng), den(rng));
        acc = mk_bin(BinOp::Add, acc,
                     mk_bin(BinOp::Mul, Expr::lit(c),
                            mk_bin(BinOp::Pow, Expr::var("x"),
                                   Expr::lit(Rational(d)))));
    }
    return acc;
}

} // namespace

TEST_CASE("derivative by standard part of the difference quotient") {
    CHECK(derivative(parse_expr("x^2"), Rational(3), LC) == Rational(6));
    // sin'(0) = 1 to working precision
    const Rational d = derivative(parse_expr("sin(x)"), Rational(0), LC);
    CHECK((d - Rational(1)).abs() < Rational::pow10(-45));
    // the kink: probes +eps and -eps disagree
    CHECK_THROWS_AS(derivative(parse_expr("abs(x)"), Rational(0), LC),
                    NotDifferentiable);
}

TEST_CASE("derivative agrees with the symbolic oracle on polynomials") {
    std::mt19937 rng(20260810);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    RationalField ground(CFG);
    for (int i = 0; i < 50; ++i) {
        const ExprPtr f = random_polynomial(rng, 6);
        const ExprPtr df = differentiate(f);
        const Rational x0(num(rng), den(rng));
        Bindings<RationalField> b;
        b.emplace("x", x0);
        const Rational expected = evaluate(*df, ground, b);
        CHECK(derivative(f, x0, LC) == expected);       // exact
        CHECK(derivative(f, x0, OMEGA) == expected);    // exact via the exact route
    }
}

TEST_CASE("derivative matches the oracle on transcendental compositions") {
    const char* exprs[] = {"sin(x)*exp(x)", "log(x+2)", "sqrt(x+1)*x",
                           "exp(sin(x))", "cos(x)/(x+3)"};
    RationalField ground(CFG);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(0, 9), den(1, 9);
    const Rational tol = Rational::pow10(-45);
    for (const char* text : exprs) {
        const ExprPtr f = parse_expr(text);
        const ExprPtr df = differentiate(f);
        for (int i = 0; i < 10; ++i) {
            const Rational x0(num(rng), den(rng));
            Bindings<RationalField> b;
            b.emplace("x", x0);
            const Rational expected = evaluate(*df, ground, b);
            CAPTURE(text);
            CAPTURE(x0.to_string());
            CHECK((derivative(f, x0, LC) - expected).abs() < tol);
        }
    }
}

TEST_CASE("derivative implies continuity at the point") {
    const char* exprs[] = {"x^3 - x", "sin(x)*x", "exp(x)"};
    for (const char* text : exprs) {
        const ExprPtr f = parse_expr(text);
        CHECK_NOTHROW(derivative(f, Rational(1, 2), LC));
        CHECK(continuity_at(f, Rational(1, 2), LC).verdict ==
              ContinuityVerdict::PassToOrder);
    }
}

TEST_CASE("continuity probes") {
    CHECK(continuity_at(parse_expr("x^2"), Rational(5), LC).verdict ==
          ContinuityVerdict::PassToOrder);
    CHECK(continuity_at(parse_expr("x^2"), Rational(5), OMEGA).verdict ==
          ContinuityVerdict::PassToOrder);
    CHECK_THROWS_AS(continuity_at(parse_expr("1/x"), Rational(0), LC), DomainError);
    // jump: (abs(x)+x)/(2x) is 0 left of 0 and 1 right of it
    const ContinuityReport step =
        continuity_at(parse_expr("(abs(x)+x)/(2*x)"), Rational(0), LC);
    CHECK(step.verdict == ContinuityVerdict::Fail);
}

TEST_CASE("uniform continuity hyperpoint battery") {
    // 1/x on (0,1): the edge hyperpoint witnesses the failure with st -1
    const ContinuityReport fail =
        uniform_continuity_probe(parse_expr("1/x"), Rational(0), Rational(1), LC);
    CHECK(fail.verdict == ContinuityVerdict::Fail);
    bool found_witness = false;
    for (const auto& pr : fail.probes) {
        if (pr.increment_class && !pr.increment_class->is_small() && pr.increment_st) {
            if (*pr.increment_st == Rational(-1)) found_witness = true;
        }
    }
    CHECK(found_witness);

    CHECK(uniform_continuity_probe(parse_expr("x^2"), Rational(0), Rational(1), LC)
              .verdict == ContinuityVerdict::PassToOrder);
    CHECK(uniform_continuity_probe(parse_expr("sqrt(x)"), Rational(0), Rational(1), LC)
              .verdict == ContinuityVerdict::PassToOrder);
}

TEST_CASE("hyperfinite sums") {
    const HyperNat N = OMEGA.identity_hypernat();

    // geometric: partial sums are 1 - 2^-n exactly
    const HyperSeq geo = hyperfinite_sum(parse_expr("(1/2)^k", {{"x", "k"}, true}), N, OMEGA);
    for (std::int64_t n : {1, 2, 10})
        CHECK(geo.at(n) == Rational(1) - Rational(1, 2).pow_int(static_cast<long>(n)));
    CHECK((OMEGA.st(geo) - Rational(1)).abs() <= CFG.st_tolerance);

    // constant terms diverge
    const HyperSeq ones = hyperfinite_sum(Expr::lit(Rational(1)), N, OMEGA);
    CHECK(ones.at(7) == Rational(7));
    CHECK(OMEGA.classify(ones) ==
          Classification{MagnitudeTag::Infinite, Sign::Positive});
    CHECK_THROWS_AS(OMEGA.st(ones), NotFinite);

    // Basel: integral-tail correction brings the ladder within tolerance
    const HyperSeq basel =
        hyperfinite_sum(parse_expr("1/k^2", {{"k"}, false}), N, OMEGA);
    const StEstimate st = OMEGA.st_detail(basel);
    CHECK((st.value - oracle::basel_value()).abs() < CFG.st_tolerance);

    // linearity, exactly at every probed index
    const ExprPtr a_k = parse_expr("1/k^2", {{"k"}, false});
    const ExprPtr b_k = parse_expr("(1/2)^k", {{"x", "k"}, true});
    const HyperSeq sum_ab =
        hyperfinite_sum(mk_bin(BinOp::Add, a_k, b_k), N, OMEGA);
    const HyperSeq sum_a = hyperfinite_sum(a_k, N, OMEGA);
    const HyperSeq sum_b = hyperfinite_sum(b_k, N, OMEGA);
    for (std::int64_t n : {1, 3, 17, 256})
        CHECK(sum_ab.at(n) == sum_a.at(n) + sum_b.at(n));

    CHECK_THROWS_AS(
        hyperfinite_sum(parse_expr("1/(k-5)", {{"k"}, false}), N, OMEGA),
        DomainError);
}

TEST_CASE("hyperfinite products") {
    const HyperNat N = OMEGA.identity_hypernat();

    // telescoping: prod (1 - 1/(k+1)^2) = (n+2)/(2(n+1))
    const HyperSeq tel = hyperfinite_product(
        parse_expr("1 - 1/(k+1)^2", {{"k"}, false}), N, OMEGA);
    for (std::int64_t n : {1, 2, 5, 40}) {
        const Rational nn(static_cast<long>(n));
        CHECK(tel.at(n) == (nn + Rational(2)) / (Rational(2) * (nn + Rational(1))));
    }
    CHECK((OMEGA.st(tel) - Rational(1, 2)).abs() <= CFG.st_tolerance);

    const HyperSeq ones =
        hyperfinite_product(Expr::lit(Rational(1)), N, OMEGA);
    CHECK(OMEGA.st(ones) == Rational(1));

    // prod (1+1/k) telescopes to n+1: infinite
    const HyperSeq grow =
        hyperfinite_product(parse_expr("1+1/k", {{"k"}, false}), N, OMEGA);
    CHECK(grow.at(9) == Rational(10));
    CHECK(OMEGA.classify(grow) ==
          Classification{MagnitudeTag::Infinite, Sign::Positive});
}

TEST_CASE("compound-growth exponential") {
    const HyperNat N = OMEGA.identity_hypernat();

    const EulerExpResult e1 = euler_exp(Rational(1), Rational(1), N, OMEGA);
    CHECK((e1.st.value - oracle::exp_series(Rational(1), 30)).abs() <
          CFG.st_tolerance);

    const EulerExpResult zero = euler_exp(Rational(0), Rational(7, 3), N, OMEGA);
    CHECK(zero.st.exact);
    CHECK(zero.st.value == Rational(1));

    const EulerExpResult em1 = euler_exp(Rational(1), Rational(-1), N, OMEGA);
    CHECK((em1.st.value - oracle::exp_series(Rational(-1), 30)).abs() <
          CFG.st_tolerance);
}

TEST_CASE("finite-binomial expansion terms") {
    const HyperNat N = OMEGA.identity_hypernat();

    // r = 0 term is exactly 1
    const auto terms1 = euler_binomial_expand(Rational(1), Rational(1), N, 3, OMEGA);
    CHECK(terms1[0].st.exact);
    CHECK(terms1[0].st.value == Rational(1));
    // r = 2 term C(n,2)/n^2 has exact limit 1/2
    CHECK(terms1[2].st.exact);
    CHECK(terms1[2].st.value == Rational(1, 2));
    CHECK(terms1[2].seq.at(4) == Rational(4 * 3, 2) / Rational(16));

    // k=1, z=2, r=3: limit (kz)^r / r! = 8/6 = 4/3
    const auto terms2 = euler_binomial_expand(Rational(1), Rational(2), N, 4, OMEGA);
    CHECK(terms2[3].st.exact);
    CHECK(terms2[3].st.value == Rational(4, 3));

    // every term's limit is (kz)^r / r! exactly, r <= 6
    const Rational kz = Rational(3, 2) * Rational(-1);
    const auto terms3 =
        euler_binomial_expand(Rational(3, 2), Rational(-1), N, 7, OMEGA);
    Rational fact(1);
    for (int r = 0; r < 7; ++r) {
        if (r > 0) fact *= Rational(r);
        CHECK(terms3[static_cast<std::size_t>(r)].st.exact);
        CHECK(terms3[static_cast<std::size_t>(r)].st.value == kz.pow_int(r) / fact);
    }
}

TEST_CASE("decimal subdivision root finding") {
    const IvtResult r6 =
        ivt_root(parse_expr("x^2-2"), Rational(1), Rational(2), 6, CFG);
    CHECK(r6.decimal == "1.414213");
    CHECK(!r6.exact_hit);
    const IvtResult r10 =
        ivt_root(parse_expr("x^2-2"), Rational(1), Rational(2), 10, CFG);
    CHECK(r10.decimal == "1.4142135623");
    CHECK(r10.decimal.substr(0, r6.decimal.size()) == r6.decimal);
    // independent digit oracle
    CHECK(r10.decimal == oracle::sqrt_decimal(Rational(2), 10));

    const IvtResult hit = ivt_root(parse_expr("x"), Rational(-1), Rational(1), 3, CFG);
    CHECK(hit.decimal == "0.000");
    CHECK(hit.exact_hit);

    const IvtResult cubic =
        ivt_root(parse_expr("x^3-x-2"), Rational(1), Rational(2), 5, CFG);
    CHECK(cubic.decimal == "1.52137");
    {
        RationalField ground(CFG);
        const ExprPtr f = parse_expr("x^3-x-2");
        const Rational root = oracle::bisect(
            [&](const Rational& x) {
                Bindings<RationalField> b;
                b.emplace("x", x);
                return evaluate(*f, ground, b);
            },
            Rational(1), Rational(2), 7);
        CHECK(cubic.decimal == root.to_decimal(5, /*truncate=*/true));
    }

    CHECK_THROWS_AS(ivt_root(parse_expr("x^2+1"), Rational(0), Rational(1), 4, CFG),
                    NoSignChange);
}

TEST_CASE("series remainder at a hyperpoint") {
    const HyperNat N = OMEGA.identity_hypernat();

    // x^k (1-x) probed at 1 - 1/N: remainder (1-1/n)^(n+1) -> 1/e
    const ExprPtr family = parse_expr("x^k*(1-x)", {{"x", "k"}, true});
    const OffsetSpec off = parse_offset("-1/N", N);
    const SumTheoremReport bad = sum_theorem_probe(family, Rational(1), off, N, OMEGA);
    CHECK(bad.verdict == SumTheoremVerdict::NonUniformWitness);
    REQUIRE(bad.remainder_st.has_value());
    const Rational inv_e = oracle::exp_series(Rational(-1), 30);
    CHECK((*bad.remainder_st - inv_e).abs() < Rational::pow10(-6));

    // geometric family on [0, 1/2] probed at 1/2 - 1/N: uniform evidence
    const ExprPtr geo = parse_expr("x^k", {{"x", "k"}, true});
    const SumTheoremReport good =
        sum_theorem_probe(geo, Rational(1, 2), off, N, OMEGA);
    CHECK(good.verdict == SumTheoremVerdict::UniformEvidence);

    // zero series: trivially uniform
    const SumTheoremReport zero =
        sum_theorem_probe(Expr::lit(Rational(0)), Rational(1, 2), off, N, OMEGA);
    CHECK(zero.verdict == SumTheoremVerdict::UniformEvidence);
}

TEST_CASE("transfer spot checks") {
    const ExprPtr lhs = parse_expr("sin(x)^2 + cos(x)^2");
    const ExprPtr rhs = parse_expr("1");

    std::vector<std::pair<std::string, LCNumber>> lc_points;
    lc_points.emplace_back("eps", LC.epsilon());
    lc_points.emplace_back("1+eps", LC.add(LC.one(), LC.epsilon()));
    const TransferReport lc_rep = transfer_check(lhs, rhs, LC, lc_points);
    CHECK(lc_rep.pass);
    for (const auto& p : lc_rep.points) CHECK(*p.residual < Rational::pow10(-45));

    // polynomial identity transfers exactly to the rational-function field
    const RatFuncField rf;
    std::vector<std::pair<std::string, RatFuncElem>> rf_points;
    rf_points.emplace_back("x", rf.generator());
    const TransferReport ring = transfer_check(
        parse_expr("(x+1)^2"), parse_expr("x^2 + 2*x + 1"), rf, rf_points);
    CHECK(ring.pass);
    CHECK(*ring.points[0].residual == Rational(0));

    // the sine identity does not: NoTransfer is the finding
    const TransferReport no = transfer_check(lhs, rhs, rf, rf_points);
    CHECK(!no.pass);
    CHECK(no.no_transfer);
    CHECK(no.points[0].error == "NoTransfer");

    // sequence backend: termwise check at <1/n> and <n>
    std::vector<std::pair<std::string, HyperSeq>> sq_points;
    sq_points.emplace_back("<1/n>", OMEGA.parse_rule("1/n"));
    sq_points.emplace_back("<n>", OMEGA.parse_rule("n"));
    const TransferReport sq = transfer_check(lhs, rhs, OMEGA, sq_points);
    CHECK(sq.pass);
}
