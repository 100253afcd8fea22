#include <doctest.h>

#include <random>

#include <btrack/errors.hpp>
#include <btrack/sequences.hpp>

#include "oracles.hpp"

using namespace btrack;

namespace {

const SequenceField F;

HyperSeq rule(const std::string& text) { return F.parse_rule(text); }

} // namespace

TEST_CASE("termwise arithmetic") {
    const HyperSeq a = rule("1/n");
    const HyperSeq prod = F.mul(a, a);
    for (std::int64_t n : {1, 2, 3, 10, 1000})
        CHECK(prod.at(n) == Rational(1) / (Rational(n) * Rational(n)));

    const HyperSeq zero_sum = F.add(rule("n"), rule("-n"));
    for (std::int64_t n : {1, 5, 100}) CHECK(zero_sum.at(n) == Rational(0));

    const HyperSeq inv = F.div(F.one(), rule("n"));
    CHECK(inv.at(4) == Rational(1, 4));
}

TEST_CASE("division needs a certified nonzero divisor") {
    CHECK_THROWS_AS(F.div(F.one(), F.zero()), NotEventuallyNonzero);
    // n-5 vanishes at a single index: allowed, patched, recorded
    const HyperSeq q = F.div(F.one(), rule("n-5"));
    CHECK(q.at(4) == Rational(-1));
    CHECK(q.at(5) == Rational(0)); // patched hole
    CHECK(q.at(6) == Rational(1));
    const auto ex = q.exceptions();
    REQUIRE(ex.size() == 1);
    CHECK(ex[0] == 5);
    // sin(n) has no certificate
    CHECK_THROWS_AS(F.div(F.one(), rule("sin(n)")), NotEventuallyNonzero);
}

TEST_CASE("comparison verdicts") {
    const CompareReport r1 = F.compare(rule("1/n^2"), rule("1/n"));
    CHECK(r1.verdict == CompareVerdict::Less);
    CHECK(!r1.dominance_pattern.empty());

    const CompareReport r2 = F.compare(rule("(-1)^n"), F.zero());
    CHECK(r2.verdict == CompareVerdict::Undecided);

    const CompareReport r3 = F.compare(rule("n"), rule("n"));
    CHECK(r3.verdict == CompareVerdict::EventuallyEqual);

    // cutoff independence for the alternating rule
    for (int j = 10; j <= 20; j += 5) {
        FieldConfig cfg;
        cfg.sequence_cutoff = std::int64_t{1} << j;
        SequenceField small(cfg);
        CHECK(small.compare(small.parse_rule("(-1)^n"), small.zero()).verdict ==
              CompareVerdict::Undecided);
    }
}

TEST_CASE("classification") {
    CHECK(F.classify(rule("1/n")) ==
          Classification{MagnitudeTag::Infinitesimal, Sign::Positive});
    CHECK(F.classify(rule("1/n^2")) ==
          Classification{MagnitudeTag::Infinitesimal, Sign::Positive});
    CHECK(F.classify(rule("n")) ==
          Classification{MagnitudeTag::Infinite, Sign::Positive});
    CHECK(F.classify(rule("2+1/n")) ==
          Classification{MagnitudeTag::Appreciable, Sign::Positive});
    CHECK(F.classify(F.zero()) == Classification{MagnitudeTag::Zero, Sign::Zero});
    CHECK_THROWS_AS(F.classify(rule("(-1)^n")), Undecided);
    // classify(-x) flips the sign and keeps the tag
    const HyperSeq x = rule("1/n");
    const Classification c = F.classify(x);
    const Classification cn = F.classify(F.neg(x));
    CHECK(cn.tag == c.tag);
    CHECK(cn.sign == flip(c.sign));
}

TEST_CASE("standard parts") {
    const StEstimate two = F.st_detail(rule("2+1/n"));
    CHECK(two.exact);
    CHECK(two.value == Rational(2));

    CHECK(F.st(rule("1/n")) == Rational(0));
    CHECK_THROWS_AS(F.st(rule("n")), NotFinite);
    CHECK_THROWS_AS(F.st(rule("(-1)^n")), Undecided);

    // the compound-growth ladder converges to the exponential base
    const StEstimate e = F.st_detail(rule("(1+1/n)^n"));
    const Rational e_oracle = oracle::exp_series(Rational(1), 30);
    CHECK((e.value - e_oracle).abs() < F.config().st_tolerance);
}

TEST_CASE("term-by-term application") {
    const HyperSeq sq = F.apply(parse_expr("x^2"), rule("1/n"));
    for (std::int64_t n : {1, 2, 7}) CHECK(sq.at(n) == Rational(1, n * n));

    const HyperSeq shifted = F.apply(parse_expr("x+1"), F.zero());
    CHECK(shifted.at(3) == Rational(1));

    // sin applied to <1/n> stays within the cubic tail of <1/n>
    const HyperSeq s = F.apply(parse_expr("sin(x)"), rule("1/n"));
    for (std::int64_t n : {1, 2, 5, 50}) {
        const Rational t(1, static_cast<long>(n));
        CHECK((s.at(n) - t).abs() <= t * t * t / Rational(6) + Rational::pow10(-40));
    }
    CHECK(F.infinitely_close(s, rule("1/n")));

    // apply commutes with multiplication termwise
    const HyperSeq lhs = F.apply(parse_expr("x^2*(x+1)"), rule("1/n"));
    const HyperSeq rhs = F.mul(F.apply(parse_expr("x^2"), rule("1/n")),
                               F.apply(parse_expr("x+1"), rule("1/n")));
    for (std::int64_t n : {1, 3, 9, 81}) CHECK(lhs.at(n) == rhs.at(n));

    CHECK_THROWS_AS(F.apply(parse_expr("log(x)"), rule("1-n")), DomainError);
}

TEST_CASE("termwise ring laws at random probes") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::int64_t> probe(1, F.config().sequence_cutoff);
    const HyperSeq a = rule("1/n + 3");
    const HyperSeq b = rule("n^2 - n");
    const HyperSeq c = rule("2/(n+1)");
    const HyperSeq ab = F.add(a, b);
    const HyperSeq dist_l = F.mul(a, F.add(b, c));
    const HyperSeq dist_r = F.add(F.mul(a, b), F.mul(a, c));
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t n = probe(rng);
        CHECK(ab.at(n) == a.at(n) + b.at(n));
        CHECK(dist_l.at(n) == dist_r.at(n));
    }
}

TEST_CASE("finite mutations never change verdicts") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<std::int64_t> idx(1, 40);
    std::uniform_int_distribution<long> val(-50, 50);
    const HyperSeq a = rule("1/n^2");
    const HyperSeq b = rule("1/n");
    std::map<std::int64_t, Rational> overrides;
    for (int i = 0; i < 12; ++i) overrides[idx(rng)] = Rational(val(rng));
    const HyperSeq mutated = F.with_finite_overrides(a, overrides);

    CHECK(F.compare(a, b).verdict == F.compare(mutated, b).verdict);
    CHECK(F.st(mutated) == F.st(a));
    CHECK(F.classify(mutated) == F.classify(a));
}

TEST_CASE("hypernat validation") {
    CHECK_NOTHROW(F.identity_hypernat());
    CHECK_NOTHROW(F.make_hypernat(parse_expr("n^2", {{"n"}, false})));
    CHECK_THROWS_AS(F.make_hypernat(parse_expr("-n", {{"n"}, false})),
                    ConstructionError);
    CHECK_THROWS_AS(F.make_hypernat(parse_expr("1/n", {{"n"}, false})),
                    ConstructionError);
    CHECK_THROWS_AS(F.make_hypernat(parse_expr("n/2", {{"n"}, false})),
                    ConstructionError);
    const HyperNat N = F.identity_hypernat();
    CHECK(N.value_at(17) == 17);
}

TEST_CASE("null quotient demo") {
    const NullQuotientReport e = F.null_quotient_report(rule("(1+1/n)^n"));
    const Rational e_oracle = oracle::exp_series(Rational(1), 30);
    CHECK((e.represented - e_oracle).abs() < F.config().st_tolerance);
    CHECK(!e.narrative.empty());

    const NullQuotientReport z = F.null_quotient_report(rule("1/n"));
    CHECK(z.represented == Rational(0));
    CHECK(z.exact);

    CHECK_THROWS_AS(F.null_quotient_report(rule("(-1)^n")), NotCauchy);
}

TEST_CASE("undecided stays undecided across cutoffs") {
    for (int j = 10; j <= 20; j += 2) {
        FieldConfig cfg;
        cfg.sequence_cutoff = std::int64_t{1} << j;
        SequenceField field(cfg);
        CHECK_THROWS_AS(field.classify(field.parse_rule("(-1)^n")), Undecided);
        CHECK_THROWS_AS(field.st(field.parse_rule("(-1)^n")), Undecided);
    }
}
