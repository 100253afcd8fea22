#include <doctest.h>

#include <random>

#include <btrack/errors.hpp>
#include <btrack/levi_civita.hpp>

#include "oracles.hpp"

using namespace btrack;

namespace {

const LeviCivitaField F;

LCNumber lc(std::initializer_list<std::pair<long, long>> terms) {
    // integer (exponent, coefficient) pairs for brevity
    std::vector<LCTerm> t;
    for (auto& [e, c] : terms) t.push_back({Rational(e), Rational(c)});
    return F.from_terms(std::move(t));
}

// random sample on a small additive exponent lattice so that triple products
// never hit the truncation cap and field laws can be checked exactly
LCNumber random_sample(std::mt19937& rng) {
    static const Rational exps[] = {Rational(0), Rational(1, 2), Rational(1),
                                    Rational(2)};
    std::uniform_int_distribution<int> nterms(0, 3), pick(0, 3), coeff(-6, 6);
    std::vector<LCTerm> t;
    for (int i = 0, n = nterms(rng); i <= n; ++i) {
        const long c = coeff(rng);
        if (c != 0) t.push_back({exps[pick(rng)], Rational(c)});
    }
    return F.from_terms(std::move(t));
}

} // namespace

TEST_CASE("arithmetic on eps") {
    const LCNumber eps = F.epsilon();
    const LCNumber one = F.one();
    CHECK(F.mul(F.add(one, eps), F.sub(one, eps)) == lc({{0, 1}, {2, -1}}));
    CHECK(F.mul(eps, eps) == lc({{2, 1}}));

    // 1/(1-eps) is the full geometric series up to the truncation order
    const LCNumber inv = F.div(one, F.sub(one, eps));
    REQUIRE(static_cast<int>(inv.terms().size()) == F.config().truncation_order);
    for (int k = 0; k < F.config().truncation_order; ++k) {
        CHECK(inv.terms()[k].exponent == Rational(k));
        CHECK(inv.terms()[k].coeff == Rational(1));
    }
    CHECK_THROWS_AS(F.div(one, F.zero()), DivisionByZero);
}

TEST_CASE("ordering") {
    const LCNumber eps = F.epsilon();
    const LCNumber eps2 = F.mul(eps, eps);
    CHECK(F.cmp(eps2, eps) == std::strong_ordering::less);
    CHECK(F.cmp(F.infinite_unit(), F.from_rational(Rational(1000000))) ==
          std::strong_ordering::greater);
    CHECK(F.cmp(eps, eps) == std::strong_ordering::equal);
    CHECK(F.cmp(eps, F.from_rational(Rational(1, 1000000))) ==
          std::strong_ordering::less);
}

TEST_CASE("classification and standard part") {
    CHECK(F.classify(F.epsilon()) ==
          Classification{MagnitudeTag::Infinitesimal, Sign::Positive});
    CHECK(F.classify(F.zero()) == Classification{MagnitudeTag::Zero, Sign::Zero});
    CHECK(F.classify(F.infinite_unit()) ==
          Classification{MagnitudeTag::Infinite, Sign::Positive});
    CHECK(F.classify(F.neg(F.infinite_unit())) ==
          Classification{MagnitudeTag::Infinite, Sign::Negative});
    CHECK(F.classify(lc({{0, 3}, {1, 5}})) ==
          Classification{MagnitudeTag::Appreciable, Sign::Positive});

    CHECK(F.st(lc({{0, 3}, {1, 5}, {2, -1}})) == Rational(3));
    CHECK(F.st(F.epsilon()) == Rational(0));
    CHECK_THROWS_AS(F.st(F.infinite_unit()), NotFinite);

    CHECK(F.infinitely_close(lc({{0, 1}, {1, 1}}), F.one()));
    CHECK(!F.infinitely_close(lc({{0, 1}, {1, 1}}), F.from_rational(Rational(2))));
}

TEST_CASE("roots") {
    const LCNumber eps = F.epsilon();
    CHECK(F.root(F.mul(eps, eps), 2) == eps);
    CHECK(F.root(F.from_rational(Rational(4)), 2) == F.from_rational(Rational(2)));
    CHECK_THROWS_AS(F.root(F.neg(eps), 2), NegativeLeading);
    CHECK(F.root(F.from_rational(Rational(-8)), 3) == F.from_rational(Rational(-2)));

    // sqrt(1+eps): generalized binomial series, coefficients C(1/2, k)
    const LCNumber s = F.root(F.add(F.one(), eps), 2);
    for (int k = 0; k < 8; ++k)
        CHECK(F.coeff_at(s, Rational(k)) == oracle::binomial(Rational(1, 2), k));

    // root(a,k)^k reproduces a on every exponent below the truncation horizon
    const LCNumber a = lc({{0, 4}, {1, 1}, {3, 2}});
    const LCNumber r3 = F.root(a, 3);
    const LCNumber back = F.pow_int(r3, 3);
    const Rational horizon = back.terms().back().exponent;
    for (const auto& t : a.terms()) {
        if (t.exponent > horizon) break;
        CHECK((F.coeff_at(back, t.exponent) - t.coeff).abs() <
              Rational::pow10(-(F.config().working_precision - 5)));
    }
}

TEST_CASE("transcendental evaluation") {
    const LCNumber eps = F.epsilon();

    // exp(eps): 1 + eps + eps^2/2 + ... exactly (base point 0 is exact)
    const LCNumber e = F.transcendental(FuncTag::Exp, eps);
    Rational fact(1);
    for (int k = 0; k < 8; ++k) {
        if (k > 0) fact *= Rational(k);
        CHECK(F.coeff_at(e, Rational(k)) == Rational(1) / fact);
    }

    // log(1+eps): Mercator series, exact rational coefficients
    const LCNumber l = F.transcendental(FuncTag::Log, F.add(F.one(), eps));
    for (int k = 1; k < 8; ++k) {
        const Rational expected = Rational(k % 2 == 1 ? 1 : -1) / Rational(k);
        CHECK(F.coeff_at(l, Rational(k)) == expected);
    }
    CHECK(F.coeff_at(l, Rational(0)) == Rational(0));

    // sin^2 + cos^2 - 1 vanishes to working precision at 1 + eps
    const LCNumber x = F.add(F.one(), eps);
    const LCNumber s = F.transcendental(FuncTag::Sin, x);
    const LCNumber c = F.transcendental(FuncTag::Cos, x);
    const LCNumber resid = F.sub(F.add(F.mul(s, s), F.mul(c, c)), F.one());
    CHECK(F.max_abs_coeff(resid) < Rational::pow10(-45));

    CHECK_THROWS_AS(F.transcendental(FuncTag::Exp, F.infinite_unit()), NotFinite);
    CHECK_THROWS_AS(F.transcendental(FuncTag::Log, eps), DomainError);
}

TEST_CASE("exp is a homomorphism to working precision") {
    const LCNumber x = lc({{0, 1}, {1, 2}});            // 1 + 2 eps
    const LCNumber y = lc({{0, -2}, {2, 1}});           // -2 + eps^2
    const LCNumber lhs = F.mul(F.transcendental(FuncTag::Exp, x),
                               F.transcendental(FuncTag::Exp, y));
    const LCNumber rhs = F.transcendental(FuncTag::Exp, F.add(x, y));
    CHECK(F.max_abs_coeff(F.sub(lhs, rhs)) < Rational::pow10(-45));
}

TEST_CASE("ordered-field axioms hold exactly on lattice samples") {
    std::mt19937 rng(20260810);
    for (int i = 0; i < 500; ++i) {
        const LCNumber a = random_sample(rng);
        const LCNumber b = random_sample(rng);
        const LCNumber c = random_sample(rng);
        CHECK(F.add(a, b) == F.add(b, a));
        CHECK(F.mul(a, b) == F.mul(b, a));
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        CHECK(F.add(a, F.neg(a)) == F.zero());
        CHECK(F.mul(a, F.one()) == a);
        // order compatibility
        if (F.cmp(a, b) == std::strong_ordering::less) {
            CHECK(F.cmp(F.add(a, c), F.add(b, c)) == std::strong_ordering::less);
        }
        if (F.cmp(a, F.zero()) == std::strong_ordering::greater &&
            F.cmp(b, F.zero()) == std::strong_ordering::greater) {
            CHECK(F.cmp(F.mul(a, b), F.zero()) == std::strong_ordering::greater);
        }
        // st is additive on finite elements
        if (F.classify(a).is_finite() && F.classify(b).is_finite())
            CHECK(F.st(F.add(a, b)) == F.st(a) + F.st(b));
    }
}

TEST_CASE("division inverts multiplication below the horizon") {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        const LCNumber a = random_sample(rng);
        const LCNumber b = random_sample(rng);
        if (b.is_zero()) continue;
        const LCNumber q = F.div(a, b);
        const LCNumber back = F.mul(q, b);
        if (q.terms().empty()) {
            CHECK(a.is_zero());
            continue;
        }
        // agreement below both truncation horizons (quotient and re-product)
        const int cap = F.config().truncation_order;
        std::optional<Rational> limit;
        if (static_cast<int>(q.terms().size()) == cap)
            limit = q.terms().back().exponent + b.leading_exponent();
        if (static_cast<int>(back.terms().size()) == cap) {
            const Rational h = back.terms().back().exponent;
            limit = limit ? min(*limit, h) : h;
        }
        for (const auto& t : a.terms()) {
            if (limit && t.exponent > *limit) break;
            CHECK(F.coeff_at(back, t.exponent) == t.coeff);
        }
    }
}

TEST_CASE("display and machine formats") {
    CHECK(F.to_string(F.zero()) == "0");
    CHECK(F.to_string(lc({{0, 3}, {1, 5}, {2, -1}})) == "3 + 5·eps - eps^(2)");
    CHECK(F.to_string(F.epsilon()) == "eps");
    CHECK(F.to_string(lc({{-1, 1}})) == "eps^(-1)");
    LCNumber half_pow;
    {
        std::vector<LCTerm> t{{Rational(1, 2), Rational(1, 2)}};
        half_pow = F.from_terms(std::move(t));
    }
    CHECK(F.to_string(half_pow) == "1/2·eps^(1/2)");
    CHECK(F.to_json(lc({{0, 3}, {1, 5}})) == "[[\"0\",\"3\"],[\"1\",\"5\"]]");
}
