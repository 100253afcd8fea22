#include <doctest.h>

#include <random>

#include <btrack/errors.hpp>
#include <btrack/rat_func.hpp>

#include "oracles.hpp"

using namespace btrack;

namespace {

const RatFuncField F;

RatFuncElem poly(std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.push_back(Rational(v));
    return RatFuncElem(Polynomial(std::move(c)), Polynomial::constant(Rational(1)));
}

RatFuncElem random_elem(std::mt19937& rng) {
    std::uniform_int_distribution<int> deg(0, 3), coeff(-5, 5);
    const auto rand_poly = [&](bool nonzero) {
        std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1, Rational(0));
        for (auto& v : c) v = Rational(coeff(rng));
        Polynomial p{std::move(c)};
        if (nonzero && p.is_zero()) p = Polynomial::constant(Rational(1));
        return p;
    };
    return RatFuncElem(rand_poly(false), rand_poly(true));
}

} // namespace

TEST_CASE("canonical reduction") {
    // (x^2-1)/(x-1) reduces to x+1
    const RatFuncElem r(Polynomial({Rational(-1), Rational(0), Rational(1)}),
                        Polynomial({Rational(-1), Rational(1)}));
    CHECK(r == poly({1, 1}));
    CHECK(F.to_string(r) == "x + 1");

    const RatFuncElem x = F.generator();
    CHECK(F.mul(x, F.div(F.one(), x)) == F.one());
    CHECK(F.sub(F.add(x, F.one()), x) == F.one());
    CHECK_THROWS_AS(F.div(x, F.zero()), DivisionByZero);
}

TEST_CASE("order at infinity") {
    const RatFuncElem x = F.generator();
    CHECK(F.cmp(x, F.from_rational(Rational(1000000))) == std::strong_ordering::greater);
    CHECK(F.cmp(F.mul(x, x), x) == std::strong_ordering::greater);
    const RatFuncElem inv_x = F.div(F.one(), x);
    for (long c : {1L, 7L, 1000L, 1000000L})
        CHECK(F.cmp(inv_x, F.from_rational(Rational(1, c))) == std::strong_ordering::less);
    // non-Archimedean witness: n * 1 < x for sampled n up to 10^6
    for (long n : {1L, 10L, 1000L, 999983L, 1000000L})
        CHECK(F.cmp(F.from_rational(Rational(n)), x) == std::strong_ordering::less);
}

TEST_CASE("classification follows the degree gap") {
    const RatFuncElem x = F.generator();
    CHECK(F.classify(x) == Classification{MagnitudeTag::Infinite, Sign::Positive});
    CHECK(F.classify(F.div(F.one(), x)) ==
          Classification{MagnitudeTag::Infinitesimal, Sign::Positive});
    const RatFuncElem ratio(Polynomial({Rational(1), Rational(3)}),
                            Polynomial({Rational(0), Rational(2)}));
    CHECK(F.classify(ratio) == Classification{MagnitudeTag::Appreciable, Sign::Positive});
    CHECK(F.st(ratio) == Rational(3, 2));
    CHECK(F.st(F.div(F.one(), x)) == Rational(0));
    CHECK_THROWS_AS(F.st(x), NotFinite);
    CHECK(F.infinitely_close(ratio, F.from_rational(Rational(3, 2))));
}

TEST_CASE("no transfer beyond real-closed facts") {
    const RatFuncElem x = F.generator();
    CHECK_THROWS_AS(F.transcendental(FuncTag::Sin, x), NoTransfer);
    CHECK_THROWS_AS(F.transcendental(FuncTag::Exp, F.div(F.one(), x)), NoTransfer);
    CHECK_THROWS_AS(F.root(F.add(x, F.one()), 2), NoTransfer);

    // constants delegate to numeric evaluation
    const RatFuncElem s = F.transcendental(FuncTag::Sin, F.from_rational(Rational(2)));
    CHECK((s.constant_value() - oracle::sin_series(Rational(2), 52)).abs() <
          Rational::pow10(-48));
    CHECK(s.constant_value().to_decimal(6) == "0.909297");
}

TEST_CASE("field axioms hold exactly") {
    std::mt19937 rng(20260810);
    for (int i = 0; i < 500; ++i) {
        const RatFuncElem a = random_elem(rng);
        const RatFuncElem b = random_elem(rng);
        const RatFuncElem c = random_elem(rng);
        CHECK(F.add(a, b) == F.add(b, a));
        CHECK(F.mul(a, b) == F.mul(b, a));
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        CHECK(F.add(a, F.neg(a)) == F.zero());
        if (!b.is_zero()) CHECK(F.mul(F.div(a, b), b) == a);
        if (F.cmp(a, b) == std::strong_ordering::less)
            CHECK(F.cmp(F.add(a, c), F.add(b, c)) == std::strong_ordering::less);
        if (F.cmp(a, F.zero()) == std::strong_ordering::greater &&
            F.cmp(b, F.zero()) == std::strong_ordering::greater)
            CHECK(F.cmp(F.mul(a, b), F.zero()) == std::strong_ordering::greater);
    }
}

TEST_CASE("degree cap") {
    std::vector<Rational> big(600, Rational(1));
    CHECK_THROWS_AS(Polynomial{big}, DegreeOverflow);
}
