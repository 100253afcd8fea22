#ifndef BTRACK_TEST_ORACLES_HPP
#define BTRACK_TEST_ORACLES_HPP

// Test-side oracles, all exact rational arithmetic with explicit tail
// bounds. These deliberately share no code with the library's evaluation
// paths: series summed directly, roots by integer square roots, reference
// roots by plain bisection.

#include <btrack/rational.hpp>

#include <functional>
#include <string>

namespace oracle {

using btrack::Rational;

// exp(x) by the direct series; returns a value within 10^-digits for |x|<=4
inline Rational exp_series(const Rational& x, int digits) {
    const Rational target = Rational::pow10(-(digits + 2));
    Rational term(1), sum(1);
    for (long k = 1; k < 500; ++k) {
        term = term * x / Rational(k);
        sum += term;
        if (Rational(2) * term.abs() < target && k > 8) break;
    }
    return sum;
}

inline Rational sin_series(const Rational& x, int digits) {
    const Rational target = Rational::pow10(-(digits + 2));
    Rational term = x, sum = x;
    for (long k = 1; k < 400; ++k) {
        term = term * x * x / Rational(2 * k) / Rational(2 * k + 1);
        term = -term;
        sum += term;
        if (term.abs() < target && k > 4) break;
    }
    return sum;
}

inline Rational cos_series(const Rational& x, int digits) {
    const Rational target = Rational::pow10(-(digits + 2));
    Rational term(1), sum(1);
    for (long k = 1; k < 400; ++k) {
        term = term * x * x / Rational(2 * k - 1) / Rational(2 * k);
        term = -term;
        sum += term;
        if (term.abs() < target && k > 4) break;
    }
    return sum;
}

// log(x) for x in (0, 4]: 2 atanh((x-1)/(x+1)), geometric tail bound
inline Rational log_atanh(const Rational& x, int digits) {
    const Rational u = (x - Rational(1)) / (x + Rational(1));
    const Rational u2 = u * u;
    const Rational target = Rational::pow10(-(digits + 2));
    Rational term = u, sum = u;
    for (long k = 1; k < 2000; ++k) {
        term = term * u2;
        const Rational add = term / Rational(2 * k + 1);
        sum += add;
        if (add.abs() / (Rational(1) - u2) < target) break;
    }
    return Rational(2) * sum;
}

// decimal digits of sqrt(v) via integer square root of v * 10^(2*digits)
inline std::string sqrt_decimal(const Rational& v, int digits) {
    const Rational scaled = v * Rational::pow10(2 * digits);
    mpz_class num = scaled.numerator() * scaled.denominator();
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), num.get_mpz_t());
    // root / den is floor(sqrt(v)*10^digits)
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), root.get_mpz_t(), scaled.denominator().get_mpz_t());
    std::string s = q.get_str();
    while (static_cast<int>(s.size()) <= digits) s.insert(0, "0");
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return s;
}

// generalized binomial coefficient C(alpha, k) by the recurrence
inline Rational binomial(const Rational& alpha, int k) {
    Rational c(1);
    for (int j = 0; j < k; ++j) c = c * (alpha - Rational(j)) / Rational(j + 1);
    return c;
}

// plain bisection to within 10^-digits; f must change sign on [a,b]
inline Rational bisect(const std::function<Rational(const Rational&)>& f, Rational a,
                       Rational b, int digits) {
    Rational fa = f(a);
    const Rational width = Rational::pow10(-digits);
    while (b - a > width) {
        const Rational m = (a + b) / Rational(2);
        const Rational fm = f(m);
        if (fm.is_zero()) return m;
        if (fa.sign() * fm.sign() < 0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return (a + b) / Rational(2);
}

// zeta(2) by an exact partial sum plus the Euler-Maclaurin tail
inline Rational basel_value(long N = 4096) {
    Rational s(0);
    for (long k = 1; k <= N; ++k) s += Rational(1) / (Rational(k) * Rational(k));
    const Rational n(N);
    return s + Rational(1) / n - Rational(1) / (Rational(2) * n * n) +
           Rational(1) / (Rational(6) * n * n * n);
}

} // namespace oracle

#endif
