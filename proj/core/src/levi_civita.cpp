#include "btrack/levi_civita.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "btrack/errors.hpp"

namespace btrack {

namespace {

struct RationalLess {
    bool operator()(const Rational& a, const Rational& b) const { return a < b; }
};

using TermMap = std::map<Rational, Rational, RationalLess>;

std::vector<LCTerm> map_to_terms(const TermMap& m, int keep) {
    std::vector<LCTerm> out;
    out.reserve(static_cast<std::size_t>(keep));
    for (const auto& [e, c] : m) {
        if (c.is_zero()) continue;
        out.push_back({e, c});
        if (static_cast<int>(out.size()) == keep) break;
    }
    return out;
}

LCNumber scale_coeffs(const LCNumber& a, const Rational& factor) {
    if (factor.is_zero()) return LCNumber{};
    std::vector<LCTerm> out = a.terms();
    for (auto& t : out) t.coeff *= factor;
    return LCNumber(std::move(out));
}

} // namespace

LCNumber LeviCivitaField::from_rational(const Rational& q) const {
    if (q.is_zero()) return LCNumber{};
    return LCNumber({{Rational(0), q}});
}

LCNumber LeviCivitaField::from_terms(std::vector<LCTerm> terms) const {
    TermMap m;
    for (auto& t : terms) m[t.exponent] += t.coeff;
    return LCNumber(map_to_terms(m, cfg_.truncation_order));
}

LCNumber LeviCivitaField::add(const Value& a, const Value& b) const {
    // merge of two sorted term lists
    std::vector<LCTerm> out;
    out.reserve(a.terms().size() + b.terms().size());
    auto ia = a.terms().begin(), ea = a.terms().end();
    auto ib = b.terms().begin(), eb = b.terms().end();
    while (ia != ea || ib != eb) {
        if (static_cast<int>(out.size()) == cfg_.truncation_order) break;
        if (ib == eb || (ia != ea && ia->exponent < ib->exponent)) {
            out.push_back(*ia++);
        } else if (ia == ea || ib->exponent < ia->exponent) {
            out.push_back(*ib++);
        } else {
            Rational c = ia->coeff + ib->coeff;
            if (!c.is_zero()) out.push_back({ia->exponent, c});
            ++ia;
            ++ib;
        }
    }
    return LCNumber(std::move(out));
}

LCNumber LeviCivitaField::neg(const Value& a) const {
    std::vector<LCTerm> out = a.terms();
    for (auto& t : out) t.coeff = -t.coeff;
    return LCNumber(std::move(out));
}

LCNumber LeviCivitaField::sub(const Value& a, const Value& b) const {
    return add(a, neg(b));
}

LCNumber LeviCivitaField::mul(const Value& a, const Value& b) const {
    if (a.is_zero() || b.is_zero()) return LCNumber{};
    TermMap m;
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms())
            m[ta.exponent + tb.exponent] += ta.coeff * tb.coeff;
    return LCNumber(map_to_terms(m, cfg_.truncation_order));
}

LCNumber LeviCivitaField::div(const Value& a, const Value& b) const {
    if (b.is_zero()) throw DivisionByZero("Levi-Civita division by zero");
    if (a.is_zero()) return LCNumber{};

    // Term-by-term long division: each step emits the next quotient term in
    // increasing exponent order and strictly raises the remainder's leading
    // exponent, so the first truncation_order quotient terms are exact.
    TermMap rem;
    for (const auto& t : a.terms()) rem[t.exponent] = t.coeff;
    const Rational& lead_exp = b.leading_exponent();
    const Rational& lead_coeff = b.leading_coeff();

    std::vector<LCTerm> quotient;
    while (static_cast<int>(quotient.size()) < cfg_.truncation_order && !rem.empty()) {
        const auto head = rem.begin();
        LCTerm qt{head->first - lead_exp, head->second / lead_coeff};
        quotient.push_back(qt);
        for (const auto& tb : b.terms()) {
            Rational e = qt.exponent + tb.exponent;
            auto it = rem.find(e);
            Rational c = (it == rem.end() ? Rational(0) : it->second) - qt.coeff * tb.coeff;
            if (c.is_zero()) {
                if (it != rem.end()) rem.erase(it);
            } else {
                rem[e] = c;
            }
        }
    }
    return LCNumber(std::move(quotient));
}

LCNumber LeviCivitaField::pow_int(const Value& a, long e) const {
    if (e == 0) return one();
    Value base = e < 0 ? div(one(), a) : a;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    Value acc = one();
    while (n) {
        if (n & 1) acc = mul(acc, base);
        base = mul(base, base);
        n >>= 1;
    }
    return acc;
}

LCNumber LeviCivitaField::root(const Value& a, unsigned k) const {
    if (k == 0) throw DomainError("0th root");
    if (k == 1) return a;
    if (a.is_zero()) return a;

    const int lead_sign = a.leading_coeff().sign();
    if (lead_sign < 0 && k % 2 == 0)
        throw NegativeLeading("even root of an element with negative leading coefficient");
    if (lead_sign < 0) return neg(root(neg(a), k));

    // a = c * eps^g * (1 + u), u infinitesimal relative to the leading term
    const Rational g = a.leading_exponent();
    const Rational c = a.leading_coeff();
    const Rational root_exp = g / Rational(static_cast<long>(k));
    const Rational root_coeff = kth_root_value(c, k, cfg_.working_precision);

    // u = a / (c * eps^g) - 1, strictly positive exponents
    const Value u = sub(scale_coeffs(mul(epsilon_power(-g), a), c.reciprocal()), one());

    // (1+u)^(1/k) by the generalized binomial series. Powers of u only move
    // support upward, so we can stop once the accumulator is saturated and
    // the next power starts beyond everything retained.
    const Rational alpha(1, static_cast<long>(k));
    Value acc = one();
    Value upow = u;
    Rational binom(1);
    const int hard_cap = 8 * cfg_.truncation_order;
    for (int j = 1; j <= hard_cap && !upow.is_zero(); ++j) {
        binom = binom * (alpha - Rational(j - 1)) / Rational(j);
        acc = add(acc, scale_coeffs(upow, binom));
        if (static_cast<int>(acc.terms().size()) == cfg_.truncation_order &&
            upow.leading_exponent() > acc.terms().back().exponent)
            break;
        upow = mul(upow, u);
    }

    return scale_coeffs(mul(epsilon_power(root_exp), acc), root_coeff);
}

LCNumber LeviCivitaField::transcendental(FuncTag f, const Value& x) const {
    if (f == FuncTag::Sqrt) return root(x, 2);
    if (f == FuncTag::Abs) return abs(x);

    Classification cls = classify(x);
    if (cls.tag == MagnitudeTag::Infinite)
        throw NotFinite(std::string(btrack::to_string(f)) +
                        " at an infinite element: no finite Taylor point exists "
                        "in this backend");

    const Rational a = st(x);
    const Value u = sub(x, from_rational(a)); // infinitesimal part
    const int P = cfg_.working_precision;

    // Taylor coefficients f^(j)(a)/j! for j < truncation_order.
    std::vector<Rational> coeff(static_cast<std::size_t>(cfg_.truncation_order));
    switch (f) {
        case FuncTag::Exp: {
            const Rational ea = transcendental_value(FuncTag::Exp, a, P);
            Rational fact(1);
            for (int j = 0; j < cfg_.truncation_order; ++j) {
                if (j > 0) fact *= Rational(j);
                coeff[static_cast<std::size_t>(j)] = ea / fact;
            }
            break;
        }
        case FuncTag::Sin:
        case FuncTag::Cos: {
            const Rational s = transcendental_value(FuncTag::Sin, a, P);
            const Rational c = transcendental_value(FuncTag::Cos, a, P);
            const Rational cycle_sin[4] = {s, c, -s, -c};
            const Rational cycle_cos[4] = {c, -s, -c, s};
            Rational fact(1);
            for (int j = 0; j < cfg_.truncation_order; ++j) {
                if (j > 0) fact *= Rational(j);
                const Rational& d = (f == FuncTag::Sin) ? cycle_sin[j % 4] : cycle_cos[j % 4];
                coeff[static_cast<std::size_t>(j)] = d / fact;
            }
            break;
        }
        case FuncTag::Log: {
            if (a.sign() <= 0)
                throw DomainError("log requires a positive standard part, got " + a.to_string());
            coeff[0] = transcendental_value(FuncTag::Log, a, P);
            // f^(j)(a)/j! = (-1)^(j-1) / (j a^j), exact
            Rational apow = a;
            for (int j = 1; j < cfg_.truncation_order; ++j) {
                Rational c = Rational(1) / (Rational(j) * apow);
                coeff[static_cast<std::size_t>(j)] = (j % 2 == 0) ? -c : c;
                apow *= a;
            }
            break;
        }
        default:
            throw DomainError("unsupported function tag");
    }

    // Horner on the truncated series
    Value acc = from_rational(coeff[static_cast<std::size_t>(cfg_.truncation_order - 1)]);
    for (int j = cfg_.truncation_order - 2; j >= 0; --j)
        acc = add(mul(acc, u), from_rational(coeff[static_cast<std::size_t>(j)]));
    return acc;
}

LCNumber LeviCivitaField::abs(const Value& a) const {
    return (cmp(a, zero()) == std::strong_ordering::less) ? neg(a) : a;
}

std::strong_ordering LeviCivitaField::cmp(const Value& a, const Value& b) const {
    const Value d = sub(a, b);
    if (d.is_zero()) return std::strong_ordering::equal;
    return d.leading_coeff().sign() > 0 ? std::strong_ordering::greater
                                        : std::strong_ordering::less;
}

Classification LeviCivitaField::classify(const Value& a) const {
    if (a.is_zero()) return {MagnitudeTag::Zero, Sign::Zero};
    const Sign s = sign_of(a.leading_coeff().sign());
    const int e = a.leading_exponent().sign();
    if (e > 0) return {MagnitudeTag::Infinitesimal, s};
    if (e < 0) return {MagnitudeTag::Infinite, s};
    return {MagnitudeTag::Appreciable, s};
}

Rational LeviCivitaField::st(const Value& a) const {
    if (a.is_zero()) return Rational(0);
    if (a.leading_exponent().sign() < 0)
        throw NotFinite("standard part of an infinite element");
    return coeff_at(a, Rational(0));
}

bool LeviCivitaField::infinitely_close(const Value& a, const Value& b) const {
    return classify(sub(a, b)).is_small();
}

Rational LeviCivitaField::coeff_at(const Value& a, const Rational& exponent) const {
    for (const auto& t : a.terms()) {
        if (t.exponent == exponent) return t.coeff;
        if (t.exponent > exponent) break;
    }
    return Rational(0);
}

Rational LeviCivitaField::max_abs_coeff(const Value& a) const {
    Rational m(0);
    for (const auto& t : a.terms()) m = max(m, t.coeff.abs());
    return m;
}

std::string LeviCivitaField::to_string(const Value& a) const {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : a.terms()) {
        const Rational c = t.coeff.abs();
        if (first) {
            if (t.coeff.sign() < 0) os << "-";
            first = false;
        } else {
            os << (t.coeff.sign() < 0 ? " - " : " + ");
        }
        const bool unit_coeff = (c == Rational(1));
        if (t.exponent.is_zero()) {
            os << c.to_string();
        } else if (t.exponent == Rational(1)) {
            if (!unit_coeff) os << c.to_string() << "·";
            os << "eps";
        } else {
            if (!unit_coeff) os << c.to_string() << "·";
            os << "eps^(" << t.exponent.to_string() << ")";
        }
    }
    return os.str();
}

std::string LeviCivitaField::to_json(const Value& a) const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& t : a.terms()) {
        if (!first) os << ",";
        first = false;
        os << "[\"" << t.exponent.to_string() << "\",\"" << t.coeff.to_string() << "\"]";
    }
    os << "]";
    return os.str();
}

} // namespace btrack
