#include "btrack/transcendental.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <mpfr.h>

#include "btrack/errors.hpp"

namespace btrack {

const char* to_string(FuncTag f) {
    switch (f) {
        case FuncTag::Sin: return "sin";
        case FuncTag::Cos: return "cos";
        case FuncTag::Exp: return "exp";
        case FuncTag::Log: return "log";
        case FuncTag::Sqrt: return "sqrt";
        case FuncTag::Abs: return "abs";
    }
    return "?";
}

std::optional<FuncTag> func_tag_from_name(std::string_view name) {
    if (name == "sin") return FuncTag::Sin;
    if (name == "cos") return FuncTag::Cos;
    if (name == "exp") return FuncTag::Exp;
    if (name == "log") return FuncTag::Log;
    if (name == "sqrt") return FuncTag::Sqrt;
    if (name == "abs") return FuncTag::Abs;
    return std::nullopt;
}

namespace {

// Exact shortcuts keep rational arithmetic rational wherever the true value
// is rational; everything else goes through correctly rounded binary floats
// converted back to an exact rational (mantissa * 2^e), so the only error is
// the float rounding itself.
std::optional<Rational> exact_value(FuncTag f, const Rational& x) {
    switch (f) {
        case FuncTag::Sin:
            if (x.is_zero()) return Rational(0);
            break;
        case FuncTag::Cos:
            if (x.is_zero()) return Rational(1);
            break;
        case FuncTag::Exp:
            if (x.is_zero()) return Rational(1);
            break;
        case FuncTag::Log:
            if (x == Rational(1)) return Rational(0);
            break;
        case FuncTag::Sqrt:
            return exact_kth_root(x, 2); // nullopt when irrational
        case FuncTag::Abs:
            return x.abs();
    }
    return std::nullopt;
}

Rational mpfr_to_rational(mpfr_t v) {
    if (mpfr_zero_p(v)) return Rational(0);
    mpz_class mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v);
    Rational r{mant};
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        return r * Rational(p);
    }
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    return r / Rational(p);
}

int apply_mpfr(FuncTag f, mpfr_t out, mpfr_t arg) {
    switch (f) {
        case FuncTag::Sin: return mpfr_sin(out, arg, MPFR_RNDN);
        case FuncTag::Cos: return mpfr_cos(out, arg, MPFR_RNDN);
        case FuncTag::Exp: return mpfr_exp(out, arg, MPFR_RNDN);
        case FuncTag::Log: return mpfr_log(out, arg, MPFR_RNDN);
        case FuncTag::Sqrt: return mpfr_sqrt(out, arg, MPFR_RNDN);
        case FuncTag::Abs: return mpfr_abs(out, arg, MPFR_RNDN);
    }
    return 0;
}

struct CacheKey {
    int tag;
    int digits;
    mpq_class value;
    bool operator<(const CacheKey& o) const {
        if (tag != o.tag) return tag < o.tag;
        if (digits != o.digits) return digits < o.digits;
        return cmp(value, o.value) < 0;
    }
};

std::map<CacheKey, Rational>& cache() {
    static std::map<CacheKey, Rational> c;
    return c;
}
std::mutex cache_mutex;

Rational compute(FuncTag f, const Rational& x, int digits) {
    if (f == FuncTag::Log && x.sign() <= 0)
        throw DomainError("log of non-positive value " + x.to_string());
    if (f == FuncTag::Sqrt && x.sign() < 0)
        throw DomainError("sqrt of negative value " + x.to_string());

    // target: absolute error < 10^-digits. Start from a precision covering
    // the requested digits plus the argument's own scale (sin/cos of large
    // arguments need the argument reduction to stay accurate), then widen
    // until the half-ulp bound of the result is small enough.
    const Rational target = Rational::pow10(-digits);
    long arg_bits = static_cast<long>(mpz_sizeinbase(x.numerator().get_mpz_t(), 2));
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33) + 32 + arg_bits;

    // 2^e < 10^-digits  <=>  e < -digits * log2(10)
    const long target_exp = static_cast<long>(-digits * 3.3220) - 2;

    for (int attempt = 0; attempt < 10; ++attempt) {
        const mpfr_prec_t arg_prec = prec + 64;
        mpfr_t arg, out;
        mpfr_init2(arg, arg_prec);
        mpfr_init2(out, prec);
        mpfr_set_q(arg, x.raw().get_mpq_t(), MPFR_RNDN);
        apply_mpfr(f, out, arg);

        bool ok = false;
        Rational result;
        const long arg_exp = static_cast<long>(mpfr_get_exp(arg));
        if (mpfr_zero_p(out)) {
            // correctly rounded zero: |true value| below one ulp of the arg scale
            result = Rational(0);
            ok = arg_exp - static_cast<long>(arg_prec) < target_exp;
        } else {
            const long out_exp = static_cast<long>(mpfr_get_exp(out));
            // output rounding: half an ulp of the result
            const long out_err = out_exp - static_cast<long>(prec) - 1;
            // input rounding propagated through a conservative Lipschitz bound
            const long in_err = arg_exp - static_cast<long>(arg_prec) +
                                std::max<long>(0, out_exp) + 2;
            ok = std::max(out_err, in_err) < target_exp;
            if (ok) result = mpfr_to_rational(out);
        }
        mpfr_clear(arg);
        mpfr_clear(out);
        if (ok) return result;
        prec *= 2;
    }
    throw NonNumericValue("failed to reach requested precision for " +
                          std::string(to_string(f)) + "(" + x.to_string() + ")");
}

} // namespace

Rational transcendental_value(FuncTag f, const Rational& x, int digits) {
    if (auto ex = exact_value(f, x)) return *ex;

    CacheKey key{static_cast<int>(f), digits, x.raw()};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache().find(key);
        if (it != cache().end()) return it->second;
    }
    Rational r = compute(f, x, digits);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache().emplace(std::move(key), r);
    }
    return r;
}

std::optional<Rational> exact_kth_root(const Rational& x, unsigned k) {
    if (k == 0) return std::nullopt;
    if (k == 1) return x;
    if (x.is_zero()) return Rational(0);
    if (x.sign() < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = exact_kth_root(-x, k);
        if (r) return -*r;
        return std::nullopt;
    }
    mpz_class num = x.numerator(), den = x.denominator();
    mpz_class rn, rd;
    int exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k);
    int exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k);
    if (exact_n && exact_d) return Rational(rn) / Rational(rd);
    return std::nullopt;
}

Rational kth_root_value(const Rational& x, unsigned k, int digits) {
    if (k == 0) throw DomainError("0th root");
    if (auto ex = exact_kth_root(x, k)) return *ex;
    if (x.sign() < 0 && k % 2 == 0)
        throw DomainError("even root of negative value " + x.to_string());
    if (k == 2) return transcendental_value(FuncTag::Sqrt, x, digits);
    // x^(1/k) = exp(log(x)/k), with headroom on the inner precision
    const int inner = digits + 15;
    const bool neg = x.sign() < 0;
    Rational lg = transcendental_value(FuncTag::Log, x.abs(), inner);
    Rational r = transcendental_value(FuncTag::Exp, lg / Rational(static_cast<long>(k)), inner);
    return neg ? -r : r;
}

} // namespace btrack
