#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <stdexcept>

#include "nblab/errors.hpp"

namespace nblab {

// Exact rational with 64-bit numerator/denominator and checked arithmetic.
// Breakpoints of the kernel step functions are of the form p/(q*n), which
// stays far inside the 64-bit range for every cutoff the library accepts;
// arithmetic that would overflow throws instead of wrapping.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // > 0, gcd(|num|, den) == 1

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

    static Rational make(std::int64_t n, std::int64_t d) {
        if (d == 0) throw PreconditionError("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        Rational r;
        r.num = g ? n / g : n;
        r.den = g ? d / g : d;
        return r;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator-(const Rational& a) { return make_checked(-(__int128)a.num, a.den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make_checked((__int128)a.num * b.den + (__int128)b.num * a.den,
                            (__int128)a.den * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make_checked((__int128)a.num * b.den - (__int128)b.num * a.den,
                            (__int128)a.den * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make_checked((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw PreconditionError("rational division by zero");
        return make_checked((__int128)a.num * b.den, (__int128)a.den * b.num);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // floor(a) as an integer
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }

    Rational frac() const { return *this - Rational(floor()); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // Accepts "p/q" or a plain integer string.
    static Rational parse(const std::string& text);

private:
    static Rational make_checked(__int128 n, __int128 d) {
        if (d == 0) throw PreconditionError("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 an = n < 0 ? -n : n;
        // normalize before the range check so p/q * q/p style products survive
        std::int64_t g64 = 1;
        {
            // gcd on the low parts is not enough; do a full binary gcd on __int128
            __int128 a = an, b = d;
            while (b) { __int128 t = a % b; a = b; b = t; }
            if (a > 1) { n /= a; d /= a; an = n < 0 ? -n : n; }
            (void)g64;
        }
        constexpr __int128 lim = (__int128)INT64_MAX;
        if (an > lim || d > lim)
            throw ConvergenceError("rational arithmetic overflow (denominators too large)");
        Rational r;
        r.num = (std::int64_t)n;
        r.den = (std::int64_t)d;
        return r;
    }
};

} // namespace nblab
