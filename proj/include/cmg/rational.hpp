#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cmg {

/// Exact rational arithmetic on int64 with int128 intermediates.
/// Throws std::overflow_error instead of silently wrapping.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    static std::int64_t narrow(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<std::int64_t>(v);
    }

    static Rational make128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        Rational r;
        r.num = narrow(n);
        r.den = narrow(d);
        if (r.num == 0) r.den = 1;
        return r;
    }

    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    Rational operator+(const Rational& o) const {
        return make128((__int128)num * o.den + (__int128)o.num * den, (__int128)den * o.den);
    }
    Rational operator-(const Rational& o) const {
        return make128((__int128)num * o.den - (__int128)o.num * den, (__int128)den * o.den);
    }
    Rational operator*(const Rational& o) const {
        return make128((__int128)num * o.num, (__int128)den * o.den);
    }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::domain_error("rational: division by zero");
        return make128((__int128)num * o.den, (__int128)den * o.num);
    }
    Rational operator-() const { Rational r; r.num = -num; r.den = den; return r; }

    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return (__int128)num * o.den < (__int128)o.num * den;
    }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    Rational abs() const { return num < 0 ? -*this : *this; }

    Rational pow(unsigned k) const {
        Rational r(1);
        for (unsigned i = 0; i < k; ++i) r *= *this;
        return r;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    /// Parses "p/q", plain integers, and decimal strings like "0.25" (exactly).
    static Rational parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("rational: empty string");
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            std::int64_t n = std::stoll(s.substr(0, slash));
            std::int64_t d = std::stoll(s.substr(slash + 1));
            return Rational(n, d);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(s));
        bool neg = s[0] == '-';
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (fp.size() > 18) throw std::invalid_argument("rational: too many decimal digits");
        __int128 d = 1;
        for (size_t i = 0; i < fp.size(); ++i) d *= 10;
        __int128 n = (__int128)std::stoll(ip.empty() || ip == "-" ? "0" : ip) * d;
        __int128 f = fp.empty() ? 0 : std::stoll(fp);
        n = neg ? n - f : n + f;
        return make128(n, d);
    }
};

inline Rational rat(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

} // namespace cmg
