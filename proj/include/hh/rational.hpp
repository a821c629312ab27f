#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hh {

// Exact rational on 128-bit integers; wide enough for the binomial
// coefficients of change-rate polynomials on deep cycle circuits.
struct Rational {
    using int128 = __int128;
    int128 num = 0;
    int128 den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(int128 n, int128 d) : num(n), den(d) { normalize(); }

    static int128 gcd128(int128 a, int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize() {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        int128 g = gcd128(num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static int128 checked_mul(int128 a, int128 b) {
        int128 r;
        if (__builtin_mul_overflow(a, b, &r))
            throw std::overflow_error("rational: multiply overflow");
        return r;
    }

    Rational operator+(const Rational& o) const {
        return Rational(checked_mul(num, o.den) + checked_mul(o.num, den),
                        checked_mul(den, o.den));
    }
    Rational operator-(const Rational& o) const {
        return Rational(checked_mul(num, o.den) - checked_mul(o.num, den),
                        checked_mul(den, o.den));
    }
    Rational operator*(const Rational& o) const {
        Rational a(num, o.den), b(o.num, den);  // cross-reduce first
        return Rational(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
    }
    Rational operator-() const { return Rational(-num, den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    double value() const {
        return double((long double)(num) / (long double)(den));
    }

    std::string str() const {
        auto digits = [](int128 v) {
            if (v == 0) return std::string("0");
            bool neg = v < 0;
            if (neg) v = -v;
            std::string s;
            while (v) {
                s += char('0' + int(v % 10));
                v /= 10;
            }
            if (neg) s += '-';
            return std::string(s.rbegin(), s.rend());
        };
        std::string s = digits(num);
        if (den != 1) s += "/" + digits(den);
        return s;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace hh
