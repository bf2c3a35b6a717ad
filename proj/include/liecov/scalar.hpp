#pragma once

// Exact scalar fields: Q as GMP rationals, Q(i) as Gaussian rationals.
// Everything downstream (polynomials, linear algebra) is templated on the
// field K and only uses the operations defined here.

#include <gmpxx.h>

#include <ostream>
#include <string>

#include "liecov/errors.hpp"

namespace liecov {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& a) { return sgn(a) == 0; }
inline Rational conj(const Rational& a) { return a; }
inline double to_double(const Rational& a) { return a.get_d(); }
inline std::string to_string(const Rational& a) { return a.get_str(); }

// Accepts "p/q", integers, and finite decimals like "-1.25".
inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw MalformedInput("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos)
            throw MalformedInput("rational literal mixes '.' and '/': " + text);
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        if (frac_len == 0) throw MalformedInput("trailing dot in rational literal: " + text);
        mpz_class num, den(1);
        if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
            throw MalformedInput("bad decimal literal: " + text);
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw MalformedInput("bad rational literal: " + text);
    if (sgn(mpq_denref(r.get_mpq_t())) == 0)
        throw MalformedInput("zero denominator: " + text);
    r.canonicalize();
    return r;
}

// a + b*i with exact rational parts.
struct Gaussian {
    Rational re, im;

    Gaussian() : re(0), im(0) {}
    Gaussian(const Rational& r) : re(r), im(0) {}  // NOLINT: implicit lift Q -> Q(i)
    Gaussian(long n) : re(n), im(0) {}             // NOLINT
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Gaussian unit_i() { return Gaussian(Rational(0), Rational(1)); }

    Gaussian operator-() const { return Gaussian(-re, -im); }
    Gaussian& operator+=(const Gaussian& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Gaussian& operator-=(const Gaussian& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Gaussian& operator*=(const Gaussian& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
    friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
    friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
    friend bool operator==(const Gaussian& a, const Gaussian& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

inline bool is_zero(const Gaussian& a) { return is_zero(a.re) && is_zero(a.im); }
inline Gaussian conj(const Gaussian& a) { return Gaussian(a.re, -a.im); }

inline Gaussian inverse(const Gaussian& a) {
    Rational n = a.re * a.re + a.im * a.im;
    if (is_zero(n)) throw std::domain_error("division by zero Gaussian rational");
    return Gaussian(a.re / n, -a.im / n);
}

inline Gaussian operator/(const Gaussian& a, const Gaussian& b) { return a * inverse(b); }

inline Gaussian& operator/=(Gaussian& a, const Gaussian& b) { return a = a / b; }

inline Rational inverse(const Rational& a) {
    if (is_zero(a)) throw std::domain_error("division by zero rational");
    return Rational(1) / a;
}

// Printed as "p/q" when real, "p/q+r/s i" otherwise (matching the parser).
inline std::string to_string(const Gaussian& a) {
    if (is_zero(a.im)) return a.re.get_str();
    std::string s = a.re.get_str();
    if (sgn(a.im) >= 0) s += "+";
    s += a.im.get_str();
    s += " i";
    return s;
}

inline Gaussian parse_gaussian(const std::string& text) {
    std::string s = text;
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    bool imaginary = false;
    if (!s.empty() && (s.back() == 'i' || s.back() == 'I')) {
        imaginary = true;
        s.pop_back();
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    }
    if (!imaginary) return Gaussian(parse_rational(s));
    // Split "a+b" / "a-b" at the last sign that is not a leading sign or part of "/".
    for (std::size_t pos = s.size(); pos-- > 1;) {
        if ((s[pos] == '+' || s[pos] == '-') && s[pos - 1] != '/' && s[pos - 1] != '+' &&
            s[pos - 1] != '-') {
            std::string head = s.substr(0, pos);
            std::string tail = s.substr(pos);
            if (tail == "+" || tail == "-") tail += "1";
            return Gaussian(parse_rational(head), parse_rational(tail));
        }
    }
    if (s.empty() || s == "+") return Gaussian(Rational(0), Rational(1));
    if (s == "-") return Gaussian(Rational(0), Rational(-1));
    return Gaussian(Rational(0), parse_rational(s));
}

inline std::ostream& operator<<(std::ostream& os, const Gaussian& a) {
    return os << to_string(a);
}

template <class K>
struct FieldTag;

template <>
struct FieldTag<Rational> {
    static constexpr const char* name = "Q";
};

template <>
struct FieldTag<Gaussian> {
    static constexpr const char* name = "Q(i)";
};

inline Gaussian to_gaussian(const Rational& a) { return Gaussian(a); }

}  // namespace liecov
