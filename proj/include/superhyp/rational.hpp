#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "superhyp/errors.hpp"

namespace superhyp {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline Rational rat(long long num, long long den = 1) {
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) {
    boost::multiprecision::cpp_rational q(r.numerator(), r.denominator());
    return q.convert_to<double>();
}

/// Integer square root if n is a perfect square.
inline std::optional<BigInt> exact_isqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

/// Exact square root of a non-negative rational, when it exists in Q.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < Rational(0)) return std::nullopt;
    auto n = exact_isqrt(r.numerator());
    auto d = exact_isqrt(r.denominator());
    if (n && d) return Rational(*n, *d);
    return std::nullopt;
}

inline std::string to_string(const Rational& r) {
    std::string s = r.numerator().str();
    if (r.denominator() != 1) {
        s += "/";
        s += r.denominator().str();
    }
    return s;
}

/// Parses "p", "-p", "p/q".
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s), BigInt(1));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw SerializationError("zero denominator in rational: " + s);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw SerializationError("malformed rational: " + s);
    }
}

/// Exact complex number with rational real and imaginary parts.
/// The coefficient field of the exact-mode Grassmann algebra.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long long n) : re(rat(n)) {}

    bool is_zero() const { return re == Rational(0) && im == Rational(0); }
    bool is_real() const { return im == Rational(0); }

    GaussianRational conj() const { return {re, -im}; }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational norm = b.re * b.re + b.im * b.im;
        if (norm == Rational(0)) throw DomainError("division by zero GaussianRational");
        GaussianRational num = a * b.conj();
        return {num.re / norm, num.im / norm};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline std::string to_string(const GaussianRational& q) {
    if (q.im == Rational(0)) return to_string(q.re);
    return "(" + to_string(q.re) + (q.im > Rational(0) ? "+" : "") + to_string(q.im) + "i)";
}

} // namespace superhyp
