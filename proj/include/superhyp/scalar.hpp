#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "superhyp/errors.hpp"
#include "superhyp/rational.hpp"

namespace superhyp {

/// Named analytic functions admitting a nilpotent Taylor lift.
enum class AnalyticFn { Sqrt, Exp, Log, Cosh, Sinh, Acosh, Acos };

inline const char* name_of(AnalyticFn f) {
    switch (f) {
        case AnalyticFn::Sqrt: return "sqrt";
        case AnalyticFn::Exp: return "exp";
        case AnalyticFn::Log: return "log";
        case AnalyticFn::Cosh: return "cosh";
        case AnalyticFn::Sinh: return "sinh";
        case AnalyticFn::Acosh: return "acosh";
        case AnalyticFn::Acos: return "acos";
    }
    return "?";
}

/// Coefficient-field operations, specialized for the two algebra modes:
/// exact Gaussian rationals and complex doubles.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<GaussianRational> {
    static constexpr bool is_exact = true;
    using Real = Rational;

    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return {rat(1)}; }
    static GaussianRational from_int(long long n) { return {rat(n)}; }
    static GaussianRational from_gaussian(const GaussianRational& q) { return q; }
    static GaussianRational imaginary_unit() { return {rat(0), rat(1)}; }

    static GaussianRational conj(const GaussianRational& x) { return x.conj(); }
    static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
    static bool is_real(const GaussianRational& x) { return x.is_real(); }
    static double abs_approx(const GaussianRational& x) { return std::abs(x.to_complex()); }
    static std::complex<double> to_complex(const GaussianRational& x) { return x.to_complex(); }
    static std::string str(const GaussianRational& x) { return to_string(x); }
};

template <>
struct ScalarOps<std::complex<double>> {
    static constexpr bool is_exact = false;
    using Real = double;

    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> from_int(long long n) { return {double(n), 0.0}; }
    static std::complex<double> from_gaussian(const GaussianRational& q) { return q.to_complex(); }
    static std::complex<double> imaginary_unit() { return {0.0, 1.0}; }

    static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
    static bool is_zero(const std::complex<double>& x) { return x.real() == 0.0 && x.imag() == 0.0; }
    static bool is_real(const std::complex<double>& x) {
        return std::abs(x.imag()) <= 1e-12 * (1.0 + std::abs(x.real()));
    }
    static double abs_approx(const std::complex<double>& x) { return std::abs(x); }
    static std::complex<double> to_complex(const std::complex<double>& x) { return x; }
    static std::string str(const std::complex<double>& x) {
        if (x.imag() == 0.0) return std::to_string(x.real());
        return "(" + std::to_string(x.real()) + (x.imag() >= 0 ? "+" : "") + std::to_string(x.imag()) + "i)";
    }
};

namespace detail {

// Truncated polynomial product, keeping orders 0..order.
inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b, int order) {
    std::vector<double> out(std::size_t(order) + 1, 0.0);
    for (std::size_t i = 0; i < a.size() && i <= std::size_t(order); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size() && i + j <= std::size_t(order); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

// Series of (1 + sgn*w)^(-1/2) in w, composed with a polynomial w(t), truncated.
inline std::vector<double> inv_sqrt_series(const std::vector<double>& w, double sgn, int order) {
    std::vector<double> acc(std::size_t(order) + 1, 0.0);
    std::vector<double> wpow{1.0};
    double binom = 1.0; // binom(2m, m) / 4^m
    double alt = 1.0;   // (-sgn)^m
    for (int m = 0;; ++m) {
        // (1+x)^(-1/2) = sum (-1)^m binom(2m,m)/4^m x^m with x = sgn*w
        const double c = binom * alt;
        for (std::size_t i = 0; i < wpow.size() && i <= std::size_t(order); ++i) acc[i] += c * wpow[i];
        if (m == order) break;
        wpow = poly_mul(wpow, w, order);
        bool all_zero = true;
        for (double v : wpow)
            if (v != 0.0) { all_zero = false; break; }
        if (all_zero) break;
        binom *= double(2 * m + 1) / double(2 * m + 2);
        alt *= -sgn;
    }
    return acc;
}

} // namespace detail

/// Taylor coefficients f^(k)(body)/k! for k = 0..order.
///
/// Exact mode supports the cases whose derivative tower is rational:
/// sqrt at a rational perfect square, exp/cosh/sinh at body 0, log at body 1.
/// Everything else raises DomainError (principal branches, strict interiors).
template <class S>
std::vector<S> analytic_taylor(AnalyticFn f, const S& body, int order);

template <>
inline std::vector<GaussianRational> analytic_taylor(AnalyticFn f, const GaussianRational& body, int order) {
    if (!body.is_real()) throw DomainError("analytic lift requires a real body");
    const Rational b = body.re;
    std::vector<GaussianRational> c(std::size_t(order) + 1);
    switch (f) {
        case AnalyticFn::Sqrt: {
            if (b <= Rational(0)) throw DomainError("sqrt requires body > 0");
            auto r = exact_sqrt(b);
            if (!r) throw DomainError("sqrt body is not a perfect rational square (exact mode)");
            c[0] = GaussianRational(*r);
            for (int k = 1; k <= order; ++k)
                c[std::size_t(k)] = c[std::size_t(k) - 1] * GaussianRational(Rational(3 - 2 * k) / (Rational(2 * k) * b));
            return c;
        }
        case AnalyticFn::Exp:
        case AnalyticFn::Cosh:
        case AnalyticFn::Sinh: {
            if (b != Rational(0))
                throw DomainError(std::string(name_of(f)) + " requires body 0 in exact mode");
            Rational invfact(1);
            for (int k = 0; k <= order; ++k) {
                if (k > 0) invfact /= Rational(k);
                bool keep = f == AnalyticFn::Exp || (f == AnalyticFn::Cosh && k % 2 == 0) ||
                            (f == AnalyticFn::Sinh && k % 2 == 1);
                c[std::size_t(k)] = keep ? GaussianRational(invfact) : GaussianRational();
            }
            return c;
        }
        case AnalyticFn::Log: {
            if (b != Rational(1)) throw DomainError("log requires body 1 in exact mode");
            c[0] = GaussianRational();
            for (int k = 1; k <= order; ++k)
                c[std::size_t(k)] = GaussianRational(Rational(k % 2 == 1 ? 1 : -1, k));
            return c;
        }
        case AnalyticFn::Acosh:
        case AnalyticFn::Acos:
            throw DomainError(std::string(name_of(f)) + " has no rational derivative tower (exact mode)");
    }
    throw DomainError("unknown analytic function");
}

template <>
inline std::vector<std::complex<double>> analytic_taylor(AnalyticFn f, const std::complex<double>& body,
                                                         int order) {
    if (!ScalarOps<std::complex<double>>::is_real(body)) throw DomainError("analytic lift requires a real body");
    const double b = body.real();
    std::vector<std::complex<double>> c(std::size_t(order) + 1);
    auto from_G = [&](const std::vector<double>& g, double c0) {
        c[0] = c0;
        for (int k = 1; k <= order; ++k) c[std::size_t(k)] = g[std::size_t(k) - 1] / double(k);
    };
    switch (f) {
        case AnalyticFn::Sqrt: {
            if (!(b > 0.0)) throw DomainError("sqrt requires body > 0");
            c[0] = std::sqrt(b);
            for (int k = 1; k <= order; ++k)
                c[std::size_t(k)] = c[std::size_t(k) - 1] * (double(3 - 2 * k) / (2.0 * k * b));
            return c;
        }
        case AnalyticFn::Exp: {
            c[0] = std::exp(b);
            for (int k = 1; k <= order; ++k) c[std::size_t(k)] = c[std::size_t(k) - 1] / double(k);
            return c;
        }
        case AnalyticFn::Log: {
            if (!(b > 0.0)) throw DomainError("log requires body > 0");
            c[0] = std::log(b);
            if (order >= 1) c[1] = 1.0 / b;
            for (int k = 2; k <= order; ++k) c[std::size_t(k)] = -c[std::size_t(k) - 1] * (double(k - 1) / (double(k) * b));
            return c;
        }
        case AnalyticFn::Cosh:
        case AnalyticFn::Sinh: {
            double even = std::cosh(b), odd = std::sinh(b);
            if (f == AnalyticFn::Sinh) std::swap(even, odd);
            double fact = 1.0;
            for (int k = 0; k <= order; ++k) {
                if (k > 0) fact *= k;
                c[std::size_t(k)] = (k % 2 == 0 ? even : odd) / fact;
            }
            return c;
        }
        case AnalyticFn::Acosh: {
            if (!(b > 1.0)) throw DomainError("acosh requires body > 1");
            const double A = b * b - 1.0;
            // ((b+t)^2 - 1)^(-1/2) = A^(-1/2) (1 + w)^(-1/2), w = (2bt + t^2)/A
            std::vector<double> w{0.0, 2.0 * b / A, 1.0 / A};
            auto S = detail::inv_sqrt_series(w, +1.0, order);
            for (double& v : S) v /= std::sqrt(A);
            from_G(S, std::acosh(b));
            return c;
        }
        case AnalyticFn::Acos: {
            if (!(std::abs(b) < 1.0)) throw DomainError("acos requires |body| < 1");
            const double A = 1.0 - b * b;
            // -(1 - (b+t)^2)^(-1/2) = -A^(-1/2) (1 - w)^(-1/2), w = (2bt + t^2)/A
            std::vector<double> w{0.0, 2.0 * b / A, 1.0 / A};
            auto S = detail::inv_sqrt_series(w, -1.0, order);
            for (double& v : S) v /= -std::sqrt(A);
            from_G(S, std::acos(b));
            return c;
        }
    }
    throw DomainError("unknown analytic function");
}

using ExactScalar = GaussianRational;
using FloatScalar = std::complex<double>;

} // namespace superhyp
