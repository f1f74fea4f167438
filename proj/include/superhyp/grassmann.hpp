#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "superhyp/errors.hpp"
#include "superhyp/scalar.hpp"

namespace superhyp {

/// Shared description of a finitely generated Grassmann algebra: the number of
/// anticommuting generators (at most 64, so a monomial fits a machine word)
/// and optional display names. Read-only after construction; every number in
/// one expression must come from the same context.
class AlgebraContext {
  public:
    explicit AlgebraContext(int generator_count, std::vector<std::string> names = {})
        : n_(generator_count), names_(std::move(names)) {
        if (generator_count < 0 || generator_count > 64)
            throw DomainError("generator count must be between 0 and 64");
    }

    AlgebraContext(const AlgebraContext&) = delete;
    AlgebraContext& operator=(const AlgebraContext&) = delete;

    int generator_count() const { return n_; }

    std::string name(int index1) const {
        if (index1 >= 1 && std::size_t(index1) <= names_.size()) return names_[std::size_t(index1) - 1];
        return "t" + std::to_string(index1);
    }

    std::uint64_t full_mask() const { return n_ == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << n_) - 1); }

  private:
    int n_;
    std::vector<std::string> names_;
};

namespace detail {

/// Sign of the permutation sorting the concatenation [sorted a | sorted b]:
/// counts pairs (i in a, j in b) with i > j.
inline int reorder_sign(std::uint64_t a, std::uint64_t b) {
    int swaps = 0;
    a >>= 1;
    while (a) {
        swaps += std::popcount(a & b);
        a >>= 1;
    }
    return (swaps & 1) ? -1 : 1;
}

} // namespace detail

/// Sparse element of the Grassmann algebra over an AlgebraContext.
///
/// Monomials are bitmasks of generator indices; the map holds no zero
/// coefficients (canonical form), so equality is structural. Zero is the
/// empty map and is compatible with any context. Values are immutable in
/// the sense that every operation returns a fresh number.
template <class S>
class GrassmannNumber {
  public:
    using Scalar = S;
    using Ops = ScalarOps<S>;
    using TermMap = std::map<std::uint64_t, S>;

    GrassmannNumber() = default;

    static GrassmannNumber zero() { return GrassmannNumber(); }

    static GrassmannNumber scalar(const AlgebraContext& ctx, S value) {
        GrassmannNumber g;
        g.ctx_ = &ctx;
        if (!Ops::is_zero(value)) g.terms_.emplace(0, std::move(value));
        return g;
    }

    /// theta_i, 1-based index.
    static GrassmannNumber generator(const AlgebraContext& ctx, int index1) {
        return monomial(ctx, {index1}, Ops::one());
    }

    /// Product theta_{i1} theta_{i2} ... for strictly increasing 1-based indices.
    static GrassmannNumber monomial(const AlgebraContext& ctx, std::initializer_list<int> indices1, S coeff) {
        GrassmannNumber g;
        g.ctx_ = &ctx;
        std::uint64_t mask = 0;
        int prev = 0;
        for (int i : indices1) {
            if (i < 1 || i > ctx.generator_count()) throw DomainError("generator index out of range");
            if (i <= prev) throw DomainError("monomial indices must be strictly increasing");
            mask |= std::uint64_t(1) << (i - 1);
            prev = i;
        }
        if (!Ops::is_zero(coeff)) g.terms_.emplace(mask, std::move(coeff));
        return g;
    }

    const AlgebraContext* context() const { return ctx_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    S body() const {
        auto it = terms_.find(0);
        return it == terms_.end() ? Ops::zero() : it->second;
    }

    GrassmannNumber soul() const {
        GrassmannNumber g(*this);
        g.terms_.erase(0);
        return g;
    }

    /// True when every monomial has even degree (zero counts as even).
    bool is_even() const {
        for (const auto& [m, c] : terms_)
            if (std::popcount(m) & 1) return false;
        return true;
    }

    /// True when every monomial has odd degree (zero counts as odd too).
    bool is_odd() const {
        for (const auto& [m, c] : terms_)
            if (!(std::popcount(m) & 1)) return false;
        return true;
    }

    GrassmannNumber even_part() const {
        GrassmannNumber g;
        g.ctx_ = ctx_;
        for (const auto& [m, c] : terms_)
            if (!(std::popcount(m) & 1)) g.terms_.emplace(m, c);
        return g;
    }

    GrassmannNumber odd_part() const {
        GrassmannNumber g;
        g.ctx_ = ctx_;
        for (const auto& [m, c] : terms_)
            if (std::popcount(m) & 1) g.terms_.emplace(m, c);
        return g;
    }

    /// Complex-conjugates every coefficient. Generators are real and the
    /// monomial order is fixed: conj(theta_i theta_j) = theta_i theta_j.
    /// (This order-preserving convention is forced by the pure-imaginary
    /// identities the action satisfies; see README.)
    GrassmannNumber conjugate() const {
        GrassmannNumber g;
        g.ctx_ = ctx_;
        for (const auto& [m, c] : terms_) g.terms_.emplace(m, Ops::conj(c));
        return g;
    }

    /// True when conjugate() == *this, i.e. all coefficients are real.
    bool is_real() const {
        for (const auto& [m, c] : terms_)
            if (!Ops::is_real(c)) return false;
        return true;
    }

    friend GrassmannNumber operator+(const GrassmannNumber& a, const GrassmannNumber& b) {
        const AlgebraContext* ctx = merged_context(a, b);
        GrassmannNumber g;
        g.ctx_ = ctx;
        g.terms_ = a.terms_;
        for (const auto& [m, c] : b.terms_) {
            auto [it, fresh] = g.terms_.try_emplace(m, c);
            if (!fresh) {
                it->second += c;
                if (Ops::is_zero(it->second)) g.terms_.erase(it);
            }
        }
        return g;
    }

    friend GrassmannNumber operator-(const GrassmannNumber& a, const GrassmannNumber& b) { return a + (-b); }

    friend GrassmannNumber operator-(const GrassmannNumber& a) {
        GrassmannNumber g;
        g.ctx_ = a.ctx_;
        for (const auto& [m, c] : a.terms_) g.terms_.emplace(m, -c);
        return g;
    }

    friend GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b) {
        const AlgebraContext* ctx = merged_context(a, b);
        GrassmannNumber g;
        g.ctx_ = ctx;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue; // repeated generator annihilates the term
                S prod = ca * cb;
                if (detail::reorder_sign(ma, mb) < 0) prod = -prod;
                const std::uint64_t m = ma | mb;
                auto [it, fresh] = g.terms_.try_emplace(m, prod);
                if (!fresh) {
                    it->second += prod;
                    if (Ops::is_zero(it->second)) g.terms_.erase(it);
                }
            }
        }
        return g;
    }

    friend GrassmannNumber operator*(const S& s, const GrassmannNumber& a) {
        GrassmannNumber g;
        g.ctx_ = a.ctx_;
        if (Ops::is_zero(s)) return g;
        for (const auto& [m, c] : a.terms_) {
            S prod = s * c;
            if (!Ops::is_zero(prod)) g.terms_.emplace(m, prod);
        }
        return g;
    }
    friend GrassmannNumber operator*(const GrassmannNumber& a, const S& s) { return s * a; }

    GrassmannNumber& operator+=(const GrassmannNumber& o) { return *this = *this + o; }
    GrassmannNumber& operator-=(const GrassmannNumber& o) { return *this = *this - o; }
    GrassmannNumber& operator*=(const GrassmannNumber& o) { return *this = *this * o; }

    friend bool operator==(const GrassmannNumber& a, const GrassmannNumber& b) {
        if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_) return false;
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const GrassmannNumber& a, const GrassmannNumber& b) { return !(a == b); }

    /// a^{-1} with a * a^{-1} = 1 exactly; the nilpotent geometric series
    /// body^{-1} sum_k (-soul/body)^k, which terminates structurally.
    GrassmannNumber inverse() const {
        S b = body();
        if (Ops::is_zero(b)) throw ZeroBodyError();
        S binv = Ops::one() / b;
        GrassmannNumber u = soul() * binv; // nilpotent
        GrassmannNumber acc = scalar_like(*this, Ops::one());
        GrassmannNumber pow = scalar_like(*this, Ops::one());
        const int max_iter = ctx_ ? ctx_->generator_count() + 1 : 1;
        for (int k = 1; k <= max_iter; ++k) {
            pow = pow * u;
            if (pow.is_zero()) break;
            acc = (k % 2 == 1) ? acc - pow : acc + pow;
        }
        return acc * binv;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += Ops::str(c);
            std::uint64_t mm = m;
            while (mm) {
                int i = std::countr_zero(mm);
                out += "*" + (ctx_ ? ctx_->name(i + 1) : "t" + std::to_string(i + 1));
                mm &= mm - 1;
            }
        }
        return out;
    }

    /// Largest |coefficient| as a double; 0 for the zero element.
    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [mask, c] : terms_) m = std::max(m, Ops::abs_approx(c));
        return m;
    }

  private:
    static const AlgebraContext* merged_context(const GrassmannNumber& a, const GrassmannNumber& b) {
        if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_) throw ContextMismatchError();
        return a.ctx_ ? a.ctx_ : b.ctx_;
    }

    static GrassmannNumber scalar_like(const GrassmannNumber& proto, S value) {
        GrassmannNumber g;
        g.ctx_ = proto.ctx_;
        if (!Ops::is_zero(value)) g.terms_.emplace(0, std::move(value));
        return g;
    }

    const AlgebraContext* ctx_ = nullptr;
    TermMap terms_;
};

/// Lift of a named analytic function through its Taylor series in the soul:
/// f(body + soul) = sum_k f^(k)(body) soul^k / k!, a finite sum by nilpotency.
template <class S>
GrassmannNumber<S> lift_analytic(AnalyticFn f, const GrassmannNumber<S>& a) {
    if (!a.is_even()) throw OddInputError();
    const AlgebraContext* ctx = a.context();
    if (!ctx) throw DomainError("analytic lift requires a context-bound element");
    S b = a.body();
    GrassmannNumber<S> s = a.soul();
    std::vector<GrassmannNumber<S>> pows;
    GrassmannNumber<S> p = s;
    const int cap = ctx->generator_count() / 2 + 1;
    for (int k = 0; k < cap && !p.is_zero(); ++k) {
        pows.push_back(p);
        p = p * s;
    }
    auto coeffs = analytic_taylor<S>(f, b, int(pows.size()));
    GrassmannNumber<S> out = GrassmannNumber<S>::scalar(*ctx, coeffs[0]);
    for (std::size_t k = 0; k < pows.size(); ++k) out += pows[k] * coeffs[k + 1];
    return out;
}

/// The section-1.1 order relation: a <= b iff body(a) <= body(b).
/// Bodies must be real; this is a weak ordering of elements.
template <class S>
std::weak_ordering compare(const GrassmannNumber<S>& a, const GrassmannNumber<S>& b) {
    S ba = a.body(), bb = b.body();
    if (!ScalarOps<S>::is_real(ba) || !ScalarOps<S>::is_real(bb))
        throw DomainError("order relation requires real bodies");
    if constexpr (ScalarOps<S>::is_exact) {
        if (ba.re < bb.re) return std::weak_ordering::less;
        if (bb.re < ba.re) return std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    } else {
        double x = ba.real(), y = bb.real();
        if (x < y) return std::weak_ordering::less;
        if (y < x) return std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    }
}

/// sign(a) of a body-nonzero element, per the order relation.
template <class S>
int sign(const GrassmannNumber<S>& a) {
    S b = a.body();
    if (!ScalarOps<S>::is_real(b)) throw DomainError("sign requires a real body");
    if (ScalarOps<S>::is_zero(b)) throw DomainError("sign of a zero-body element is undefined");
    if constexpr (ScalarOps<S>::is_exact)
        return b.re > Rational(0) ? 1 : -1;
    else
        return b.real() > 0.0 ? 1 : -1;
}

/// |a| = sign(a) * a.
template <class S>
GrassmannNumber<S> abs_value(const GrassmannNumber<S>& a) {
    return sign(a) > 0 ? a : -a;
}

/// Max |coefficient difference| between two numbers (as doubles); the test
/// and float-mode tolerance metric.
template <class S>
double max_abs_diff(const GrassmannNumber<S>& a, const GrassmannNumber<S>& b) {
    return (a - b).max_abs_coeff();
}

} // namespace superhyp
