#include <catch2/catch.hpp>

#include <algorithm>
#include <map>
#include <vector>

#include "superhyp/grassmann.hpp"
#include "superhyp/random.hpp"

using namespace superhyp;
using S = ExactScalar;
using G = GrassmannNumber<S>;
using F = FloatScalar;
using GF = GrassmannNumber<F>;

namespace {

// Independent multiplication oracle: index lists with insertion-sort sign
// counting, structurally unrelated to the bitmask path under test.
using NaiveTerms = std::map<std::vector<int>, GaussianRational>;

NaiveTerms naive_of(const G& g) {
    NaiveTerms out;
    for (const auto& [mask, c] : g.terms()) {
        std::vector<int> idx;
        std::uint64_t m = mask;
        while (m) {
            idx.push_back(std::countr_zero(m) + 1);
            m &= m - 1;
        }
        out[idx] = c;
    }
    return out;
}

NaiveTerms naive_mul(const NaiveTerms& a, const NaiveTerms& b) {
    NaiveTerms out;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b) {
            std::vector<int> concat = ia;
            concat.insert(concat.end(), ib.begin(), ib.end());
            // insertion sort, counting transpositions
            int swaps = 0;
            bool dead = false;
            for (std::size_t i = 1; i < concat.size() && !dead; ++i) {
                std::size_t j = i;
                while (j > 0 && concat[j - 1] > concat[j]) {
                    std::swap(concat[j - 1], concat[j]);
                    ++swaps;
                    --j;
                }
                if (j > 0 && concat[j - 1] == concat[j]) dead = true;
            }
            if (dead || (concat.size() > 1 && std::adjacent_find(concat.begin(), concat.end()) != concat.end()))
                continue;
            GaussianRational term = ca * cb;
            if (swaps % 2 == 1) term = -term;
            auto [it, fresh] = out.try_emplace(concat, term);
            if (!fresh) it->second += term;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

G random_element(const AlgebraContext& ctx, Rng& rng, int max_terms = 5) {
    G out = G::scalar(ctx, random_gaussian(rng));
    for (int t = 0; t < max_terms; ++t) {
        std::uint64_t mask = rng.next() & ctx.full_mask();
        G term = G::scalar(ctx, random_gaussian(rng));
        std::uint64_t m = mask;
        while (m) {
            term = term * G::generator(ctx, std::countr_zero(m) + 1);
            m &= m - 1;
        }
        out += term;
    }
    return out;
}

} // namespace

TEST_CASE("addition follows the coefficient-wise oracle") {
    AlgebraContext ctx(4);
    auto t1 = G::generator(ctx, 1);
    auto t2 = G::generator(ctx, 2);
    auto one = G::scalar(ctx, S(rat(1)));

    SECTION("additive inverse") { REQUIRE((t1 + (-t1)).is_zero()); }
    SECTION("cancellation") {
        auto t12 = t1 * t2;
        REQUIRE((one + t12) + (one - t12) == G::scalar(ctx, S(rat(2))));
    }
    SECTION("coefficient-wise sum") {
        auto lhs = (G::scalar(ctx, S(rat(3))) + G::scalar(ctx, S(rat(2))) * t1) + (t1 + t2);
        auto rhs = G::scalar(ctx, S(rat(3))) + G::scalar(ctx, S(rat(3))) * t1 + t2;
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("multiplication matches the sign-counting oracle") {
    AlgebraContext ctx(6);
    auto t1 = G::generator(ctx, 1);
    auto t2 = G::generator(ctx, 2);

    SECTION("anticommutation and nilpotency") {
        REQUIRE((t1 * t2 + t2 * t1).is_zero());
        REQUIRE((t1 * t1).is_zero());
    }
    SECTION("expansion example") {
        auto lhs = (t1 + t2) * (t1 - t2);
        REQUIRE(lhs == G::scalar(ctx, S(rat(-2))) * (t1 * t2));
    }
    SECTION("random products equal the naive oracle") {
        Rng rng(2024);
        for (int trial = 0; trial < 60; ++trial) {
            auto a = random_element(ctx, rng);
            auto b = random_element(ctx, rng);
            REQUIRE(naive_of(a * b) == naive_mul(naive_of(a), naive_of(b)));
        }
    }
}

TEST_CASE("conjugation fixes generators and preserves factor order") {
    AlgebraContext ctx(4);
    auto t1 = G::generator(ctx, 1);
    auto t2 = G::generator(ctx, 2);
    S i_unit{rat(0), rat(1)};

    REQUIRE((i_unit * t1).conjugate() == (-i_unit) * t1);
    REQUIRE((t1 * t2).conjugate() == t1 * t2);

    SECTION("conj(alpha) * alpha is purely imaginary") {
        auto alpha = t1 + i_unit * t2;
        auto prod = alpha.conjugate() * alpha;
        REQUIRE(prod == (S{rat(0), rat(2)}) * (t1 * t2));
    }
    SECTION("involution and multiplicativity on random data") {
        Rng rng(7);
        for (int trial = 0; trial < 40; ++trial) {
            auto a = random_element(ctx, rng);
            auto b = random_element(ctx, rng);
            REQUIRE(a.conjugate().conjugate() == a);
            REQUIRE((a * b).conjugate() == a.conjugate() * b.conjugate());
        }
    }
}

TEST_CASE("algebra laws on random triples") {
    AlgebraContext ctx(6);
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_element(ctx, rng, 4);
        auto b = random_element(ctx, rng, 4);
        auto c = random_element(ctx, rng, 4);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("supercommutativity for parity-homogeneous elements") {
    AlgebraContext ctx(6);
    Rng rng(13);
    std::vector<int> idx{1, 2, 3, 4, 5, 6};
    for (int trial = 0; trial < 30; ++trial) {
        auto a_odd = random_odd<S>(ctx, rng, idx);
        auto b_odd = random_odd<S>(ctx, rng, idx);
        auto a_even = random_even_soul<S>(ctx, rng, idx) + G::scalar(ctx, random_gaussian(rng));
        REQUIRE(a_odd * b_odd == -(b_odd * a_odd));
        REQUIRE(a_even * a_odd == a_odd * a_even);
    }
}

TEST_CASE("inversion by the nilpotent geometric series") {
    AlgebraContext ctx(4);
    auto t1 = G::generator(ctx, 1);
    auto t2 = G::generator(ctx, 2);
    auto one = G::scalar(ctx, S(rat(1)));
    auto t12 = t1 * t2;

    REQUIRE((one + t12).inverse() == one - t12);
    SECTION("series oracle for body 2") {
        auto x = G::scalar(ctx, S(rat(2))) + t12;
        auto expect = G::scalar(ctx, S(rat(1, 2))) - G::scalar(ctx, S(rat(1, 4))) * t12;
        REQUIRE(x.inverse() == expect);
        REQUIRE(x * x.inverse() == one);
    }
    SECTION("zero body rejected") { REQUIRE_THROWS_AS(t1.inverse(), ZeroBodyError); }
    SECTION("inverse is exact on 200 random invertible elements") {
        AlgebraContext big(6);
        Rng rng(17);
        auto unit = G::scalar(big, S(rat(1)));
        int done = 0;
        while (done < 200) {
            auto a = random_element(big, rng);
            if (ScalarOps<S>::is_zero(a.body())) continue;
            REQUIRE(a.inverse() * a == unit);
            ++done;
        }
    }
}

TEST_CASE("analytic lifts") {
    AlgebraContext ctx(4);
    auto t1 = G::generator(ctx, 1);
    auto t2 = G::generator(ctx, 2);
    auto one = G::scalar(ctx, S(rat(1)));
    auto t12 = t1 * t2;

    SECTION("sqrt squares back exactly") {
        auto x = one + G::scalar(ctx, S(rat(2))) * t12;
        auto r = lift_analytic(AnalyticFn::Sqrt, x);
        REQUIRE(r == one + t12);
        REQUIRE(r * r == x);
    }
    SECTION("domain and parity errors") {
        REQUIRE_THROWS_AS(lift_analytic(AnalyticFn::Sqrt, -one + t12), DomainError);
        REQUIRE_THROWS_AS(lift_analytic(AnalyticFn::Sqrt, t1), OddInputError);
    }
    SECTION("acosh . cosh round trip, float mode") {
        AlgebraContext fctx(4);
        auto u1 = GF::generator(fctx, 1);
        auto u2 = GF::generator(fctx, 2);
        auto u3 = GF::generator(fctx, 3);
        auto u4 = GF::generator(fctx, 4);
        auto s = GF::scalar(fctx, F(1.0)) + F(0.3) * (u1 * u2) + F(-0.125) * (u3 * u4) +
                 F(0.05) * (u1 * u2 * u3 * u4);
        auto back = lift_analytic(AnalyticFn::Acosh, lift_analytic(AnalyticFn::Cosh, s));
        REQUIRE(max_abs_diff(back, s) < 1e-12);
    }
    SECTION("exp is a homomorphism on commuting even elements") {
        // exact when the bodies are zero, so the series terminate
        auto a = G::scalar(ctx, S(rat(1, 2))) * t12;
        auto b = G::scalar(ctx, S(rat(2, 3))) * (G::generator(ctx, 3) * G::generator(ctx, 4));
        auto lhs = lift_analytic(AnalyticFn::Exp, a + b);
        auto rhs = lift_analytic(AnalyticFn::Exp, a) * lift_analytic(AnalyticFn::Exp, b);
        REQUIRE(lhs == rhs);

        AlgebraContext fctx(6);
        Rng rng(23);
        std::vector<int> idx{1, 2, 3, 4, 5, 6};
        for (int trial = 0; trial < 10; ++trial) {
            auto fa = GF::scalar(fctx, F(0.25 + rng.uniform())) + random_even_soul<F>(fctx, rng, idx);
            auto fb = GF::scalar(fctx, F(0.25 + rng.uniform())) + random_even_soul<F>(fctx, rng, idx);
            auto flhs = lift_analytic(AnalyticFn::Exp, fa + fb);
            auto frhs = lift_analytic(AnalyticFn::Exp, fa) * lift_analytic(AnalyticFn::Exp, fb);
            REQUIRE(max_abs_diff(flhs, frhs) < 1e-12 * (1.0 + flhs.max_abs_coeff()));
        }
    }
}

TEST_CASE("body order relation, sign, absolute value") {
    AlgebraContext ctx(4);
    auto t1 = G::generator(ctx, 1);
    auto t2 = G::generator(ctx, 2);
    auto t12 = t1 * t2;
    auto one = G::scalar(ctx, S(rat(1)));
    auto two = G::scalar(ctx, S(rat(2)));

    REQUIRE(compare(one + t12, two) == std::weak_ordering::less);
    REQUIRE(compare(t12, G::zero()) == std::weak_ordering::equivalent);

    auto x = G::scalar(ctx, S(rat(-2))) + t12;
    REQUIRE(sign(x) == -1);
    REQUIRE(abs_value(x) == two - t12);

    auto complex_body = G::scalar(ctx, S{rat(0), rat(1)});
    REQUIRE_THROWS_AS(compare(complex_body, one), DomainError);
}

TEST_CASE("context discipline") {
    AlgebraContext a(4), b(4);
    auto x = G::generator(a, 1);
    auto y = G::generator(b, 1);
    REQUIRE_THROWS_AS(x + y, ContextMismatchError);
    REQUIRE_THROWS_AS(AlgebraContext(65), DomainError);
}
