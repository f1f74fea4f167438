#pragma once

#include <cstdint>
#include <vector>

#include "superhyp/grassmann.hpp"

namespace superhyp {

/// Deterministic 64-bit generator (splitmix64). Not std:: distributions, so
/// that seeded runs are byte-identical across platforms and compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    /// Uniform integer in [lo, hi].
    long long range(long long lo, long long hi) {
        return lo + (long long)below(std::uint64_t(hi - lo + 1));
    }

    /// Uniform double in [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

/// Small-magnitude rational, |num| <= 8, 1 <= den <= 8; keeps exact products compact.
inline Rational random_rational(Rng& rng, bool nonzero = false) {
    long long num = rng.range(-8, 8);
    while (nonzero && num == 0) num = rng.range(-8, 8);
    long long den = rng.range(1, 8);
    return rat(num, den);
}

inline GaussianRational random_gaussian(Rng& rng, bool nonzero_body = false) {
    return {random_rational(rng, nonzero_body), random_rational(rng)};
}

template <class S>
GrassmannNumber<S> g_scalar(const AlgebraContext& ctx, const GaussianRational& q) {
    return GrassmannNumber<S>::scalar(ctx, ScalarOps<S>::from_gaussian(q));
}

/// Random odd combination over the given 1-based generator indices,
/// roughly two nonzero complex coefficients.
template <class S>
GrassmannNumber<S> random_odd(const AlgebraContext& ctx, Rng& rng, const std::vector<int>& indices) {
    GrassmannNumber<S> out = GrassmannNumber<S>::scalar(ctx, ScalarOps<S>::zero());
    for (int i : indices) {
        if (rng.below(indices.size()) < 2) {
            GaussianRational c = random_gaussian(rng);
            out += GrassmannNumber<S>::monomial(ctx, {i}, ScalarOps<S>::from_gaussian(c));
        }
    }
    return out;
}

/// Random conjugation-fixed odd combination (Majorana fermion).
template <class S>
GrassmannNumber<S> random_majorana(const AlgebraContext& ctx, Rng& rng, const std::vector<int>& indices) {
    GrassmannNumber<S> out = GrassmannNumber<S>::scalar(ctx, ScalarOps<S>::zero());
    for (int i : indices) {
        if (rng.below(indices.size()) < 2) {
            GaussianRational c{random_rational(rng), rat(0)};
            out += GrassmannNumber<S>::monomial(ctx, {i}, ScalarOps<S>::from_gaussian(c));
        }
    }
    return out;
}

/// Random even real combination of degree-2 monomials (a soul perturbation).
template <class S>
GrassmannNumber<S> random_even_soul(const AlgebraContext& ctx, Rng& rng, const std::vector<int>& indices) {
    GrassmannNumber<S> out = GrassmannNumber<S>::scalar(ctx, ScalarOps<S>::zero());
    for (std::size_t i = 0; i + 1 < indices.size(); i += 2) {
        if (rng.below(2) == 0) {
            GaussianRational c{random_rational(rng), rat(0)};
            out += GrassmannNumber<S>::monomial(ctx, {indices[i], indices[i + 1]},
                                                ScalarOps<S>::from_gaussian(c));
        }
    }
    return out;
}

} // namespace superhyp
