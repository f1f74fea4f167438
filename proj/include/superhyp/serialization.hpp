#pragma once

#include <json.hpp>

#include "superhyp/minkowski.hpp"

namespace superhyp {

using Json = nlohmann::json;

namespace detail {

inline Json scalar_to_json_part(const Rational& r) { return to_string(r); }
inline Json scalar_to_json_part(double d) { return d; }

} // namespace detail

/// GrassmannNumber <-> JSON: a list of {indices: [1-based ints], re, im};
/// exact coefficients serialize as rational strings, float ones as numbers.
/// Round-trips are exact in exact mode.
template <class S>
Json to_json(const GrassmannNumber<S>& g) {
    Json arr = Json::array();
    for (const auto& [mask, coeff] : g.terms()) {
        Json term;
        Json idx = Json::array();
        std::uint64_t mm = mask;
        while (mm) {
            idx.push_back(std::countr_zero(mm) + 1);
            mm &= mm - 1;
        }
        term["indices"] = idx;
        if constexpr (ScalarOps<S>::is_exact) {
            term["re"] = to_string(coeff.re);
            term["im"] = to_string(coeff.im);
        } else {
            term["re"] = coeff.real();
            term["im"] = coeff.imag();
        }
        arr.push_back(term);
    }
    return arr;
}

namespace detail {

template <class S>
S coeff_from_json(const Json& re, const Json& im) {
    auto part = [](const Json& j) -> Rational {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return rat(j.get<long long>());
        if (j.is_number()) {
            // floats are only exact when integral; otherwise reject in exact mode
            double d = j.get<double>();
            if (d == std::floor(d) && std::abs(d) < 1e15) return rat((long long)d);
            throw SerializationError("non-integral float coefficient in exact mode");
        }
        throw SerializationError("coefficient must be a string rational or a number");
    };
    if constexpr (ScalarOps<S>::is_exact) {
        return GaussianRational{part(re), part(im)};
    } else {
        auto num = [](const Json& j) -> double {
            if (j.is_number()) return j.get<double>();
            if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
            throw SerializationError("coefficient must be a string rational or a number");
        };
        return std::complex<double>(num(re), num(im));
    }
}

} // namespace detail

template <class S>
GrassmannNumber<S> grassmann_from_json(const AlgebraContext& ctx, const Json& j) {
    if (!j.is_array()) throw SerializationError("grassmann number must be a list of terms");
    GrassmannNumber<S> out = GrassmannNumber<S>::scalar(ctx, ScalarOps<S>::zero());
    for (const auto& term : j) {
        if (!term.contains("indices") || !term.contains("re") || !term.contains("im"))
            throw SerializationError("term needs indices, re, im");
        S coeff = detail::coeff_from_json<S>(term["re"], term["im"]);
        GrassmannNumber<S> mono = GrassmannNumber<S>::scalar(ctx, coeff);
        long long prev = 0;
        for (const auto& ij : term["indices"]) {
            long long i = ij.get<long long>();
            if (i <= prev) throw SerializationError("indices must be strictly increasing");
            if (i < 1 || i > ctx.generator_count()) throw SerializationError("generator index out of range");
            mono = mono * GrassmannNumber<S>::generator(ctx, (int)i);
            prev = i;
        }
        out += mono;
    }
    return out;
}

template <class S>
Json to_json(const SuperPoint<S>& p) {
    return Json{{"x1", to_json(p.x1)},
                {"x2", to_json(p.x2)},
                {"x", to_json(p.x)},
                {"phi", to_json(p.phi)},
                {"psi", to_json(p.psi)}};
}

template <class S>
SuperPoint<S> point_from_json(const AlgebraContext& ctx, const Json& j) {
    for (const char* key : {"x1", "x2", "x", "phi", "psi"})
        if (!j.contains(key)) throw SerializationError(std::string("point is missing field ") + key);
    try {
        return SuperPoint<S>::make(
            grassmann_from_json<S>(ctx, j["x1"]), grassmann_from_json<S>(ctx, j["x2"]),
            grassmann_from_json<S>(ctx, j["x"]), grassmann_from_json<S>(ctx, j["phi"]),
            grassmann_from_json<S>(ctx, j["psi"]));
    } catch (const ParityError& e) {
        throw SerializationError(std::string("malformed point: ") + e.what());
    } catch (const LayoutError& e) {
        throw SerializationError(std::string("malformed point: ") + e.what());
    }
}

/// Supermatrix as nine labelled blocks.
template <class S>
Json to_json(const SuperMatrix<S>& m) {
    return Json{{"a", to_json(m.a())},         {"b", to_json(m.b())},       {"alpha", to_json(m.alpha())},
                {"c", to_json(m.c())},         {"d", to_json(m.d())},       {"beta", to_json(m.beta())},
                {"gamma", to_json(m.gamma())}, {"delta", to_json(m.delta())}, {"f", to_json(m.f())}};
}

template <class S>
SuperMatrix<S> supermatrix_from_json(const AlgebraContext& ctx, const Json& j) {
    const char* keys[9] = {"a", "b", "alpha", "c", "d", "beta", "gamma", "delta", "f"};
    std::array<GrassmannNumber<S>, 9> entries;
    for (int i = 0; i < 9; ++i) {
        if (!j.contains(keys[i])) throw SerializationError(std::string("matrix is missing block ") + keys[i]);
        entries[std::size_t(i)] = grassmann_from_json<S>(ctx, j[keys[i]]);
    }
    try {
        return SuperMatrix<S>::from_entries(ctx, std::move(entries));
    } catch (const ParityError& e) {
        throw SerializationError(std::string("malformed supermatrix: ") + e.what());
    }
}

} // namespace superhyp
