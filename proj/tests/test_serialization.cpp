#include <catch2/catch.hpp>

#include "superhyp/serialization.hpp"

using namespace superhyp;
using SE = ExactScalar;
using GE = GrassmannNumber<SE>;
using F = FloatScalar;

TEST_CASE("grassmann numbers round-trip exactly in exact mode") {
    AlgebraContext ctx(8);
    Rng rng(401);
    for (int trial = 0; trial < 50; ++trial) {
        GE g = GE::scalar(ctx, random_gaussian(rng));
        for (int t = 0; t < 4; ++t) {
            GE term = GE::scalar(ctx, random_gaussian(rng));
            std::uint64_t mask = rng.next() & ctx.full_mask();
            std::uint64_t m = mask;
            while (m) {
                term = term * GE::generator(ctx, std::countr_zero(m) + 1);
                m &= m - 1;
            }
            g += term;
        }
        auto j = to_json(g);
        REQUIRE(grassmann_from_json<SE>(ctx, j) == g);
    }
}

TEST_CASE("points and matrices round-trip") {
    AlgebraContext ctx(8);
    Rng rng(403);

    SECTION("exact point") {
        auto x1 = g_scalar<SE>(ctx, {random_rational(rng), rat(0)});
        auto x2 = g_scalar<SE>(ctx, {random_rational(rng), rat(0)});
        auto x = g_scalar<SE>(ctx, random_gaussian(rng));
        auto phi = random_odd<SE>(ctx, rng, {5, 6});
        auto psi = random_odd<SE>(ctx, rng, {7, 8});
        auto p = SuperPoint<SE>::make(x1, x2, x, phi, psi);
        REQUIRE(point_from_json<SE>(ctx, to_json(p)) == p);
    }
    SECTION("exact certified matrix") {
        auto g = random_osp<SE>(ctx, rng, {1, 2, 3, 4});
        REQUIRE(supermatrix_from_json<SE>(ctx, to_json(g.matrix())) == g.matrix());
    }
    SECTION("float point accepts numbers and rational strings") {
        Json j;
        j["x1"] = Json::array({Json{{"indices", Json::array()}, {"re", "3/2"}, {"im", 0.0}}});
        j["x2"] = Json::array({Json{{"indices", Json::array()}, {"re", 2.0}, {"im", 0.0}}});
        j["x"] = Json::array();
        j["phi"] = Json::array({Json{{"indices", {1}}, {"re", 0.5}, {"im", -0.25}}});
        j["psi"] = Json::array();
        auto p = point_from_json<F>(ctx, j);
        REQUIRE(std::abs(ScalarOps<F>::to_complex(p.x1.body()).real() - 1.5) < 1e-15);
        REQUIRE(p.phi.is_odd());
    }
}

TEST_CASE("malformed input is rejected") {
    AlgebraContext ctx(4);
    SECTION("missing fields") {
        Json j;
        j["x1"] = Json::array();
        REQUIRE_THROWS_AS(point_from_json<SE>(ctx, j), SerializationError);
    }
    SECTION("bad indices") {
        Json j = Json::array({Json{{"indices", {2, 1}}, {"re", "1"}, {"im", "0"}}});
        REQUIRE_THROWS_AS(grassmann_from_json<SE>(ctx, j), SerializationError);
        Json k = Json::array({Json{{"indices", {9}}, {"re", "1"}, {"im", "0"}}});
        REQUIRE_THROWS_AS(grassmann_from_json<SE>(ctx, k), SerializationError);
    }
    SECTION("parity violations read as malformed points") {
        Json j;
        for (const char* key : {"x1", "x2", "x", "phi", "psi"}) j[key] = Json::array();
        j["phi"] = Json::array({Json{{"indices", Json::array()}, {"re", "1"}, {"im", "0"}}});
        REQUIRE_THROWS_AS(point_from_json<SE>(ctx, j), SerializationError);
    }
    SECTION("non-integral float coefficient rejected in exact mode") {
        Json j = Json::array({Json{{"indices", {1}}, {"re", 0.5}, {"im", 0.0}}});
        REQUIRE_THROWS_AS(grassmann_from_json<SE>(ctx, j), SerializationError);
    }
    SECTION("malformed rational string") { REQUIRE_THROWS_AS(parse_rational("3/4/5x"), SerializationError); }
}
