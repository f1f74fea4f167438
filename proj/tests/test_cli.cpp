#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "superhyp/serialization.hpp"

using namespace superhyp;

namespace {

#ifndef SUPERHYP_CLI_PATH
#error "SUPERHYP_CLI_PATH must be defined by the build"
#endif

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string tmp = std::string("/tmp/superhyp_cli_test_") + std::to_string(::getpid()) + ".out";
    std::string cmd = std::string(SUPERHYP_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream f(tmp);
    std::stringstream ss;
    ss << f.rdbuf();
    res.output = ss.str();
    std::remove(tmp.c_str());
    return res;
}

std::string write_points_file(const Json& j, const std::string& name) {
    std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << j.dump(2);
    return path;
}

Json bosonic_point_json(double x1, double x2, double re, double im) {
    auto num = [](double v) {
        return Json::array({Json{{"indices", Json::array()}, {"re", v}, {"im", 0.0}}});
    };
    Json x = Json::array();
    if (re != 0.0 || im != 0.0) x.push_back(Json{{"indices", Json::array()}, {"re", re}, {"im", im}});
    return Json{{"x1", num(x1)}, {"x2", num(x2)}, {"x", x}, {"phi", Json::array()}, {"psi", Json::array()}};
}

Json ih_point_json(double x2, double re, double im) {
    double norm = re * re + im * im;
    return bosonic_point_json((1.0 + norm) / x2, x2, re, im);
}

} // namespace

TEST_CASE("verify verbs succeed and are deterministic") {
    auto a = run_cli("verify-invariance --trials 20 --gens 8 --seed 7");
    REQUIRE(a.exit_code == 0);
    auto b = run_cli("verify-invariance --trials 20 --gens 8 --seed 7");
    REQUIRE(a.output == b.output); // byte-identical exact-mode reports

    auto j = Json::parse(a.output);
    REQUIRE(j["status"] == "ok");
    for (const auto& chk : j["checks"]) {
        if (chk.contains("informational")) continue;
        REQUIRE(chk["failures"] == 0);
    }

    auto ap = run_cli("verify-appendix --trials 10 --gens 8 --seed 9");
    REQUIRE(ap.exit_code == 0);
}

TEST_CASE("zero trials give an empty green report") {
    auto r = run_cli("verify-invariance --trials 0");
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.output);
    REQUIRE(j["status"] == "ok");
    REQUIRE(j["checks"].empty());
}

TEST_CASE("sabotaged parameter is caught with a witness") {
    auto r = run_cli("verify-invariance --trials 10 --sabotage theta-x-only");
    REQUIRE(r.exit_code == 2);
    auto j = Json::parse(r.output);
    REQUIRE(j["status"] == "counterexample");
    REQUIRE(j["counterexample"].contains("defect"));
    REQUIRE_FALSE(j["counterexample"]["defect"].empty()); // nonzero witness
    REQUIRE(j["counterexample"].contains("g"));
    REQUIRE(j["counterexample"].contains("point"));
}

TEST_CASE("float mode is rejected for the exact suites, and vice versa") {
    REQUIRE(run_cli("verify-invariance --mode float --trials 1").exit_code == 3);
    Json file{{"generator_count", 4},
              {"points", Json::array({ih_point_json(1.0, 0.0, 0.0), ih_point_json(1.3, 0.4, 0.2)})}};
    auto path = write_points_file(file, "cli_geodesic_exact.json");
    REQUIRE(run_cli("geodesic --mode exact --points " + path).exit_code == 3);
}

TEST_CASE("geodesic verb") {
    double e = std::exp(1.0);
    Json file{{"generator_count", 4},
              {"points", Json::array({ih_point_json(1.0, 0.0, 0.0), bosonic_point_json(e, 1.0 / e, 0.0, 0.0)})}};
    auto path = write_points_file(file, "cli_geodesic.json");
    auto r = run_cli("geodesic --mode float --points " + path);
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.output);
    REQUIRE(std::abs(j["distance_body"].get<double>() - 1.0) < 1e-12);
    for (const auto& res : j["residuals"]) REQUIRE(res["ok"] == true);

    SECTION("coincident points are an input error") {
        Json bad{{"generator_count", 4},
                 {"points", Json::array({ih_point_json(1.0, 0.0, 0.0), ih_point_json(1.0, 0.0, 0.0)})}};
        auto bp = write_points_file(bad, "cli_geodesic_bad.json");
        REQUIRE(run_cli("geodesic --mode float --points " + bp).exit_code == 3);
    }
    SECTION("malformed file is an input error") {
        std::ofstream f("/tmp/cli_broken.json");
        f << "{ not json";
        f.close();
        REQUIRE(run_cli("geodesic --mode float --points /tmp/cli_broken.json").exit_code == 3);
    }
}

TEST_CASE("triangle verb") {
    Json file{{"generator_count", 4},
              {"points", Json::array({ih_point_json(1.0, 0.0, 0.0), ih_point_json(1.3, 0.5, 0.1),
                                      ih_point_json(0.8, -0.3, 0.45)})}};
    auto path = write_points_file(file, "cli_triangle.json");
    auto r = run_cli("triangle --mode float --points " + path);
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.output);
    REQUIRE(j["angles"].size() == 3);
    for (const auto& res : j["residuals"]) {
        REQUIRE(res["value"].get<double>() < 1e-9);
        REQUIRE(res["ok"] == true);
    }

    SECTION("collinear triples are an input error") {
        // third point on the geodesic through the first two
        Json bad{{"generator_count", 4},
                 {"points", Json::array({ih_point_json(1.0, 0.0, 0.0), bosonic_point_json(std::exp(1.0), std::exp(-1.0), 0.0, 0.0),
                                         bosonic_point_json(std::exp(2.0), std::exp(-2.0), 0.0, 0.0)})}};
        auto bp = write_points_file(bad, "cli_triangle_bad.json");
        REQUIRE(run_cli("triangle --mode float --points " + bp).exit_code == 3);
    }
}

TEST_CASE("tetrahedron verb") {
    Json file{{"generator_count", 4},
              {"points", Json::array({ih_point_json(0.9, -0.45, -0.3), ih_point_json(1.15, 0.5, -0.25),
                                      ih_point_json(1.35, 0.0, 0.55), ih_point_json(0.7, 0.1, -0.05)})}};
    auto path = write_points_file(file, "cli_tetrahedron.json");
    auto r = run_cli("tetrahedron --mode float --points " + path);
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.output);
    REQUIRE(j["dihedrals"].size() == 6);
    for (const auto& edge : j["dihedrals"]) {
        REQUIRE(edge["residual_explicit"].get<double>() < 1e-9);
        REQUIRE(edge["residual_projection"].get<double>() < 1e-9);
    }
}

TEST_CASE("volume-divergence verb") {
    SECTION("default fixture fits the divergent exponent") {
        auto r = run_cli("volume-divergence --mode float --eps 1e-1,1e-2,1e-3,1e-4 --smax 20");
        REQUIRE(r.exit_code == 0);
        auto j = Json::parse(r.output);
        double p = j["mu_rho"]["exponent"].get<double>();
        REQUIRE(p > -1.05);
        REQUIRE(p < -0.95);
        REQUIRE(j["mu_rho"]["r2"].get<double>() > 0.999);
        REQUIRE(j["body"]["cauchy"].get<double>() < 1e-6);
    }
    SECTION("bosonic input converges") {
        auto r = run_cli("volume-divergence --mode float --bosonic --eps 1e-1,1e-2,1e-3,1e-4 --smax 10");
        REQUIRE(r.exit_code == 0);
        auto j = Json::parse(r.output);
        REQUIRE_FALSE(j.contains("mu_rho"));
    }
    SECTION("a single cutoff is a numeric failure (fit needs four)") {
        REQUIRE(run_cli("volume-divergence --mode float --eps 1e-2 --smax 10").exit_code == 4);
    }
}
