// Batch front-end: exact verification suites for the orthosymplectic action,
// float-mode geometry reports and the ideal-tetrahedron divergence diagnostic.
// JSON in, JSON out; exit codes: 0 ok, 2 verification counterexample,
// 3 input error, 4 numeric failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "superhyp/superhyp.hpp"

using namespace superhyp;

namespace {

using SE = ExactScalar;
using GE = GrassmannNumber<SE>;
using F = FloatScalar;
using GF = GrassmannNumber<F>;

struct Config {
    std::string mode = "exact";
    int gens = 8;
    std::uint64_t seed = 1;
    int trials = 200;
    std::string out;
    std::string points_file;
    std::string eps_csv = "1e-1,1e-2,1e-3,1e-4";
    double smax = 50.0;
    bool bosonic = false;
    std::string sabotage; // internal: "theta-x-only" forces a wrong parameter
};

void emit(const Config& cfg, const Json& report) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw SerializationError("cannot open output file " + cfg.out);
        f << text;
    }
}

SuperPoint<SE> sample_point(const AlgebraContext& ctx, Rng& rng, const std::vector<int>& fermions) {
    auto x1 = g_scalar<SE>(ctx, {random_rational(rng), rat(0)});
    auto x2 = g_scalar<SE>(ctx, {random_rational(rng), rat(0)});
    auto x = g_scalar<SE>(ctx, random_gaussian(rng));
    auto phi = random_odd<SE>(ctx, rng, fermions);
    auto psi = random_odd<SE>(ctx, rng, fermions);
    return SuperPoint<SE>::make(x1, x2, x, phi, psi);
}

std::pair<std::vector<int>, std::vector<int>> split_generators(const AlgebraContext& ctx) {
    std::vector<int> group, point;
    for (int i = 1; i <= ctx.generator_count(); ++i) (i % 2 == 1 ? group : point).push_back(i);
    return {group, point};
}

struct CheckTally {
    std::string name;
    int trials = 0;
    int failures = 0;
    bool informational = false;
    std::string note;
};

class VerificationRun {
  public:
    explicit VerificationRun(std::string verb) : verb_(std::move(verb)) {}

    void record(const std::string& name, bool ok, const std::function<Json()>& witness) {
        auto& tally = tallies_[name];
        tally.name = name;
        ++tally.trials;
        if (!ok) {
            ++tally.failures;
            if (!counterexample_) {
                Json w = witness();
                w["check"] = name;
                counterexample_ = std::move(w);
            }
        }
    }

    /// A known-discrepant identity tracked for the record without gating the
    /// exit code; the note names the verified replacement law.
    void record_informational(const std::string& name, bool ok, const std::string& note) {
        auto& tally = tallies_[name];
        tally.name = name;
        tally.informational = true;
        tally.note = note;
        ++tally.trials;
        if (!ok) ++tally.failures;
    }

    int finish(const Config& cfg) const {
        Json rep;
        rep["verb"] = verb_;
        rep["mode"] = cfg.mode;
        rep["gens"] = cfg.gens;
        rep["seed"] = cfg.seed;
        rep["trials"] = cfg.trials;
        Json checks = Json::array();
        for (const auto& [name, tally] : tallies_) {
            Json c{{"name", name}, {"trials", tally.trials}, {"failures", tally.failures}};
            if (tally.informational) {
                c["informational"] = true;
                c["note"] = tally.note;
            }
            checks.push_back(c);
        }
        rep["checks"] = checks;
        rep["status"] = counterexample_ ? "counterexample" : "ok";
        if (counterexample_) rep["counterexample"] = *counterexample_;
        emit(cfg, rep);
        return counterexample_ ? 2 : 0;
    }

  private:
    std::string verb_;
    std::map<std::string, CheckTally> tallies_;
    std::optional<Json> counterexample_;
};

GE act_defect_with(const OspElement<SE>& g, const SuperPoint<SE>& p, const GE& theta) {
    auto A = to_point_matrix(p, theta);
    auto Ap = sm_mul(dagger(g.matrix()), sm_mul(A, g.matrix()));
    auto img = SuperPoint<SE>::make(Ap.at(0, 0), Ap.at(1, 1), Ap.at(1, 0), Ap.at(0, 2), Ap.at(1, 2));
    return quadratic_form(img) - quadratic_form(p);
}

int run_verify_invariance(const Config& cfg) {
    if (cfg.mode != "exact") throw SerializationError("verify-invariance requires --mode exact");
    AlgebraContext ctx(cfg.gens);
    Rng rng(cfg.seed);
    auto [group_f, point_f] = split_generators(ctx);
    VerificationRun run("verify-invariance");

    for (int trial = 0; trial < cfg.trials; ++trial) {
        auto g = random_osp<SE>(ctx, rng, group_f);
        auto p = sample_point(ctx, rng, point_f);
        auto witness = [&] {
            return Json{{"trial", trial}, {"g", to_json(g.matrix())}, {"point", to_json(p)}};
        };

        if (!cfg.sabotage.empty()) {
            // deliberately defective parameter: X-part only
            auto th = auxiliary_theta(g, p);
            GE bad = GE::scalar(ctx, SE(rat(-1, 2))) * th.X;
            auto defect = act_defect_with(g, p, bad);
            run.record("invariance", defect.is_zero(), [&] {
                Json w = witness();
                w["defect"] = to_json(defect);
                return w;
            });
            continue;
        }

        auto res = act(g, p);
        run.record("invariance", quadratic_form(res.point) == quadratic_form(p), witness);

        auto res2 = act_explicit(g, p);
        run.record("act-vs-act-explicit", res.point == res2.point && res.theta_prime == res2.theta_prime,
                   witness);

        auto th = auxiliary_theta(g, p); // throws if the two closed forms disagree
        run.record("theta-closed-forms-agree", true, witness);
        run.record("theta-pure-imaginary", th.value.conjugate() == -th.value, witness);

        GE two = GE::scalar(ctx, SE(rat(2)));
        run.record_informational(
            "theta-prime-is-minus-2-theta", res.theta_prime == -(two * res.theta),
            "known discrepancy: the corner maps theta to -theta, and the -2 law holds for the "
            "corner-free conjugation (both checked below)");
        run.record("corner-free-theta-prime-is-minus-2-display",
                   corner_free_theta_prime(g, p) == -(two * th.display_value), witness);
        run.record("corner-is-minus-theta", res.theta_prime == -res.theta, witness);

        for (const auto& chk : transformation_identities(g, p)) run.record(chk.name, chk.holds, witness);

        // Delta quadratic at the action's parameter
        {
            const auto& m = g.matrix();
            GE ab = m.alpha() * m.beta();
            GE abc = m.alpha().conjugate() * m.beta().conjugate();
            GE Ym = th.Y - th.Y.conjugate();
            GE Zm = th.Z - th.Z.conjugate();
            GE half = GE::scalar(ctx, SE(rat(1, 2)));
            GE ps = p.phi * p.psi;
            GE K2 = ab + abc + two * (ab * abc);
            GE K1 = th.X + Ym + two * Zm;
            GE K0 = th.X * Ym + half * (Ym * Ym) + half * (th.X * th.X) -
                    two * ((ab * abc) * (ps + ps.conjugate()));
            auto delta = K2 * (th.value * th.value) + K1 * th.value + K0;
            run.record("delta-quadratic-vanishes", delta.is_zero(), [&] {
                Json w = witness();
                w["delta"] = to_json(delta);
                return w;
            });
        }

        // Entrywise expansion identities (x-sector, fermion-sector, grouped sums)
        {
            auto e = explicit_parts(g, p);
            const auto& m = g.matrix();
            auto cj = [](const GE& v) { return v.conjugate(); };
            GE al = m.alpha(), be = m.beta(), ga = m.gamma(), de = m.delta();
            GE alc = cj(al), bec = cj(be);
            GE x1 = p.x1, x2 = p.x2, x = p.x, xc = cj(p.x);
            GE phi = p.phi, psi = p.psi, phic = cj(phi), psic = cj(psi);
            GE one = GE::scalar(ctx, SE(rat(1)));
            const GE& t = e.theta;
            GE Ym = th.Y - th.Y.conjugate();
            GE Zm = th.Z - th.Z.conjugate();

            bool lemq =
                (e.A * e.B - e.C * cj(e.C) == (x1 * x2 - x * xc) * (one - al * be) * (one - alc * bec)) &&
                (e.A * e.B1 + e.B * e.A1 - e.C * cj(e.C1) - cj(e.C) * e.C1 ==
                 x1 * (al * (alc * bec - one) * psi + alc * (al * be - one) * psic) +
                     x2 * (be * (one - alc * bec) * phi + bec * (one - al * be) * phic) +
                     x * (al * (one - alc * bec) * phi + bec * (al * be - one) * psic) +
                     xc * (alc * (one - al * be) * phic + be * (alc * bec - one) * psi)) &&
                (e.A1 * e.B1 - e.C1 * cj(e.C1) ==
                 (one - al * be) * (alc * phic * bec * psic) * two +
                     (one - alc * bec) * (al * phi * be * psi) * two -
                     (al * alc * phic * phi + be * bec * psic * psi + be * alc * psic * phi +
                      al * bec * phic * psi)) &&
                (e.A2 * e.B2 - e.C2 * cj(e.C2) == al * alc * be * bec * t * (t - cj(t))) &&
                (e.A2 * (e.B + e.B1) + e.B2 * (e.A + e.A1) - e.C2 * (cj(e.C) + cj(e.C1)) -
                     cj(e.C2) * (e.C + e.C1) ==
                 -(t * (alc * al * x1 + bec * be * x2 + bec * al * x + alc * be * xc)) -
                     two * t * (al * be * (alc * phi + bec * psi) - alc * bec * (al * phic + be * psic)) +
                     de * cj(ga) * (e.C + e.C1) * (t + cj(t)));
            run.record("entrywise-x-identities", lemq, witness);

            bool lemp =
                (e.U * e.V1 - e.V * e.U1 ==
                 (x * phi - x1 * psi) * (one - alc * bec) + phic * (alc * phi + bec * psi) +
                     t * (x1 * alc + x * bec + (alc * bec) * phic * two)) &&
                (e.U * e.V2 - e.V * e.U2 ==
                 (x2 * phi - xc * psi) * (one - alc * bec) + psic * (alc * phi + bec * psi) +
                     t * (x2 * bec + xc * alc + (alc * bec) * psic * two)) &&
                (e.U1 * e.V2 - e.U2 * e.V1 ==
                 (x1 * x2 - x * xc) * (one - alc * bec) - (cj(ga) * cj(de) * phic * psic) * two +
                     (x2 * bec + xc * alc) * phic - (x1 * alc + x * bec) * psic) &&
                (e.U * e.V ==
                 (one - alc * bec) * (phi * psi) + t * (alc * phi + bec * psi) + (t * t) * (alc * bec));
            run.record("entrywise-fermion-identities", lemp, witness);

            GE red = ((one - alc * bec) * (x * phi - x1 * psi)) * al +
                     ((one - al * be) * (xc * phic - x1 * psic)) * alc +
                     ((one - alc * bec) * (x2 * phi - xc * psi)) * be +
                     ((one - al * be) * (x2 * phic - x * psic)) * bec;
            GE orange = (phic * (alc * phi + bec * psi)) * al + (phi * (al * phic + be * psic)) * alc +
                        (psic * (alc * phi + bec * psi)) * be + (psi * (al * phic + be * psic)) * bec;
            GE green = ((x2 * bec + xc * alc) * phic - (x1 * alc + x * bec) * psic) * (al * be) +
                       ((x2 * be + x * al) * phi - (x1 * al + xc * be) * psi) * (alc * bec);
            GE black = (t * (x1 * alc + x * bec + (alc * bec) * phic * two)) * al +
                       (-(t * (x1 * al + xc * be + (al * be) * phi * two))) * alc +
                       (t * (x2 * bec + xc * alc + (alc * bec) * psic * two)) * be +
                       (-(t * (x2 * be + x * al + (al * be) * psi * two))) * bec +
                       (one + two * al * be) * (t * (alc * phi + bec * psi) + (t * t) * (alc * bec)) +
                       (one + two * alc * bec) * (-(t * (al * phic + be * psic)) + (t * t) * (al * be));
            bool sums = (red == -(e.A * e.B1 + e.B * e.A1 - e.C * cj(e.C1) - cj(e.C) * e.C1)) &&
                        (orange == -((th.Y * cj(th.Y)) * two)) && (green == th.X * Ym) &&
                        (black == (t * t) * ((one + two * al * be) * (alc * bec) +
                                             (one + two * alc * bec) * (al * be)) +
                                      t * (two * th.X + Ym + two * two * Zm));
            run.record("grouped-term-identities", sums, witness);
        }
    }
    return run.finish(cfg);
}

int run_verify_appendix(const Config& cfg) {
    if (cfg.mode != "exact") throw SerializationError("verify-appendix requires --mode exact");
    AlgebraContext ctx(cfg.gens);
    Rng rng(cfg.seed);
    auto [group_f, point_f] = split_generators(ctx);
    VerificationRun run("verify-appendix");

    auto lie = lie_relations_check<SE>(ctx);
    run.record("lie-relations", lie.ok(), [&] { return Json{{"failures", lie.failures}}; });

    GE two = GE::scalar(ctx, SE(rat(2)));
    for (int trial = 0; trial < cfg.trials; ++trial) {
        auto g1 = random_osp<SE>(ctx, rng, group_f);
        auto g2 = random_osp<SE>(ctx, rng, group_f);
        auto p = sample_point(ctx, rng, point_f);
        auto r = sample_point(ctx, rng, point_f);
        auto witness = [&] {
            return Json{{"trial", trial}, {"g", to_json(g1.matrix())}, {"point", to_json(p)}};
        };

        auto prod = sm_mul(g1.matrix(), g2.matrix());
        run.record("closure", is_orthosymplectic(prod).ok(), witness);
        run.record("sdet-multiplicative",
                   berezinian(prod) == berezinian(g1.matrix()) * berezinian(g2.matrix()), witness);
        run.record("alphabeta-equals-gammadelta",
                   g1.matrix().alpha() * g1.matrix().beta() == g1.matrix().gamma() * g1.matrix().delta(),
                   witness);
        auto f = factorize(g1);
        run.record("factorization-roundtrip",
                   sm_mul(f.sl2_part.matrix(), make_u(f.alpha, f.beta).matrix()) == g1.matrix(), witness);

        auto dd = dagger(dagger(g1.matrix()));
        run.record("dagger-squared-negates-odd",
                   dd.a() == g1.matrix().a() && dd.alpha() == -g1.matrix().alpha() &&
                       dd.gamma() == -g1.matrix().gamma(),
                   witness);

        auto th = auxiliary_theta(g1, p);
        GE ab = g1.matrix().alpha() * g1.matrix().beta();
        GE abc = g1.matrix().alpha().conjugate() * g1.matrix().beta().conjugate();
        bool suite = th.X.conjugate() == -th.X && (ab * th.X).is_zero() && (abc * th.X).is_zero() &&
                     (ab * th.Y.conjugate()).is_zero() && (abc * th.Y).is_zero() &&
                     th.X * th.X == -(((ab * abc) * (p.x1 * p.x2 - p.x * p.x.conjugate())) * two);
        run.record("pure-imaginary-suite", suite, witness);

        bool kap = kappa(p, p).is_zero() && kappa(p, r) == -kappa(r, p) &&
                   kappa(p, r).conjugate() == -kappa(p, r) &&
                   kappa(i_on_fermions(p), r) == -kappa(p, i_on_fermions(r));
        run.record("kappa-symmetries", kap, witness);
    }
    return run.finish(cfg);
}

Json residual_entry(const std::string& name, double value, double tol) {
    return Json{{"name", name}, {"value", value}, {"ok", value < tol}};
}

int file_gens(const Config& cfg) {
    std::ifstream f(cfg.points_file);
    if (!f) throw SerializationError("cannot open points file " + cfg.points_file);
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw SerializationError(std::string("malformed JSON: ") + e.what());
    }
    return j.value("generator_count", cfg.gens);
}

std::vector<SuperPoint<F>> load_points(const Config& cfg, const AlgebraContext& ctx, std::size_t expected) {
    std::ifstream f(cfg.points_file);
    if (!f) throw SerializationError("cannot open points file " + cfg.points_file);
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw SerializationError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.contains("points") || !j["points"].is_array() || j["points"].size() != expected)
        throw SerializationError("points file must contain exactly " + std::to_string(expected) + " points");
    std::vector<SuperPoint<F>> pts;
    for (const auto& pj : j["points"]) pts.push_back(point_from_json<F>(ctx, pj));
    return pts;
}

void require_unit_points(const std::vector<SuperPoint<F>>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto q = quadratic_form(pts[i]);
        auto one = GF::scalar(*pts[i].context(), F(1.0));
        if (max_abs_diff(q, one) > 1e-8)
            throw SerializationError("point " + std::to_string(i + 1) +
                                     " is not on the unit hyperboloid (Q != 1)");
    }
}

void require_float_mode(const Config& cfg, const char* verb) {
    if (cfg.mode != "float")
        throw SerializationError(std::string(verb) +
                                 " uses analytic lifts with irrational bodies; run with --mode float");
}

int run_geodesic(const Config& cfg) {
    require_float_mode(cfg, "geodesic");
    AlgebraContext ctx(file_gens(cfg));
    auto pts = load_points(cfg, ctx, 2);
    auto gt = geodesic_through(pts[0], pts[1]);

    Json rep;
    rep["verb"] = "geodesic";
    rep["mode"] = cfg.mode;
    rep["inputs"] = Json::array({to_json(pts[0]), to_json(pts[1])});
    rep["distance_body"] = ScalarOps<F>::to_complex(gt.distance.body()).real();
    rep["distance"] = to_json(gt.distance);
    rep["E"] = to_json(gt.line.E);
    rep["F"] = to_json(gt.line.F);
    Json residuals = Json::array();
    auto one = GF::scalar(ctx, F(1.0));
    auto two = GF::scalar(ctx, F(2.0));
    residuals.push_back(residual_entry("inner_EF_minus_2", max_abs_diff(inner(gt.line.E, gt.line.F), two), 1e-9));
    Rng rng(cfg.seed);
    double worst_unit = 0.0, worst_locus = 0.0;
    for (int k = 0; k < 20; ++k) {
        auto X = geodesic_point(gt.line, GF::scalar(ctx, F(4.0 * rng.uniform() - 2.0)));
        worst_unit = std::max(worst_unit, max_abs_diff(quadratic_form(X), one));
        worst_locus = std::max(worst_locus, max_abs_diff(locus_product(gt.line, X), one));
    }
    residuals.push_back(residual_entry("unit_form_on_samples", worst_unit, 1e-10));
    residuals.push_back(residual_entry("locus_product_on_samples", worst_locus, 1e-12));
    auto T = tangent(pts[0], pts[1]);
    residuals.push_back(residual_entry("tangent_norm_plus_1", max_abs_diff(inner(T, T), -one), 1e-9));
    rep["residuals"] = residuals;
    emit(cfg, rep);
    return 0;
}

int run_triangle(const Config& cfg) {
    require_float_mode(cfg, "triangle");
    AlgebraContext ctx(file_gens(cfg));
    auto pts = load_points(cfg, ctx, 3);
    require_unit_points(pts);
    auto td = TriangleData<F>::make(pts[0], pts[1], pts[2]);

    Json rep;
    rep["verb"] = "triangle";
    rep["mode"] = cfg.mode;
    rep["inputs"] = Json::array({to_json(pts[0]), to_json(pts[1]), to_json(pts[2])});
    rep["inner_products"] = {{"d", to_json(td.d)}, {"e", to_json(td.e)}, {"f", to_json(td.f)}};
    rep["H"] = to_json(td.H);
    Json angles = Json::array();
    Json residuals = Json::array();
    const char* names[3] = {"P", "Q", "R"};
    for (int i = 0; i < 3; ++i) {
        const auto& A = pts[std::size_t(i)];
        const auto& B = pts[std::size_t((i + 1) % 3)];
        const auto& C = pts[std::size_t((i + 2) % 3)];
        auto ang = angle(A, B, C);
        angles.push_back({{"vertex", names[i]}, {"angle", to_json(ang)}});
        auto dd = distance(A, B);
        auto df = distance(A, C);
        auto cosA = -inner(tangent(A, B), tangent(A, C));
        auto res = inner(B, C) - lift_analytic(AnalyticFn::Cosh, dd) * lift_analytic(AnalyticFn::Cosh, df) +
                   lift_analytic(AnalyticFn::Sinh, dd) * lift_analytic(AnalyticFn::Sinh, df) * cosA;
        residuals.push_back(
            residual_entry(std::string("law_of_cosines_at_") + names[i], res.max_abs_coeff(), 1e-9));
    }
    rep["angles"] = angles;
    rep["residuals"] = residuals;
    emit(cfg, rep);
    return 0;
}

int run_tetrahedron(const Config& cfg) {
    require_float_mode(cfg, "tetrahedron");
    AlgebraContext ctx(file_gens(cfg));
    auto pts_v = load_points(cfg, ctx, 4);
    require_unit_points(pts_v);
    std::array<SuperPoint<F>, 4> pts{pts_v[0], pts_v[1], pts_v[2], pts_v[3]};
    auto g = gram(pts);

    Json rep;
    rep["verb"] = "tetrahedron";
    rep["mode"] = cfg.mode;
    rep["inputs"] = Json::array({to_json(pts[0]), to_json(pts[1]), to_json(pts[2]), to_json(pts[3])});
    Json gj = Json::array();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            gj.push_back({{"i", i + 1}, {"j", j + 1}, {"value", to_json(g.at(i, j))}});
    rep["gram"] = gj;
    Json edges = Json::array();
    for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) {
            auto c1 = dihedral_cos(g, k, l);
            auto c2 = dihedral_cos_explicit(g, k, l);
            auto c3 = dihedral_cos_projection(pts, k, l);
            edges.push_back({{"edge", {k + 1, l + 1}},
                             {"cos_cofactor", to_json(c1)},
                             {"residual_explicit", max_abs_diff(c1, c2)},
                             {"residual_projection", max_abs_diff(c1, c3)}});
        }
    rep["dihedrals"] = edges;
    emit(cfg, rep);
    return 0;
}

int run_volume_divergence(const Config& cfg) {
    require_float_mode(cfg, "volume-divergence");
    AlgebraContext ctx(std::max(cfg.gens, 4));

    std::vector<double> eps;
    std::stringstream ss(cfg.eps_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            eps.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw SerializationError("malformed --eps entry: " + item);
        }
    }

    auto fix = make_ideal_face_fixture<F>(ctx, !cfg.bosonic);
    auto series = face_integral_series(fix.vertices, eps, cfg.smax);
    auto fitted = divergence_fit(series);

    Json rep;
    rep["verb"] = "volume-divergence";
    rep["mode"] = cfg.mode;
    rep["eps"] = fitted.eps;
    rep["smax"] = cfg.smax;
    Json channels = Json::array();
    auto indices_of = [](std::uint64_t m) {
        Json idx = Json::array();
        while (m) {
            idx.push_back(std::countr_zero(m) + 1);
            m &= m - 1;
        }
        return idx;
    };
    for (const auto& ch : fitted.channels) {
        Json cj;
        cj["indices"] = indices_of(ch.monomial);
        cj["values"] = ch.values;
        if (ch.fitted) cj["fit"] = {{"exponent", ch.exponent}, {"r2", ch.r2}};
        channels.push_back(cj);
        if (ch.monomial == fix.mu_rho && ch.fitted)
            rep["mu_rho"] = {{"exponent", ch.exponent}, {"r2", ch.r2}};
    }
    rep["per_monomial"] = channels;
    rep["body"] = {{"values", fitted.body_values},
                   {"extrapolated", fitted.body_extrapolated},
                   {"cauchy", fitted.body_cauchy}};
    emit(cfg, rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"superhyp: exact verification and geometry reports for the orthosymplectic "
                 "action on super Minkowski space"};
    app.require_subcommand(1);

    Config cfg;
    if (const char* env = std::getenv("SUPERHYP_MODE")) cfg.mode = env;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--mode", cfg.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--gens", cfg.gens, "generator count")->check(CLI::Range(1, 64));
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--trials", cfg.trials, "trial count")->check(CLI::NonNegativeNumber);
        sub->add_option("--out", cfg.out, "output JSON path (stdout when omitted)");
    };

    auto* vi = app.add_subcommand("verify-invariance", "exact checks of the action and its identities");
    add_common(vi);
    vi->add_option("--sabotage", cfg.sabotage, "internal: run with a deliberately wrong parameter")
        ->check(CLI::IsMember({"theta-x-only"}));

    auto* va = app.add_subcommand("verify-appendix", "exact group-law, expansion and pairing checks");
    add_common(va);

    auto* ge = app.add_subcommand("geodesic", "geodesic data for a two-point file");
    add_common(ge);
    ge->add_option("--points", cfg.points_file, "points JSON file")->required();

    auto* tr = app.add_subcommand("triangle", "triangle data for a three-point file");
    add_common(tr);
    tr->add_option("--points", cfg.points_file, "points JSON file")->required();

    auto* te = app.add_subcommand("tetrahedron", "Gram and dihedral data for a four-point file");
    add_common(te);
    te->add_option("--points", cfg.points_file, "points JSON file")->required();

    auto* vd = app.add_subcommand("volume-divergence", "ideal-face divergence diagnostic");
    add_common(vd);
    vd->add_option("--eps", cfg.eps_csv, "comma-separated t-cutoffs");
    vd->add_option("--smax", cfg.smax, "s-truncation")->check(CLI::PositiveNumber);
    vd->add_flag("--bosonic", cfg.bosonic, "zero out the fixture fermions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (vi->parsed()) return run_verify_invariance(cfg);
        if (va->parsed()) return run_verify_appendix(cfg);
        if (ge->parsed()) return run_geodesic(cfg);
        if (tr->parsed()) return run_triangle(cfg);
        if (te->parsed()) return run_tetrahedron(cfg);
        if (vd->parsed()) return run_volume_divergence(cfg);
    } catch (const SerializationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateInputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const ParityError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const LayoutError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
