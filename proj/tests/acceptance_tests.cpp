// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Criterion 3 contains a corner-transformation clause that is provably
// unattainable under the conventions every other identity pins down; it is
// checked as stated and reported honestly (see the final summary and the
// project README).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "superhyp/superhyp.hpp"

using namespace superhyp;
using SE = ExactScalar;
using GE = GrassmannNumber<SE>;
using F = FloatScalar;
using GF = GrassmannNumber<F>;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_start;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void line(const std::string& id, bool ok, const std::string& detail) {
    std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

const std::vector<int> kGroup{1, 3, 5, 7};
const std::vector<int> kPoint{2, 4, 6, 8};

SuperPoint<SE> sample_point(const AlgebraContext& ctx, Rng& rng) {
    auto x1 = g_scalar<SE>(ctx, {random_rational(rng), rat(0)});
    auto x2 = g_scalar<SE>(ctx, {random_rational(rng), rat(0)});
    auto x = g_scalar<SE>(ctx, random_gaussian(rng));
    auto phi = random_odd<SE>(ctx, rng, kPoint);
    auto psi = random_odd<SE>(ctx, rng, kPoint);
    return SuperPoint<SE>::make(x1, x2, x, phi, psi);
}

SuperPoint<F> anchored_ih_point(const AlgebraContext& ctx, Rng& rng, int anchor,
                                const std::vector<int>& fermions) {
    static const std::complex<double> centers[4] = {{-0.45, -0.30}, {0.50, -0.25}, {0.00, 0.55}, {0.10, -0.05}};
    static const double heights[4] = {0.90, 1.15, 1.35, 0.70};
    auto jitter = [&] { return 0.08 * (rng.uniform() - 0.5); };
    auto one = GF::scalar(ctx, F(1.0));
    auto x2 = GF::scalar(ctx, F(heights[anchor % 4] + jitter()));
    auto x = GF::scalar(ctx, F(centers[anchor % 4] + std::complex<double>(jitter(), jitter())));
    auto phi = random_odd<F>(ctx, rng, fermions) * F(0.25);
    auto psi = random_odd<F>(ctx, rng, fermions) * F(0.25);
    auto ps = phi * psi;
    auto x1 = (one + x * x.conjugate() - ps - ps.conjugate()) * x2.inverse();
    return SuperPoint<F>::make(x1, x2, x, phi, psi);
}

// ---- criteria 1 + 2 share their 200 trials ----
void criteria_1_2() {
    auto t0 = std::chrono::steady_clock::now();
    AlgebraContext ctx(8);
    Rng rng(20260808);
    bool invariance = true, dual = true;
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_osp<SE>(ctx, rng, kGroup);
        auto p = sample_point(ctx, rng);
        auto res = act(g, p);
        if (!(quadratic_form(res.point) == quadratic_form(p))) invariance = false;
        auto res2 = act_explicit(g, p);
        if (!(res.point == res2.point && res.theta_prime == res2.theta_prime)) dual = false;
    }
    double dt = seconds_since(t0);
    std::ostringstream d1;
    d1 << "main invariance exact on 200 seeded (g,P) over 8 generators (" << dt << " s, target < 60 s)";
    line("1", invariance && dt < 60.0, d1.str());
    line("2", dual, "act and act_explicit agree on all five coordinates and the corner, exact, 200 trials");
}

void criterion_3() {
    AlgebraContext ctx(8);
    Rng rng(333);
    bool forms_agree = true, imaginary = true, minus2 = true, delta_zero = true;
    GE two = GE::scalar(ctx, SE(rat(2)));
    GE half = GE::scalar(ctx, SE(rat(1, 2)));
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_osp<SE>(ctx, rng, kGroup);
        auto p = sample_point(ctx, rng);
        ThetaData<SE> th = [&] {
            try {
                return auxiliary_theta(g, p); // throws when the closed forms disagree
            } catch (const NumericError&) {
                forms_agree = false;
                throw;
            }
        }();
        if (!(th.value.conjugate() == -th.value)) imaginary = false;
        auto res = act(g, p);
        if (!(res.theta_prime == -(two * res.theta))) minus2 = false;
        const auto& m = g.matrix();
        GE ab = m.alpha() * m.beta();
        GE abc = m.alpha().conjugate() * m.beta().conjugate();
        GE Ym = th.Y - th.Y.conjugate();
        GE Zm = th.Z - th.Z.conjugate();
        GE ps = p.phi * p.psi;
        GE K2 = ab + abc + two * (ab * abc);
        GE K1 = th.X + Ym + two * Zm;
        GE K0 = th.X * Ym + half * (Ym * Ym) + half * (th.X * th.X) -
                two * ((ab * abc) * (ps + ps.conjugate()));
        if (!(K2 * (th.value * th.value) + K1 * th.value + K0).is_zero()) delta_zero = false;
    }
    line("3a", forms_agree, "the two closed forms for the auxiliary parameter agree exactly");
    line("3b", imaginary, "conjugate(theta) = -theta exactly");
    line("3c", delta_zero, "the Delta quadratic vanishes exactly at the action's parameter");
    line("3d", minus2,
         "theta' = -2 theta for the action corner [unattainable: the corner of g^dagger A g is "
         "(X + fY - fbar Ybar) + theta f fbar identically, never -2 theta; the action's corner equals "
         "-theta, and the corner-free conjugation gives -2x the closed form -- both verified below]");
    // the two true corner laws, for the record
    {
        Rng rng2(334);
        bool corner_minus = true, corner_free = true;
        for (int trial = 0; trial < 50; ++trial) {
            auto g = random_osp<SE>(ctx, rng2, kGroup);
            auto p = sample_point(ctx, rng2);
            auto th = auxiliary_theta(g, p);
            auto res = act(g, p);
            if (!(res.theta_prime == -res.theta)) corner_minus = false;
            if (!(corner_free_theta_prime(g, p) == -(two * th.display_value))) corner_free = false;
        }
        line("3d'", corner_minus && corner_free,
             "verified corner laws: corner = -theta, and corner-free conjugation = -2 x closed form");
    }
}

void criterion_4() {
    AlgebraContext ctx(8);
    Rng rng(444);
    bool xsector = true, fsector = true, sums = true, transf = true;
    GE two = GE::scalar(ctx, SE(rat(2)));
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_osp<SE>(ctx, rng, kGroup);
        auto p = sample_point(ctx, rng);
        auto e = explicit_parts(g, p);
        auto th = auxiliary_theta(g, p);
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

        xsector = xsector &&
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

        fsector = fsector &&
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
        sums = sums && (red == -(e.A * e.B1 + e.B * e.A1 - e.C * cj(e.C1) - cj(e.C) * e.C1)) &&
               (orange == -((th.Y * cj(th.Y)) * two)) && (green == th.X * Ym) &&
               (black == (t * t) * ((one + two * al * be) * (alc * bec) + (one + two * alc * bec) * (al * be)) +
                             t * (two * th.X + Ym + two * two * Zm));

        for (const auto& chk : transformation_identities(g, p)) transf = transf && chk.holds;
    }
    line("4", xsector && fsector && sums && transf,
         "entrywise expansion identities (x-sector, fermion-sector, grouped sums) and the three "
         "transformation identities, exact, 100 trials");
}

void criterion_5() {
    AlgebraContext ctx(8);
    Rng rng(555);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_osp<SE>(ctx, rng, kGroup);
        auto cert = is_orthosymplectic(g.matrix());
        ok = ok && cert.ok();
        ok = ok && (g.matrix().alpha() * g.matrix().beta() == g.matrix().gamma() * g.matrix().delta());
        auto f = factorize(g);
        ok = ok && (sm_mul(f.sl2_part.matrix(), make_u(f.alpha, f.beta).matrix()) == g.matrix());
    }
    auto lie = lie_relations_check<SE>(ctx);
    ok = ok && lie.ok();
    line("5", ok, "sdet = 1, g^st J g = J, alpha beta = gamma delta, factorization round-trip (200 exact), "
                  "Lie relations exact");
}

void criterion_6() {
    AlgebraContext ctx(8);
    Rng rng(666);
    bool unit = true, additive = true, locus = true;
    auto one = GF::scalar(ctx, F(1.0));
    for (int trial = 0; trial < 20; ++trial) {
        auto P = anchored_ih_point(ctx, rng, 0, {1, 2});
        auto Q = anchored_ih_point(ctx, rng, 1, {3, 4});
        auto gt = geodesic_through(P, Q);
        for (int k = 0; k < 20; ++k) {
            double s = -2.0 + 4.0 * rng.uniform();
            auto X = geodesic_point(gt.line, GF::scalar(ctx, F(s)));
            if (max_abs_diff(quadratic_form(X), one) > 1e-10) unit = false;
            if (max_abs_diff(locus_product(gt.line, X), one) > 1e-12) locus = false;
        }
        double s1 = -1.0 + 2.0 * rng.uniform(), s2 = -1.0 + 2.0 * rng.uniform();
        if (std::abs(s1 - s2) > 1e-3) {
            auto X1 = geodesic_point(gt.line, GF::scalar(ctx, F(s1)));
            auto X2 = geodesic_point(gt.line, GF::scalar(ctx, F(s2)));
            if (max_abs_diff(distance(X1, X2), GF::scalar(ctx, F(std::abs(s2 - s1)))) > 1e-10)
                additive = false;
        }
    }
    line("6", unit && additive && locus,
         "geodesics: unit form at 20 samples (1e-10), distance additivity (1e-10), locus product = 1 "
         "(1e-12)");
}

void criterion_7() {
    AlgebraContext ctx(12);
    Rng rng(777);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        auto P = anchored_ih_point(ctx, rng, 0, {1, 2});
        auto Q = anchored_ih_point(ctx, rng, 1, {3, 4});
        auto R = anchored_ih_point(ctx, rng, 2, {5, 6});
        auto dd = distance(P, Q);
        auto df = distance(P, R);
        auto cosA = -inner(tangent(P, Q), tangent(P, R));
        auto res = inner(Q, R) - lift_analytic(AnalyticFn::Cosh, dd) * lift_analytic(AnalyticFn::Cosh, df) +
                   lift_analytic(AnalyticFn::Sinh, dd) * lift_analytic(AnalyticFn::Sinh, df) * cosA;
        if (res.max_abs_coeff() > 1e-9) ok = false;
    }
    line("7", ok, "law-of-cosines residual < 1e-9 on 100 random triangles with fermionic souls (float)");
}

void criterion_8() {
    AlgebraContext ctx(16);
    Rng rng(888);
    bool routes = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::array<SuperPoint<F>, 4> pts{
            anchored_ih_point(ctx, rng, 0, {1, 2}), anchored_ih_point(ctx, rng, 1, {3, 4}),
            anchored_ih_point(ctx, rng, 2, {5, 6}), anchored_ih_point(ctx, rng, 3, {7, 8})};
        auto g = gram(pts);
        for (int k = 0; k < 4 && routes; ++k)
            for (int l = k + 1; l < 4 && routes; ++l) {
                auto c1 = dihedral_cos(g, k, l);
                auto c2 = dihedral_cos_explicit(g, k, l);
                auto c3 = dihedral_cos_projection(pts, k, l);
                if (max_abs_diff(c1, c2) > 1e-9 || max_abs_diff(c1, c3) > 1e-9) routes = false;
            }
    }
    bool symmetric = true;
    {
        GramData<F> g;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) g.at(i, j) = GF::scalar(ctx, F(i == j ? 1.0 : 2.0));
        double first = ScalarOps<F>::to_complex(dihedral_cos(g, 0, 1).body()).real();
        for (int k = 0; k < 4; ++k)
            for (int l = k + 1; l < 4; ++l)
                if (std::abs(ScalarOps<F>::to_complex(dihedral_cos(g, k, l).body()).real() - first) > 1e-12)
                    symmetric = false;
    }
    line("8", routes && symmetric,
         "dihedral cosines: cofactor vs explicit vs projection within 1e-9 on 50 tetrahedra; all-2 Gram "
         "gives six equal cosines (1e-12)");
}

void criterion_9() {
    AlgebraContext ctx(8);
    Rng rng(999);
    bool ok = true;
    auto one = GE::scalar(ctx, SE(rat(1)));
    for (int trial = 0; trial < 100; ++trial) {
        auto x2 = g_scalar<SE>(ctx, {random_rational(rng, true), rat(0)});
        auto x = g_scalar<SE>(ctx, random_gaussian(rng));
        auto phi = random_odd<SE>(ctx, rng, {1, 2, 3, 4});
        auto psi = random_odd<SE>(ctx, rng, {1, 2, 3, 4});
        auto ps = phi * psi;
        auto x1 = (one + x * x.conjugate() - ps - ps.conjugate()) * x2.inverse();
        auto p = SuperPoint<SE>::make(x1, x2, x, phi, psi);
        auto res = kill_fermions(p);
        ok = ok && res.image.phi.is_zero() && res.image.psi.is_zero();
        ok = ok && res.image.x1 == res.K * p.x1 && res.image.x2 == res.K * p.x2 &&
             res.image.x == res.K * p.x;
        ok = ok && (-(res.u.matrix().delta()) * res.u.matrix().gamma() == ps);
        ok = ok && (res.K * res.K * (one - ps - ps.conjugate()) == one);
    }
    line("9", ok, "fermion killing: image fermions exactly zero, scale exactly K, alpha beta = phi psi, "
                  "K^{-2} identity exact, 100 trials");
}

void criterion_10() {
    AlgebraContext ctx(4);
    Rng rng(1010);
    bool ok = true;
    for (int trial = 0; trial < 3; ++trial) {
        auto phi = GF::generator(ctx, 1) * F(std::complex<double>(0.3 * rng.uniform(), 0.2 * rng.uniform()));
        auto psi = GF::generator(ctx, 2) * F(std::complex<double>(0.25 * rng.uniform(), -0.3 * rng.uniform()));
        double x2lo = 0.6 + rng.uniform();
        auto rep = stokes_check(ctx, x2lo, x2lo * (1.1 + 0.3 * rng.uniform()), rng.uniform() - 0.5,
                                rng.uniform() - 0.5 + 0.3, rng.uniform() - 0.5, rng.uniform() - 0.5 + 0.25,
                                phi, psi);
        if (rep.rel_err > 1e-6) ok = false;
    }
    line("10", ok, "Stokes: boundary integral of the primitive equals the interior volume integral within "
                   "1e-6 relative on random small cells");
}

void criterion_11() {
    auto t0 = std::chrono::steady_clock::now();
    AlgebraContext ctx(8);
    auto fix = make_ideal_face_fixture<F>(ctx, true);
    auto series = face_integral_series(fix.vertices, {1e-1, 1e-2, 1e-3, 1e-4}, 50.0);
    auto rep = divergence_fit(series);
    bool exponent = false, r2 = false;
    for (const auto& ch : rep.channels)
        if (ch.monomial == fix.mu_rho && ch.fitted) {
            exponent = ch.exponent > -1.05 && ch.exponent < -0.95;
            r2 = ch.r2 > 0.999;
        }
    bool cauchy = rep.body_cauchy < 1e-6;
    double dt = seconds_since(t0);
    std::ostringstream d;
    d << "divergence: mu-rho exponent in [-1.05,-0.95], r2 > 0.999 over eps 1e-1..1e-4; body Cauchy < 1e-6 "
         "on the cutoff-extrapolated estimates ("
      << dt << " s, target < 300 s)";
    line("11", exponent && r2 && cauchy && dt < 300.0, d.str());
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion_12_impl(const std::string& cli) {
    std::string out1 = "/tmp/superhyp_accept_det1.json";
    std::string out2 = "/tmp/superhyp_accept_det2.json";
    std::string cmd1 = cli + " verify-invariance --trials 40 --gens 8 --seed 11 --out " + out1;
    std::string cmd2 = cli + " verify-invariance --trials 40 --gens 8 --seed 11 --out " + out2;
    int rc1 = std::system(cmd1.c_str());
    int rc2 = std::system(cmd2.c_str());
    bool ok = WIFEXITED(rc1) && WEXITSTATUS(rc1) == 0 && WIFEXITED(rc2) && WEXITSTATUS(rc2) == 0;
    std::string a = slurp(out1), b = slurp(out2);
    ok = ok && !a.empty() && a == b;
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    line("12", ok, "determinism: repeated exact-mode CLI runs are byte-identical");
}

} // namespace

int main(int argc, char** argv) {
    g_start = std::chrono::steady_clock::now();
    criteria_1_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (argc > 1) {
        criterion_12_impl(argv[1]);
    } else {
        line("12", false, "determinism: CLI path not supplied (pass the superhyp-cli path as argv[1])");
    }

    double dt = seconds_since(g_start);
    std::printf("----\n");
    if (g_failures == 0) {
        std::printf("all criteria pass (%.1f s)\n", dt);
    } else {
        std::printf("%d failing line(s) (%.1f s). The theta' = -2 theta clause of criterion 3 "
                    "contradicts the conventions every other identity fixes; the verified corner laws "
                    "are reported on the 3d' line. See the README notes.\n",
                    g_failures, dt);
    }
    return g_failures == 0 ? 0 : 1;
}
