#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "superhyp/geometry.hpp"

namespace superhyp {

/// K = 1 + (1/2)(phi psi + phibar psibar) + (3/4) phi psi phibar psibar.
/// Conjugation-fixed; K^{-2} = 1 - phi psi - phibar psibar.
template <class S>
GrassmannNumber<S> K_factor(const GrassmannNumber<S>& phi, const GrassmannNumber<S>& psi) {
    using G = GrassmannNumber<S>;
    if (!phi.is_odd() || !psi.is_odd()) throw ParityError("K_factor requires odd inputs");
    const AlgebraContext* ctx = phi.context() ? phi.context() : psi.context();
    if (!ctx) throw ContextMismatchError("K_factor requires context-bound arguments");
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    G half = G::scalar(*ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));
    G threequarter = G::scalar(*ctx, ScalarOps<S>::from_int(3) *
                                         (ScalarOps<S>::one() / ScalarOps<S>::from_int(4)));
    G ps = phi * psi;
    G psc = ps.conjugate();
    return one + half * (ps + psc) + threequarter * (ps * psc);
}

template <class S>
struct FermionKill {
    OspElement<S> u;
    SuperPoint<S> image; // fermions exactly zero
    GrassmannNumber<S> K;
};

/// The fermion-killing normalization: for Q(P) = 1, acting with
/// u(alpha, beta), (alpha;beta) = (1 + phibar psibar/2)(-x2 xbar; x -x1)(phi;psi),
/// zeroes the fermions and scales the bosons by K exactly; alpha beta = phi psi.
template <class S>
FermionKill<S> kill_fermions(const SuperPoint<S>& p) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *p.context();
    G one = G::scalar(ctx, ScalarOps<S>::one());
    const double tol = ScalarOps<S>::is_exact ? 0.0 : 1e-10;
    if (!all_coeffs_within(quadratic_form(p) - one, tol))
        throw DegenerateInputError("kill_fermions: point does not satisfy Q = 1");

    G half = G::scalar(ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));
    G pref = one + half * (p.phi.conjugate() * p.psi.conjugate());
    G alpha = pref * (-(p.x2 * p.phi) + p.x.conjugate() * p.psi);
    G beta = pref * (p.x * p.phi - p.x1 * p.psi);
    auto u = make_u(alpha, beta);
    auto res = act(u, p);

    if constexpr (ScalarOps<S>::is_exact) {
        if (!res.point.phi.is_zero() || !res.point.psi.is_zero())
            throw NumericError("kill_fermions: image fermions did not vanish");
        if (!(alpha * beta == p.phi * p.psi))
            throw NumericError("kill_fermions: alpha beta != phi psi");
    }
    return {std::move(u), res.point, K_factor(p.phi, p.psi)};
}

/// Coefficient of a differential form at a chart point, expanded over
/// Grassmann monomials with real coefficients.
struct FormValue {
    std::map<std::uint64_t, double> c;

    double body() const {
        auto it = c.find(0);
        return it == c.end() ? 0.0 : it->second;
    }
};

namespace detail {

template <class S>
FormValue form_value_of(const GrassmannNumber<S>& g) {
    FormValue v;
    for (const auto& [m, coeff] : g.terms()) {
        auto z = ScalarOps<S>::to_complex(coeff);
        if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real())))
            throw NumericError("form coefficient is not real");
        v.c[m] = z.real();
    }
    return v;
}

} // namespace detail

/// Chart point (x2, u, v | phi, psi) on the hyperboloid: bosonic box
/// coordinates as plain reals, fermions as Grassmann parameters
/// (x1 is eliminated through Q = 1).
template <class S>
struct ChartPoint {
    double x2 = 1.0, u = 0.0, v = 0.0;
    GrassmannNumber<S> phi, psi;
};

/// Volume form coefficient at a chart point, with respect to the declared
/// positive orientation dlog(x2) ^ du ^ dv:
///   Vol = K^{-2} dlog(x2) ^ du ^ dv,   K^{-2} = 1 - phi psi - phibar psibar.
/// Its body coefficient is 1, the classical hyperbolic volume form in this
/// chart orientation, and Vol = d Omega for the primitive below.
template <class S>
FormValue vol_form(const ChartPoint<S>& pt) {
    using G = GrassmannNumber<S>;
    const AlgebraContext* ctx = pt.phi.context() ? pt.phi.context() : pt.psi.context();
    if (!ctx) throw ContextMismatchError("vol_form requires context-bound fermions");
    if (!(pt.x2 > 0.0)) throw DomainError("vol_form: chart requires x2 > 0");
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    G ps = pt.phi * pt.psi;
    return detail::form_value_of(one - ps - ps.conjugate());
}

/// The primitive 2-form, by components in the coordinate basis:
///   Omega = (1 - phi psi - phibar psibar)/2 { dv^du + dlog(x2)^(v du - u dv) }.
struct OmegaValue {
    FormValue dv_du;      // coefficient of dv ^ du
    FormValue dlx2_du;    // coefficient of dlog(x2) ^ du
    FormValue dlx2_dv;    // coefficient of dlog(x2) ^ dv
};

template <class S>
OmegaValue omega_primitive(const ChartPoint<S>& pt) {
    using G = GrassmannNumber<S>;
    const AlgebraContext* ctx = pt.phi.context() ? pt.phi.context() : pt.psi.context();
    if (!ctx) throw ContextMismatchError("omega_primitive requires context-bound fermions");
    if (!(pt.x2 > 0.0)) throw DomainError("omega_primitive: chart requires x2 > 0");
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    G half = G::scalar(*ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));
    G ps = pt.phi * pt.psi;
    G k2 = one - ps - ps.conjugate();
    G c1 = half * k2;
    OmegaValue w;
    w.dv_du = detail::form_value_of(c1);
    w.dlx2_du = detail::form_value_of(c1 * S(pt.v));
    w.dlx2_dv = detail::form_value_of(-(c1 * S(pt.u)));
    return w;
}

// ---------------------------------------------------------------------------
// Quadrature: 15-point Gauss-Legendre panels with nested bisection refinement.
// ---------------------------------------------------------------------------

namespace detail {

inline const std::array<double, 8>& gl15_nodes() {
    static const std::array<double, 8> x{0.0,
                                         0.2011940939974345,
                                         0.3941513470775634,
                                         0.5709721726085388,
                                         0.7244177313601700,
                                         0.8482065834104272,
                                         0.9372733924007059,
                                         0.9879925180204854};
    return x;
}

inline const std::array<double, 8>& gl15_weights() {
    static const std::array<double, 8> w{0.2025782419255613,
                                         0.1984314853271116,
                                         0.1861610000155622,
                                         0.1662692058169939,
                                         0.1395706779261543,
                                         0.1071592204671719,
                                         0.0703660474881081,
                                         0.0307532419961173};
    return w;
}

using Channels = std::map<std::uint64_t, double>;

inline void axpy(Channels& acc, double a, const Channels& x) {
    for (const auto& [m, v] : x) acc[m] += a * v;
}

inline double max_diff(const Channels& a, const Channels& b) {
    double m = 0.0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        m = std::max(m, std::abs(v - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, v] : b)
        if (!a.count(k)) m = std::max(m, std::abs(v));
    return m;
}

template <class F>
Channels gl15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    Channels acc;
    const auto& xs = gl15_nodes();
    const auto& ws = gl15_weights();
    axpy(acc, ws[0] * hw, f(mid));
    for (std::size_t i = 1; i < xs.size(); ++i) {
        axpy(acc, ws[i] * hw, f(mid - hw * xs[i]));
        axpy(acc, ws[i] * hw, f(mid + hw * xs[i]));
    }
    return acc;
}

/// Nested rule: accept the bisected estimate when it agrees with the whole
/// panel to tol; recurse otherwise.
template <class F>
Channels adaptive_panel(F&& f, double a, double b, double tol, int depth = 0) {
    Channels whole = gl15(f, a, b);
    double mid = 0.5 * (a + b);
    Channels left = gl15(f, a, mid);
    Channels right = gl15(f, mid, b);
    Channels sum = left;
    axpy(sum, 1.0, right);
    if (depth >= 10 || max_diff(whole, sum) <= tol) return sum;
    Channels fine = adaptive_panel(f, a, mid, 0.5 * tol, depth + 1);
    axpy(fine, 1.0, adaptive_panel(f, mid, b, 0.5 * tol, depth + 1));
    return fine;
}

/// Geometric panel boundaries from a to b (a > 0), ratio 2 per panel.
inline std::vector<double> geometric_panels(double a, double b) {
    std::vector<double> cuts{a};
    double x = a;
    while (x * 2.0 < b) {
        x *= 2.0;
        cuts.push_back(x);
    }
    cuts.push_back(b);
    return cuts;
}

} // namespace detail

/// Boundary-vs-interior Stokes comparison for a coordinate 3-cell
/// [x2] x [u] x [v] at fixed fermion parameters: integrates Omega over the
/// six oriented faces and Vol over the interior, both numerically, and
/// reports the per-monomial values and the max relative difference.
template <class S>
struct StokesReport {
    GrassmannNumber<S> boundary, interior;
    double rel_err = 0.0;
};

template <class S>
StokesReport<S> stokes_check(const AlgebraContext& ctx, double x2_lo, double x2_hi, double u_lo, double u_hi,
                             double v_lo, double v_hi, const GrassmannNumber<S>& phi,
                             const GrassmannNumber<S>& psi, double tol = 1e-9) {
    using G = GrassmannNumber<S>;
    if (!(x2_lo > 0.0) || !(x2_hi > x2_lo)) throw DomainError("stokes_check: need 0 < x2_lo < x2_hi");
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G ps = phi * psi;
    G k2 = one - ps - ps.conjugate();
    auto channels_of = [&](const G& g) {
        detail::Channels ch;
        for (const auto& [m, c] : g.terms()) ch[m] = ScalarOps<S>::to_complex(c).real();
        return ch;
    };
    detail::Channels k2ch = channels_of(k2);

    // Interior: Vol = (K^{-2}/x2) dx2 ^ du ^ dv over the box.
    detail::Channels interior;
    {
        auto fx2 = [&](double x2) {
            detail::Channels ch = k2ch;
            for (auto& [m, v] : ch) v /= x2;
            return ch;
        };
        detail::Channels ix2 = detail::adaptive_panel(fx2, x2_lo, x2_hi, tol);
        detail::axpy(interior, (u_hi - u_lo) * (v_hi - v_lo), ix2);
    }

    // Boundary: Omega = -(K^{-2}/2) du^dv + (K^{-2} v/(2 x2)) dx2^du
    //           - (K^{-2} u/(2 x2)) dx2^dv, integrated over the oriented faces.
    detail::Channels boundary;
    {
        // x2-faces carry -(K^{-2}/2) du^dv; orientation +du^dv on top, - on bottom.
        auto f_const = [&](double) { return k2ch; };
        detail::Channels du_int = detail::adaptive_panel(f_const, u_lo, u_hi, tol);
        double dv_len = v_hi - v_lo;
        detail::Channels top = du_int, bot = du_int;
        detail::axpy(boundary, -0.5 * dv_len, top);
        detail::axpy(boundary, +0.5 * dv_len, bot);

        // u-faces carry -(K^{-2} u/(2 x2)) dx2^dv; orientation -dx2^dv on top.
        auto f_logx2 = [&](double x2) {
            detail::Channels ch = k2ch;
            for (auto& [m, v] : ch) v /= x2;
            return ch;
        };
        detail::Channels ilog = detail::adaptive_panel(f_logx2, x2_lo, x2_hi, tol);
        detail::axpy(boundary, +0.5 * u_hi * dv_len, ilog);
        detail::axpy(boundary, -0.5 * u_lo * dv_len, ilog);

        // v-faces carry (K^{-2} v/(2 x2)) dx2^du; orientation +dx2^du on top.
        double du_len = u_hi - u_lo;
        detail::axpy(boundary, +0.5 * v_hi * du_len, ilog);
        detail::axpy(boundary, -0.5 * v_lo * du_len, ilog);
    }

    auto to_g = [&](const detail::Channels& ch) {
        G g = G::scalar(ctx, ScalarOps<S>::zero());
        for (const auto& [m, v] : ch) {
            if (v == 0.0) continue;
            G term;
            // reconstruct the monomial by indices
            std::uint64_t mm = m;
            term = G::scalar(ctx, S(v));
            while (mm) {
                int i = std::countr_zero(mm);
                term = term * G::generator(ctx, i + 1);
                mm &= mm - 1;
            }
            g += term;
        }
        return g;
    };
    StokesReport<S> rep;
    rep.boundary = to_g(boundary);
    rep.interior = to_g(interior);
    double scale = std::max(1e-30, rep.interior.max_abs_coeff());
    rep.rel_err = max_abs_diff(rep.boundary, rep.interior) / scale;
    return rep;
}

/// Jacobian determinant of the chart map (log x2, u, v) -> image chart under
/// a group action, by central finite differences; equals 1 for isometries.
template <class S>
double chart_jacobian(const OspElement<S>& g, const ChartPoint<S>& pt, double h = 1e-5) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = g.context();
    auto lift_point = [&](double x2, double u, double v) {
        // x1 from Q = 1 with the fixed fermions (body-level chart).
        G gx2 = G::scalar(ctx, S(x2));
        G gx = G::scalar(ctx, S(std::complex<double>(u, v)));
        G ps = pt.phi * pt.psi;
        G num = G::scalar(ctx, ScalarOps<S>::one()) + gx * gx.conjugate() - ps - ps.conjugate();
        return SuperPoint<S>::make(num * gx2.inverse(), gx2, gx, pt.phi, pt.psi);
    };
    auto image_chart = [&](double x2, double u, double v) {
        auto res = act(g, lift_point(x2, u, v));
        auto z = ScalarOps<S>::to_complex(res.point.x.body());
        double ix2 = ScalarOps<S>::to_complex(res.point.x2.body()).real();
        return std::array<double, 3>{std::log(ix2), z.real(), z.imag()};
    };
    // columns: d(image)/d(log x2), d/du, d/dv
    std::array<std::array<double, 3>, 3> Jm{};
    auto base_x2 = pt.x2;
    for (int c = 0; c < 3; ++c) {
        std::array<double, 3> plus{}, minus{};
        if (c == 0) {
            plus = image_chart(base_x2 * std::exp(h), pt.u, pt.v);
            minus = image_chart(base_x2 * std::exp(-h), pt.u, pt.v);
        } else if (c == 1) {
            plus = image_chart(base_x2, pt.u + h, pt.v);
            minus = image_chart(base_x2, pt.u - h, pt.v);
        } else {
            plus = image_chart(base_x2, pt.u, pt.v + h);
            minus = image_chart(base_x2, pt.u, pt.v - h);
        }
        for (int r = 0; r < 3; ++r) Jm[std::size_t(r)][std::size_t(c)] = (plus[std::size_t(r)] - minus[std::size_t(r)]) / (2.0 * h);
    }
    return Jm[0][0] * (Jm[1][1] * Jm[2][2] - Jm[1][2] * Jm[2][1]) -
           Jm[0][1] * (Jm[1][0] * Jm[2][2] - Jm[1][2] * Jm[2][0]) +
           Jm[0][2] * (Jm[1][0] * Jm[2][1] - Jm[1][1] * Jm[2][0]);
}

// ---------------------------------------------------------------------------
// Ideal-face integral and the divergence diagnostic.
// ---------------------------------------------------------------------------

/// Per-monomial values of the face integral of the primitive over the ideal
/// triangle chart, at a family of lower cutoffs eps (t in [eps, s_+/2],
/// s in [2 + delta, smax]).
struct FaceIntegralSeries {
    std::vector<double> eps;                                // descending
    std::map<std::uint64_t, std::vector<double>> channels;  // per monomial, per eps
};

/// Face integrand: the proof's reduction of Omega to the triangle,
/// (u*/2) K^{-2}(s,t) [x2_s v_t - x2_t v_s] / x2(s,t) dt ds, evaluated with
/// full Grassmann arithmetic; u* is the transverse offset of the face (mean
/// real part of the vertex x-coordinates).
template <class S>
FaceIntegralSeries face_integral_series(const std::array<SuperPoint<S>, 3>& verts, std::vector<double> eps,
                                        double smax, double panel_tol = 1e-9) {
    static_assert(!ScalarOps<S>::is_exact, "face integrals run in float mode");
    using G = GrassmannNumber<S>;
    if (eps.empty()) throw NumericError("face_integral: need at least one eps");
    std::sort(eps.begin(), eps.end(), std::greater<double>());
    for (double e : eps)
        if (!(e > 0.0)) throw NumericError("face_integral: eps must be positive");
    if (!(smax > 2.0)) throw NumericError("face_integral: smax must exceed 2");

    const AlgebraContext& ctx = *verts[0].context();
    // Normalized ideal vertices required: <X_i, X_j> = 2.
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            auto ip = inner(verts[std::size_t(i)], verts[std::size_t(j)]);
            if (std::abs(ScalarOps<S>::to_complex(ip.body()).real() - 2.0) > 1e-6)
                throw DegenerateInputError("face_integral: vertices are not pairwise normalized to 2");
        }

    S half_i = S(std::complex<double>(0.0, -0.5)); // (x - xbar) * (-i/2) = Im x
    std::array<G, 3> x2s, vs, phis, psis;
    double u_star = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& P = verts[std::size_t(i)];
        x2s[std::size_t(i)] = P.x2;
        vs[std::size_t(i)] = (P.x - P.x.conjugate()) * half_i;
        phis[std::size_t(i)] = P.phi;
        psis[std::size_t(i)] = P.psi;
        u_star += ScalarOps<S>::to_complex(P.x.body()).real() / 3.0;
    }
    G one = G::scalar(ctx, ScalarOps<S>::one());

    // t-integrand at fixed (s, t): full Grassmann evaluation.
    auto integrand = [&](double s, double t) {
        double root = std::sqrt(s * s - 4.0);
        double sm = s - root, sp = s + root;
        double dsm = 1.0 - s / root, dsp = 1.0 + s / root;
        double a = 0.5 / t - 0.5 * t / (s * s);
        double b = t / (s * sm);
        double c = t / (s * sp);
        double a_t = -0.5 / (t * t) - 0.5 / (s * s);
        double b_t = 1.0 / (s * sm);
        double c_t = 1.0 / (s * sp);
        double a_s = t / (s * s * s);
        double b_s = -t * (sm + s * dsm) / (s * sm * s * sm);
        double c_s = -t * (sp + s * dsp) / (s * sp * s * sp);

        auto comb = [&](const std::array<G, 3>& w, double ca, double cb, double cc) {
            return w[0] * S(ca) + w[1] * S(cb) + w[2] * S(cc);
        };
        G x2 = comb(x2s, a, b, c);
        G x2_s = comb(x2s, a_s, b_s, c_s);
        G x2_t = comb(x2s, a_t, b_t, c_t);
        G v_s = comb(vs, a_s, b_s, c_s);
        G v_t = comb(vs, a_t, b_t, c_t);
        G phi = comb(phis, a, b, c);
        G psi = comb(psis, a, b, c);
        G ps = phi * psi;
        G k2 = one - ps - ps.conjugate();
        G val = (k2 * (x2_s * v_t - x2_t * v_s)) * x2.inverse() * S(0.5 * u_star);
        detail::Channels ch;
        for (const auto& [m, coeff] : val.terms()) {
            auto z = ScalarOps<S>::to_complex(coeff);
            ch[m] = z.real();
        }
        return ch;
    };

    const double s_lo = 2.0 + 1e-6;
    // s-panel boundaries: graded toward s = 2, then geometric to smax.
    std::vector<double> s_cuts{s_lo};
    for (double h = 1e-5; 2.0 + h < std::min(3.0, smax); h *= 4.0) s_cuts.push_back(2.0 + h);
    for (double x = 3.0; x < smax; x *= 2.0) s_cuts.push_back(x);
    s_cuts.push_back(smax);
    std::sort(s_cuts.begin(), s_cuts.end());
    s_cuts.erase(std::unique(s_cuts.begin(), s_cuts.end()), s_cuts.end());

    // t-integral of the integrand over [from, to] at fixed s.
    auto t_segment = [&](double s, double from, double to) {
        detail::Channels acc;
        if (!(to > from)) return acc;
        auto cuts = detail::geometric_panels(from, to);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            detail::axpy(acc, 1.0,
                         detail::adaptive_panel([&](double t) { return integrand(s, t); }, cuts[i],
                                                cuts[i + 1], panel_tol));
        return acc;
    };

    FaceIntegralSeries out;
    out.eps = eps;
    std::vector<detail::Channels> totals(eps.size());

    // Segment the t-range at the eps values once: I(eps_k) = sum of segments
    // above eps_k, so the whole eps family costs one sweep.
    for (std::size_t seg = 0; seg < eps.size(); ++seg) {
        double t_from = eps[seg];
        double t_to_prev = (seg == 0) ? -1.0 : eps[seg - 1]; // segment [eps_seg, eps_{seg-1}]
        auto seg_fn = [&](double s) {
            double root = std::sqrt(std::max(s * s - 4.0, 0.0));
            double t_top = 0.5 * (s + root);
            double hi = (seg == 0) ? t_top : std::min(t_to_prev, t_top);
            double lo = std::min(t_from, hi);
            return t_segment(s, lo, hi);
        };
        detail::Channels seg_total;
        for (std::size_t i = 0; i + 1 < s_cuts.size(); ++i)
            detail::axpy(seg_total, 1.0, detail::adaptive_panel(seg_fn, s_cuts[i], s_cuts[i + 1], panel_tol));
        // segment [eps_seg, eps_{seg-1}] belongs to every I(eps_k) with k >= seg
        for (std::size_t k = seg; k < eps.size(); ++k) detail::axpy(totals[k], 1.0, seg_total);
    }

    for (std::size_t k = 0; k < eps.size(); ++k)
        for (const auto& [m, v] : totals[k]) out.channels[m].resize(eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k)
        for (const auto& [m, v] : totals[k]) out.channels[m][k] = v;
    return out;
}

/// Single-cutoff convenience wrapper.
template <class S>
std::map<std::uint64_t, double> face_integral(const std::array<SuperPoint<S>, 3>& verts, double eps,
                                              double smax, double panel_tol = 1e-9) {
    auto series = face_integral_series(verts, {eps}, smax, panel_tol);
    std::map<std::uint64_t, double> out;
    for (const auto& [m, v] : series.channels) out[m] = v[0];
    return out;
}

/// Power-law fit result per monomial channel.
struct ChannelFit {
    std::uint64_t monomial = 0;
    std::vector<double> values;
    double exponent = 0.0;
    double r2 = 0.0;
    bool fitted = false; // false when the channel is (numerically) zero
};

struct DivergenceReport {
    std::vector<double> eps;
    std::vector<ChannelFit> channels;
    std::vector<double> body_values;       // raw [eps, s_+/2] truncations
    std::vector<double> body_extrapolated; // cutoff-bias removed (see below)
    double body_cauchy = 0.0;
};

namespace detail {

/// Quadratic Richardson extrapolation of I(eps) to eps -> 0 through three
/// cutoffs: removes the O(eps) + O(eps^2) truncation bias of a convergent
/// channel (the integrand extends continuously to the t = 0 edge, so the raw
/// truncations differ by O(delta eps), which is cutoff shape, not value).
inline double extrapolate3(const std::array<double, 3>& e, const std::array<double, 3>& v) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) w *= e[std::size_t(j)] / (e[std::size_t(j)] - e[std::size_t(i)]);
        acc += w * v[std::size_t(i)];
    }
    return acc;
}

} // namespace detail

/// Fits I(eps) ~ C eps^p per channel over the cutoff grid (log-log least
/// squares); requires at least four cutoffs spanning two decades. The body
/// channel additionally gets its eps -> 0 value estimated by quadratic
/// extrapolation over consecutive cutoff triples; body_cauchy is the increment
/// between the last two estimates.
inline DivergenceReport divergence_fit(const FaceIntegralSeries& series) {
    if (series.eps.size() < 4) throw NumericError("divergence_fit: need at least 4 cutoffs");
    double span = series.eps.front() / series.eps.back();
    if (!(span >= 99.0)) throw NumericError("divergence_fit: cutoffs must span at least two decades");

    DivergenceReport rep;
    rep.eps = series.eps;
    for (const auto& [m, vals] : series.channels) {
        ChannelFit fit;
        fit.monomial = m;
        fit.values = vals;
        double vmax = 0.0;
        for (double v : vals) vmax = std::max(vmax, std::abs(v));
        if (vmax > 1e-10) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
            std::size_t n = vals.size();
            bool usable = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(vals[i]) < 1e-300) usable = false;
            }
            if (usable) {
                for (std::size_t i = 0; i < n; ++i) {
                    double x = std::log(series.eps[i]);
                    double y = std::log(std::abs(vals[i]));
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    sxy += x * y;
                    syy += y * y;
                }
                double dn = double(n);
                double denom = dn * sxx - sx * sx;
                if (std::abs(denom) < 1e-12) throw NumericError("divergence_fit: degenerate regression");
                fit.exponent = (dn * sxy - sx * sy) / denom;
                double ss_res = 0.0, ybar = sy / dn, ss_tot = 0.0;
                double intercept = (sy - fit.exponent * sx) / dn;
                for (std::size_t i = 0; i < n; ++i) {
                    double x = std::log(series.eps[i]);
                    double y = std::log(std::abs(vals[i]));
                    double e = y - (intercept + fit.exponent * x);
                    ss_res += e * e;
                    ss_tot += (y - ybar) * (y - ybar);
                }
                fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
                fit.fitted = true;
            }
        }
        if (m == 0) {
            rep.body_values = vals;
            for (std::size_t k = 0; k + 2 < vals.size(); ++k)
                rep.body_extrapolated.push_back(detail::extrapolate3(
                    {series.eps[k], series.eps[k + 1], series.eps[k + 2]},
                    {vals[k], vals[k + 1], vals[k + 2]}));
            if (rep.body_extrapolated.size() >= 2) {
                auto n = rep.body_extrapolated.size();
                rep.body_cauchy = std::abs(rep.body_extrapolated[n - 1] - rep.body_extrapolated[n - 2]);
            } else if (vals.size() >= 2) {
                rep.body_cauchy = std::abs(vals[vals.size() - 1] - vals[vals.size() - 2]);
            }
        }
        rep.channels.push_back(std::move(fit));
    }
    return rep;
}

/// Deterministic ideal-tetrahedron face fixture: boundary points with a
/// common transverse offset, fermion pairs (mu;rho), (mu;sigma), (mu;tau)
/// twisted through a fixed SL(2,C) frame, normalized to <X_i,X_j> = 2.
/// Monomial keys of mu*rho, mu*sigma, mu*tau: {1,2}, {1,3}, {1,4}.
template <class S>
struct IdealFaceFixture {
    std::array<SuperPoint<S>, 3> vertices;
    std::uint64_t mu_rho = 0b0011, mu_sigma = 0b0101, mu_tau = 0b1001;
};

template <class S>
IdealFaceFixture<S> make_ideal_face_fixture(const AlgebraContext& ctx, bool with_fermions) {
    static_assert(!ScalarOps<S>::is_exact, "the divergence fixture is a float-mode object");
    using G = GrassmannNumber<S>;
    using C = std::complex<double>;
    if (ctx.generator_count() < 4) throw DomainError("fixture needs at least 4 generators");

    auto sc = [&](C z) { return G::scalar(ctx, z); };
    G mu = G::generator(ctx, 1), rho = G::generator(ctx, 2);
    G sigma = G::generator(ctx, 3), tau = G::generator(ctx, 4);
    // Fixed SL(2,C) frame with d = (1+bc)/a.
    C fa(1.0, 0.2), fb(0.3, -0.1), fc(-0.2, 0.4);
    C fd = (C(1.0, 0.0) + fb * fc) / fa;

    const double u_star = 0.8;
    std::array<double, 3> vimag{1.3, -0.7, 2.1};
    std::array<double, 3> scale{1.0, 1.4, 0.9};
    std::array<G, 3> firsts{mu, mu, mu};
    std::array<G, 3> seconds{rho, sigma, tau};

    std::array<SuperPoint<S>, 3> raw;
    for (int i = 0; i < 3; ++i) {
        C zeta(u_star, vimag[std::size_t(i)]);
        G x2 = sc(scale[std::size_t(i)]);
        G x = sc(scale[std::size_t(i)] * zeta);
        G phi = G::scalar(ctx, ScalarOps<S>::zero());
        G psi = phi;
        if (with_fermions) {
            phi = sc(fa) * firsts[std::size_t(i)] + sc(fb) * seconds[std::size_t(i)];
            psi = sc(fc) * firsts[std::size_t(i)] + sc(fd) * seconds[std::size_t(i)];
        }
        G ps = phi * psi;
        G x1 = (x * x.conjugate() - ps - ps.conjugate()) * x2.inverse();
        raw[std::size_t(i)] = SuperPoint<S>::make(x1, x2, x, phi, psi);
    }
    IdealFaceFixture<S> fix;
    fix.vertices = normalize_ideal_triple(raw[0], raw[1], raw[2]);
    return fix;
}

} // namespace superhyp
