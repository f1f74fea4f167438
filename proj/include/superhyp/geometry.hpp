#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "superhyp/minkowski.hpp"

namespace superhyp {

/// Tolerance used by geometry-level postcondition checks (float mode).
template <class S>
inline constexpr double geom_tol = ScalarOps<S>::is_exact ? 0.0 : 1e-9;

/// Super geodesic: U on the hyperboloid (<U,U> = 1), V spacelike
/// (<V,V> = -1), <U,V> = 0, with isotropic representatives E = U+V,
/// F = U-V satisfying <E,F> = 2. Points are (exp(s) E + exp(-s) F)/2.
template <class S>
struct Geodesic {
    SuperPoint<S> U, V, E, F;

    static Geodesic make(SuperPoint<S> u, SuperPoint<S> v) {
        const AlgebraContext* ctx = u.context();
        if (!ctx) throw ContextMismatchError("geodesic requires context-bound points");
        using G = GrassmannNumber<S>;
        G one = G::scalar(*ctx, ScalarOps<S>::one());
        const double tol = ScalarOps<S>::is_exact ? 0.0 : 1e-8;
        if (!all_coeffs_within(inner(u, u) - one, tol) || !all_coeffs_within(inner(v, v) + one, tol) ||
            !all_coeffs_within(inner(u, v), tol))
            throw DegenerateInputError("geodesic data violates <U,U>=1, <V,V>=-1, <U,V>=0");
        SuperPoint<S> e = u + v, f = u - v;
        return Geodesic{std::move(u), std::move(v), std::move(e), std::move(f)};
    }
};

template <class S>
struct GeodesicThrough {
    Geodesic<S> line;
    GrassmannNumber<S> distance; // acosh of the inner product
};

namespace detail {

template <class S>
void require_on_hyperboloid(const SuperPoint<S>& p, const char* who) {
    using G = GrassmannNumber<S>;
    const AlgebraContext* ctx = p.context();
    if (!ctx) throw ContextMismatchError(std::string(who) + ": context-free point");
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    const double tol = ScalarOps<S>::is_exact ? 0.0 : 1e-8;
    if (!all_coeffs_within(quadratic_form(p) - one, tol))
        throw DegenerateInputError(std::string(who) + ": point is not on the unit hyperboloid");
}

} // namespace detail

/// Unique super geodesic through two distinct hyperboloid points, with the
/// distance D, cosh D = <P,Q>. The isotropic pair is built from
/// l = sqrt((d+1)/(d-1)) as E = (l-1)/(2l) {(1-l)P + (1+l)Q},
/// F = (l+1)/(2l) {(1+l)P + (1-l)Q}, so that X(0) = P and X(D) = Q.
template <class S>
GeodesicThrough<S> geodesic_through(const SuperPoint<S>& p, const SuperPoint<S>& q) {
    using G = GrassmannNumber<S>;
    detail::require_on_hyperboloid(p, "geodesic_through");
    detail::require_on_hyperboloid(q, "geodesic_through");
    const AlgebraContext& ctx = *p.context();
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G half = G::scalar(ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));
    G d = inner(p, q);
    if (!ScalarOps<S>::is_real(d.body()) || !(compare(d, one) == std::weak_ordering::greater))
        throw DegenerateInputError("geodesic_through: coincident points or isotropic difference");

    G l = lift_analytic(AnalyticFn::Sqrt, (d + one) * (d - one).inverse());
    G M = (l - one) * (G::scalar(ctx, ScalarOps<S>::from_int(2)) * l).inverse();
    G N = (l + one) * (G::scalar(ctx, ScalarOps<S>::from_int(2)) * l).inverse();
    SuperPoint<S> E = M * ((one - l) * p + (one + l) * q);
    SuperPoint<S> F = N * ((one + l) * p + (one - l) * q);
    SuperPoint<S> U = half * (E + F);
    SuperPoint<S> V = half * (E - F);
    G D = lift_analytic(AnalyticFn::Acosh, d);
    return {Geodesic<S>::make(std::move(U), std::move(V)), std::move(D)};
}

/// X(s) = (exp(s) E + exp(-s) F)/2 for even real arc length s.
template <class S>
SuperPoint<S> geodesic_point(const Geodesic<S>& line, const GrassmannNumber<S>& s) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *line.U.context();
    G t = lift_analytic(AnalyticFn::Exp, s);
    G half = G::scalar(ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));
    return half * (t * line.E + t.inverse() * line.F);
}

/// Hyperbolic distance acosh(<P,Q>) between hyperboloid points.
template <class S>
GrassmannNumber<S> distance(const SuperPoint<S>& p, const SuperPoint<S>& q) {
    return lift_analytic(AnalyticFn::Acosh, inner(p, q));
}

/// Unit tangent at P toward Q: (Q - P <P,Q>)/sqrt(<P,Q>^2 - 1); satisfies
/// <T,T> = -1 and <T,P> = 0.
template <class S>
SuperPoint<S> tangent(const SuperPoint<S>& p, const SuperPoint<S>& q) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *p.context();
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G d = inner(p, q);
    if (!ScalarOps<S>::is_real(d.body()) || !(compare(d, one) == std::weak_ordering::greater))
        throw DegenerateInputError("tangent: need <P,Q> body > 1");
    G denom = lift_analytic(AnalyticFn::Sqrt, d * d - one);
    return denom.inverse() * (q - d * p);
}

/// Interior angle at P of the triangle (P,Q,R): cos A = -<T_PQ, T_PR>,
/// A through the acos lift. The sign convention matches the spacelike
/// normalization <T,T> = -1.
template <class S>
GrassmannNumber<S> angle(const SuperPoint<S>& p, const SuperPoint<S>& q, const SuperPoint<S>& r) {
    auto t1 = tangent(p, q);
    auto t2 = tangent(p, r);
    auto cosA = -inner(t1, t2);
    if (!ScalarOps<S>::is_real(cosA.body())) throw DegenerateInputError("angle: non-real cosine body");
    double cb = ScalarOps<S>::to_complex(cosA.body()).real();
    if (std::abs(cb) >= 1.0 - 1e-10) throw DegenerateInputError("angle: collinear bodies");
    return lift_analytic(AnalyticFn::Acos, cosA);
}

/// Locus product <P,E><P,F>, equal to 1 exactly when P
/// lies on the geodesic.
template <class S>
GrassmannNumber<S> locus_product(const Geodesic<S>& line, const SuperPoint<S>& p) {
    return inner(p, line.E) * inner(p, line.F);
}

template <class S>
bool geodesic_contains(const Geodesic<S>& line, const SuperPoint<S>& p, double tol = 1e-12) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *p.context();
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G prod = locus_product(line, p);
    if constexpr (ScalarOps<S>::is_exact)
        return prod == one;
    else
        return max_abs_diff(prod, one) <= tol;
}

/// The positive-span representative (x E + y F)/(2 sqrt(xy)) for even real
/// x, y with positive bodies; always lies on the geodesic.
template <class S>
SuperPoint<S> span_point(const Geodesic<S>& line, const GrassmannNumber<S>& x, const GrassmannNumber<S>& y) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *line.U.context();
    if (sign(x) <= 0 || sign(y) <= 0) throw DegenerateInputError("span_point: x, y must have positive bodies");
    G scale = (G::scalar(ctx, ScalarOps<S>::from_int(2)) * lift_analytic(AnalyticFn::Sqrt, x * y)).inverse();
    return scale * (x * line.E + y * line.F);
}

/// H(d,e,f) = 2def + 1 - d^2 - e^2 - f^2.
template <class S>
GrassmannNumber<S> H_func(const GrassmannNumber<S>& d, const GrassmannNumber<S>& e,
                          const GrassmannNumber<S>& f) {
    using G = GrassmannNumber<S>;
    const AlgebraContext* ctx = d.context() ? d.context() : (e.context() ? e.context() : f.context());
    if (!ctx) throw ContextMismatchError("H_func: context-free arguments");
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    G two = G::scalar(*ctx, ScalarOps<S>::from_int(2));
    return two * d * e * f + one - d * d - e * e - f * f;
}

/// Cached pairwise data of a super triangle.
template <class S>
struct TriangleData {
    std::array<SuperPoint<S>, 3> points;
    GrassmannNumber<S> d, e, f; // <P,Q>, <Q,R>, <R,P>
    GrassmannNumber<S> H;

    static TriangleData make(const SuperPoint<S>& p, const SuperPoint<S>& q, const SuperPoint<S>& r) {
        TriangleData t{{p, q, r}, inner(p, q), inner(q, r), inner(r, p), {}};
        t.H = H_func(t.d, t.e, t.f);
        return t;
    }
};

/// Result of the common-first-fermion normalization (a single u-element).
template <class S>
struct SharedFermionTriple {
    OspElement<S> u;
    std::array<SuperPoint<S>, 3> points;
    GrassmannNumber<S> xi, eta;
};

/// Finds u(xi, eta) whose action equalizes the first fermionic coordinates of
/// the triple. The 2x2 linear system
///   (p1-q1  pbar-qbar ; q1-r1  qbar-rbar)(xi;eta) = (gamma-alpha; eps-gamma)
/// is the first-order condition; Newton iteration on the exact residual
/// terminates because each step cancels the lowest surviving fermion order.
template <class S>
SharedFermionTriple<S> share_fermion(const SuperPoint<S>& P, const SuperPoint<S>& Q, const SuperPoint<S>& R) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *P.context();
    auto cjx = [&](const SuperPoint<S>& pt) { return pt.x.conjugate(); };

    G m11 = P.x1 - Q.x1, m12 = cjx(P) - cjx(Q);
    G m21 = Q.x1 - R.x1, m22 = cjx(Q) - cjx(R);
    G det = m11 * m22 - m12 * m21;
    if (ScalarOps<S>::is_zero(det.body()) ||
        (!ScalarOps<S>::is_exact && ScalarOps<S>::abs_approx(det.body()) < 1e-9))
        throw DegenerateInputError("share_fermion: singular normalization (determinant body vanishes)");
    G dinv = det.inverse();

    G xi = G::scalar(ctx, ScalarOps<S>::zero());
    G eta = xi;
    // the residual's lowest surviving odd order rises each step; a handful of
    // iterations reaches the exact solution (exact mode) or the noise floor
    const int iters = ctx.generator_count() / 2 + 4;
    const double floor_scale = (1.0 + dinv.max_abs_coeff()) *
                               (1.0 + P.phi.max_abs_coeff() + Q.phi.max_abs_coeff() + R.phi.max_abs_coeff());
    const double accept = ScalarOps<S>::is_exact ? 0.0 : std::max(1e-10, 1e-12 * floor_scale);
    G best_xi = xi, best_eta = eta;
    double best = -1.0;
    for (int iter = 0; iter < iters; ++iter) {
        auto u = make_u(xi, eta);
        auto a1 = act(u, P).point.phi;
        auto a2 = act(u, Q).point.phi;
        auto a3 = act(u, R).point.phi;
        G r1 = a2 - a1, r2 = a3 - a2;
        double res = std::max(r1.max_abs_coeff(), r2.max_abs_coeff());
        if (best < 0.0 || res < best) {
            best = res;
            best_xi = xi;
            best_eta = eta;
        }
        if (res == 0.0) break;
        xi += dinv * (m22 * r1 - m12 * r2);
        eta += dinv * (m11 * r2 - m21 * r1);
    }
    if (best > accept) throw NumericError("share_fermion: iteration failed to converge");
    auto u = make_u(best_xi, best_eta);
    std::array<SuperPoint<S>, 3> pts{act(u, P).point, act(u, Q).point, act(u, R).point};
    return {std::move(u), std::move(pts), best_xi, best_eta};
}

/// Result of the full triple normalization: a group element g
/// whose action gives the three x-coordinates a common real part, the
/// SL(2,C) frame A through which the fermions factor, and the fermion data
/// (mu; rho, sigma, tau) with (phi_i; psi_i) = A (mu; *_i).
template <class S>
struct NormalizedTriple {
    OspElement<S> g;
    std::array<SuperPoint<S>, 3> points;
    std::array<std::complex<double>, 4> frame; // A = (a11 a12 ; a21 a22), det 1
    GrassmannNumber<S> mu, rho, sigma, tau;
};

namespace detail {

/// det-1 unitary diagonalizing a 2x2 Hermitean matrix (complex doubles).
inline std::array<std::complex<double>, 4> unitary_diag(const std::array<std::complex<double>, 4>& h) {
    using C = std::complex<double>;
    const C h11 = h[0], h12 = h[1], h22 = h[3];
    if (std::abs(h12) < 1e-14 * (1.0 + std::abs(h11) + std::abs(h22)))
        return {C(1, 0), C(0, 0), C(0, 0), C(1, 0)};
    double tr = h11.real() + h22.real();
    double disc = (h11.real() - h22.real()) * (h11.real() - h22.real()) + 4.0 * std::norm(h12);
    double lam = 0.5 * (tr + std::sqrt(disc));
    C v1 = h12, v2 = C(lam, 0) - h11;
    double n = std::sqrt(std::norm(v1) + std::norm(v2));
    v1 /= n;
    v2 /= n;
    // Columns (v1, v2) and (-conj(v2), conj(v1)): unitary with determinant 1.
    return {v1, -std::conj(v2), v2, std::conj(v1)};
}

} // namespace detail

/// Common-real-part normalization of a triple (float mode): share_fermion,
/// then a unimodular bosonic solve on the body Hermitean difference matrices
/// (unitary diagonalization of the first pair, closed-form rotation for the
/// second), then the exact action of the combined element.
template <class S>
NormalizedTriple<S> normalize_triple(const SuperPoint<S>& P0, const SuperPoint<S>& Q0,
                                     const SuperPoint<S>& R0) {
    static_assert(!ScalarOps<S>::is_exact,
                  "normalize_triple solves on float bodies; use the float-mode algebra");
    using G = GrassmannNumber<S>;
    using C = std::complex<double>;
    const AlgebraContext& ctx = *P0.context();

    // Non-isotropic differences: det H(x,y) bodies must be away from zero.
    auto diff_det_body = [&](const SuperPoint<S>& A, const SuperPoint<S>& B) {
        auto d = A - B;
        G det = d.x1 * d.x2 - d.x * d.x.conjugate();
        return ScalarOps<S>::to_complex(det.body());
    };
    if (std::abs(diff_det_body(P0, Q0)) < 1e-9 || std::abs(diff_det_body(Q0, R0)) < 1e-9)
        throw DegenerateInputError("normalize_triple: isotropic pairwise difference");

    auto shared = share_fermion(P0, Q0, R0);
    const auto& P = shared.points[0];
    const auto& Q = shared.points[1];
    const auto& R = shared.points[2];

    auto herm_body = [&](const SuperPoint<S>& A, const SuperPoint<S>& B) {
        auto d = A - B;
        return std::array<C, 4>{ScalarOps<S>::to_complex(d.x1.body()), ScalarOps<S>::to_complex(d.x.conjugate().body()),
                                ScalarOps<S>::to_complex(d.x.body()), ScalarOps<S>::to_complex(d.x2.body())};
    };
    auto H1 = herm_body(P, Q);
    auto H2 = herm_body(Q, R);

    auto re_offdiag = [](const std::array<C, 4>& h, const std::array<C, 4>& g) {
        // Re of (g^dagger h g)_{21}
        C a = g[0], b = g[1], c = g[2], d = g[3];
        C t21 = std::conj(b) * (h[0] * a + h[1] * c) + std::conj(d) * (h[2] * a + h[3] * c);
        return t21;
    };

    std::array<C, 4> gbody;
    if (std::abs(re_offdiag(H1, {C(1), C(0), C(0), C(1)}).real()) < 1e-13 &&
        std::abs(re_offdiag(H2, {C(1), C(0), C(0), C(1)}).real()) < 1e-13) {
        gbody = {C(1), C(0), C(0), C(1)}; // already normalized
    } else {
        auto U = detail::unitary_diag(H1);
        C m21 = re_offdiag(H2, U);
        double theta = std::abs(m21) < 1e-14 ? 0.0 : 0.5 * (M_PI / 2.0 - std::arg(m21));
        C ep = std::polar(1.0, theta), em = std::polar(1.0, -theta);
        gbody = {U[0] * ep, U[1] * em, U[2] * ep, U[3] * em};
    }
    // Residual check on both conditions.
    if (std::abs(re_offdiag(H1, gbody).real()) > 1e-9 || std::abs(re_offdiag(H2, gbody).real()) > 1e-9)
        throw NumericError("normalize_triple: bosonic solver did not converge");

    auto sc = [&](C v) { return G::scalar(ctx, v); };
    auto sl2 = lift_sl2(sc(gbody[0]), sc(gbody[1]), sc(gbody[2]), sc(gbody[3]));
    std::array<SuperPoint<S>, 3> pts{act(sl2, P).point, act(sl2, Q).point, act(sl2, R).point};

    // Fermions transform by A = (abar cbar ; bbar dbar); recover (mu; *_i).
    std::array<C, 4> A{std::conj(gbody[0]), std::conj(gbody[2]), std::conj(gbody[1]), std::conj(gbody[3])};
    C detA = A[0] * A[3] - A[1] * A[2];
    std::array<C, 4> Ainv{A[3] / detA, -A[1] / detA, -A[2] / detA, A[0] / detA};
    auto first = [&](const SuperPoint<S>& pt) { return sc(Ainv[0]) * pt.phi + sc(Ainv[1]) * pt.psi; };
    auto second = [&](const SuperPoint<S>& pt) { return sc(Ainv[2]) * pt.phi + sc(Ainv[3]) * pt.psi; };
    G mu = first(pts[0]);
    if (max_abs_diff(mu, first(pts[1])) > 1e-9 || max_abs_diff(mu, first(pts[2])) > 1e-9)
        throw NumericError("normalize_triple: fermion frame does not share a first coordinate");
    G rho = second(pts[0]);
    G sigma = second(pts[1]);
    G tau = second(pts[2]);

    auto total = OspElement<S>(sm_mul(shared.u.matrix(), sl2.matrix()));
    return {std::move(total), std::move(pts), A, std::move(mu), std::move(rho), std::move(sigma),
            std::move(tau)};
}

/// Rescales three light-cone rays to the unique representatives with
/// <X_i, X_j> = 2: X_i = sqrt(2 <Y_j,Y_k> / (<Y_i,Y_j> <Y_i,Y_k>)) Y_i.
template <class S>
std::array<SuperPoint<S>, 3> normalize_ideal_triple(const SuperPoint<S>& y1, const SuperPoint<S>& y2,
                                                    const SuperPoint<S>& y3) {
    using G = GrassmannNumber<S>;
    const AlgebraContext& ctx = *y1.context();
    G two = G::scalar(ctx, ScalarOps<S>::from_int(2));
    std::array<SuperPoint<S>, 3> cur{y1, y2, y3};
    // A second pass polishes float-mode roundoff in the scale factors.
    const int passes = ScalarOps<S>::is_exact ? 1 : 2;
    for (int pass = 0; pass < passes; ++pass) {
        G e12 = inner(cur[0], cur[1]), e23 = inner(cur[1], cur[2]), e31 = inner(cur[2], cur[0]);
        for (const G* e : {&e12, &e23, &e31}) {
            if (!ScalarOps<S>::is_real(e->body()) || !(compare(*e, G::scalar(ctx, ScalarOps<S>::zero())) ==
                                                       std::weak_ordering::greater))
                throw DegenerateInputError(
                    "normalize_ideal_triple: proportional rays (inner product body <= 0)");
        }
        auto scale = [&](const G& opp, const G& a, const G& b) {
            return lift_analytic(AnalyticFn::Sqrt, two * opp * (a * b).inverse());
        };
        cur = {scale(e23, e12, e31) * cur[0], scale(e31, e12, e23) * cur[1], scale(e12, e23, e31) * cur[2]};
    }
    return cur;
}

/// Coefficients of the ideal-triangle parametrization
/// X(s,t) = a P + b Q + c R with a = (s^2-t^2)/(2 t s^2), b = t/(s s_-),
/// c = t/(s s_+), s_pm = s +- sqrt(s^2-4). With <P_i,P_j> = 2 this gives
/// <X,X> = 1 on 2 < s, 0 < t < s_+/2.
template <class S>
std::array<GrassmannNumber<S>, 3> ideal_triangle_coeffs(const AlgebraContext& ctx,
                                                        const GrassmannNumber<S>& s,
                                                        const GrassmannNumber<S>& t) {
    using G = GrassmannNumber<S>;
    G two = G::scalar(ctx, ScalarOps<S>::from_int(2));
    G four = G::scalar(ctx, ScalarOps<S>::from_int(4));
    G rootD = lift_analytic(AnalyticFn::Sqrt, s * s - four);
    G splus = s + rootD, sminus = s - rootD;
    G a = (s * s - t * t) * (two * t * s * s).inverse();
    G b = t * (s * sminus).inverse();
    G c = t * (s * splus).inverse();
    return {a, b, c};
}

template <class S>
SuperPoint<S> ideal_triangle_point(const SuperPoint<S>& P, const SuperPoint<S>& Q, const SuperPoint<S>& R,
                                   const GrassmannNumber<S>& s, const GrassmannNumber<S>& t) {
    const AlgebraContext& ctx = *P.context();
    double sb = ScalarOps<S>::to_complex(s.body()).real();
    double tb = ScalarOps<S>::to_complex(t.body()).real();
    double splus = sb + std::sqrt(std::max(sb * sb - 4.0, 0.0));
    if (!(sb > 2.0) || !(tb > 0.0) || !(tb < 0.5 * splus))
        throw DegenerateInputError("ideal_triangle_point: parameters out of range (need s > 2, 0 < t < s_+/2)");
    auto coeff = ideal_triangle_coeffs<S>(ctx, s, t);
    return coeff[0] * P + coeff[1] * Q + coeff[2] * R;
}

/// Gram edge matrix of four hyperboloid points with its cofactors.
template <class S>
struct GramData {
    std::array<GrassmannNumber<S>, 16> d; // row-major 4x4

    const GrassmannNumber<S>& at(int i, int j) const { return d[std::size_t(4 * i + j)]; }
    GrassmannNumber<S>& at(int i, int j) { return d[std::size_t(4 * i + j)]; }

    /// Cofactor c_ij (0-based), signed 3x3 minor with row i, column j removed.
    GrassmannNumber<S> cofactor(int i, int j) const {
        std::array<GrassmannNumber<S>, 9> m;
        int r = 0;
        for (int p = 0; p < 4; ++p) {
            if (p == i) continue;
            int c = 0;
            for (int q = 0; q < 4; ++q) {
                if (q == j) continue;
                m[std::size_t(3 * r + c)] = at(p, q);
                ++c;
            }
            ++r;
        }
        auto det3 = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                    m[2] * (m[3] * m[7] - m[4] * m[6]);
        return ((i + j) % 2 == 0) ? det3 : -det3;
    }
};

template <class S>
GramData<S> gram(const std::array<SuperPoint<S>, 4>& pts) {
    GramData<S> g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g.at(i, j) = inner(pts[std::size_t(i)], pts[std::size_t(j)]);
    return g;
}

namespace detail {

inline std::pair<int, int> opposite_edge(int k, int l) {
    bool used[4] = {false, false, false, false};
    used[k] = used[l] = true;
    int i = -1, j = -1;
    for (int v = 0; v < 4; ++v)
        if (!used[v]) (i < 0 ? i : j) = v;
    return {i, j};
}

} // namespace detail

/// Cosine of the dihedral angle along the edge P_k P_l (0-based), by the
/// Gram cofactor formula a_ij = -c_ij / (sqrt(c_ii) sqrt(c_jj)) with {i,j}
/// the complementary pair.
template <class S>
GrassmannNumber<S> dihedral_cos(const GramData<S>& g, int k, int l) {
    auto [i, j] = detail::opposite_edge(k, l);
    auto cii = g.cofactor(i, i);
    auto cjj = g.cofactor(j, j);
    auto body_re = [](const GrassmannNumber<S>& v) { return ScalarOps<S>::to_complex(v.body()).real(); };
    if (body_re(cii) < 1e-9 || body_re(cjj) < 1e-9)
        throw DegenerateInputError("dihedral_cos: degenerate tetrahedron (principal cofactor body <= 0)");
    auto denom = lift_analytic(AnalyticFn::Sqrt, cii) * lift_analytic(AnalyticFn::Sqrt, cjj);
    return -(g.cofactor(i, j) * denom.inverse());
}

/// Same dihedral cosine through the explicit proof expression
///   -[(d_kl^2-1)(d_ij - d_il d_jl) + (d_ik - d_il d_kl)(d_jk - d_jl d_kl)]
///   / (sqrt(H(d_ik,d_il,d_kl)) sqrt(H(d_jk,d_jl,d_kl))).
template <class S>
GrassmannNumber<S> dihedral_cos_explicit(const GramData<S>& g, int k, int l) {
    using G = GrassmannNumber<S>;
    auto [i, j] = detail::opposite_edge(k, l);
    const AlgebraContext* ctx = g.at(0, 0).context();
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    const G& dkl = g.at(k, l);
    G num = (dkl * dkl - one) * (g.at(i, j) - g.at(i, l) * g.at(j, l)) +
            (g.at(i, k) - g.at(i, l) * dkl) * (g.at(j, k) - g.at(j, l) * dkl);
    G h1 = H_func(g.at(i, k), g.at(i, l), dkl);
    G h2 = H_func(g.at(j, k), g.at(j, l), dkl);
    auto body_re = [](const G& v) { return ScalarOps<S>::to_complex(v.body()).real(); };
    if (body_re(h1) < 1e-9 || body_re(h2) < 1e-9)
        throw DegenerateInputError("dihedral_cos_explicit: H body <= 0 (degenerate face)");
    G denom = lift_analytic(AnalyticFn::Sqrt, h1) * lift_analytic(AnalyticFn::Sqrt, h2);
    return -(num * denom.inverse());
}

/// Same dihedral cosine from the orthogonal-projection construction: unit
/// tangents u_i at X = P_l toward P_i, v toward P_k; w_i the projections of
/// u_i onto the v-orthogonal complement; cos = -<w1,w2>/sqrt(<w1,w1><w2,w2>).
template <class S>
GrassmannNumber<S> dihedral_cos_projection(const std::array<SuperPoint<S>, 4>& pts, int k, int l) {
    auto [i, j] = detail::opposite_edge(k, l);
    const SuperPoint<S>& X = pts[std::size_t(l)];
    auto v = tangent(X, pts[std::size_t(k)]);
    auto u1 = tangent(X, pts[std::size_t(i)]);
    auto u2 = tangent(X, pts[std::size_t(j)]);
    // Minkowski projection onto the v-orthogonal complement (<v,v> = -1).
    auto w1 = u1 + inner(u1, v) * v;
    auto w2 = u2 + inner(u2, v) * v;
    auto n1 = -inner(w1, w1);
    auto n2 = -inner(w2, w2);
    auto denom = lift_analytic(AnalyticFn::Sqrt, n1) * lift_analytic(AnalyticFn::Sqrt, n2);
    return -(inner(w1, w2) * denom.inverse());
}

} // namespace superhyp
