#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "superhyp/grassmann.hpp"
#include "superhyp/random.hpp"

namespace superhyp {

/// Certification tolerance: exact mode demands structural equality, float
/// mode allows 1e-10 on every coefficient.
template <class S>
inline constexpr double cert_tol = ScalarOps<S>::is_exact ? 0.0 : 1e-10;

template <class S>
bool all_coeffs_within(const GrassmannNumber<S>& g, double tol) {
    if constexpr (ScalarOps<S>::is_exact)
        return g.is_zero();
    else
        return g.max_abs_coeff() <= tol;
}

/// (2|1)x(2|1) supermatrix over the Grassmann algebra, in the block layout
///   ( a  b  | alpha )
///   ( c  d  | beta  )
///   ( gamma delta | f )
/// The group/point layout has a,b,c,d,f even and alpha,beta,gamma,delta odd;
/// `from_entries` enforces that, `raw` skips it (used for the numeric Lie
/// algebra generators, which carry even values in the odd slots).
template <class S>
struct SuperMatrix {
    using G = GrassmannNumber<S>;

    const AlgebraContext* ctx = nullptr;
    std::array<G, 9> e; // row-major

    const G& at(int r, int c) const { return e[std::size_t(3 * r + c)]; }
    G& at(int r, int c) { return e[std::size_t(3 * r + c)]; }

    const G& a() const { return at(0, 0); }
    const G& b() const { return at(0, 1); }
    const G& alpha() const { return at(0, 2); }
    const G& c() const { return at(1, 0); }
    const G& d() const { return at(1, 1); }
    const G& beta() const { return at(1, 2); }
    const G& gamma() const { return at(2, 0); }
    const G& delta() const { return at(2, 1); }
    const G& f() const { return at(2, 2); }

    static bool slot_is_odd(int r, int c) { return (r == 2) != (c == 2); }

    static SuperMatrix raw(const AlgebraContext& ctx, std::array<G, 9> entries) {
        SuperMatrix m;
        m.ctx = &ctx;
        m.e = std::move(entries);
        return m;
    }

    static SuperMatrix from_entries(const AlgebraContext& ctx, std::array<G, 9> entries) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const G& g = entries[std::size_t(3 * r + c)];
                if (slot_is_odd(r, c) ? !g.is_odd() : !g.is_even())
                    throw ParityError("entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                                      ") violates the parity layout");
            }
        return raw(ctx, std::move(entries));
    }

    static SuperMatrix identity(const AlgebraContext& ctx) {
        G one = G::scalar(ctx, ScalarOps<S>::one());
        G zero = G::scalar(ctx, ScalarOps<S>::zero());
        return raw(ctx, {one, zero, zero, zero, one, zero, zero, zero, one});
    }

    static SuperMatrix zero_matrix(const AlgebraContext& ctx) {
        G zero = G::scalar(ctx, ScalarOps<S>::zero());
        return raw(ctx, {zero, zero, zero, zero, zero, zero, zero, zero, zero});
    }

    friend SuperMatrix operator+(const SuperMatrix& x, const SuperMatrix& y) {
        SuperMatrix m;
        m.ctx = x.ctx;
        for (std::size_t i = 0; i < 9; ++i) m.e[i] = x.e[i] + y.e[i];
        return m;
    }
    friend SuperMatrix operator-(const SuperMatrix& x, const SuperMatrix& y) {
        SuperMatrix m;
        m.ctx = x.ctx;
        for (std::size_t i = 0; i < 9; ++i) m.e[i] = x.e[i] - y.e[i];
        return m;
    }
    friend SuperMatrix operator*(const G& s, const SuperMatrix& x) {
        SuperMatrix m;
        m.ctx = x.ctx;
        for (std::size_t i = 0; i < 9; ++i) m.e[i] = s * x.e[i];
        return m;
    }

    friend bool operator==(const SuperMatrix& x, const SuperMatrix& y) { return x.e == y.e; }
    friend bool operator!=(const SuperMatrix& x, const SuperMatrix& y) { return !(x == y); }

    bool all_within(double tol) const {
        for (const auto& g : e)
            if (!all_coeffs_within(g, tol)) return false;
        return true;
    }

    std::string str() const {
        std::string out;
        for (int r = 0; r < 3; ++r) {
            out += "[ ";
            for (int c = 0; c < 3; ++c) out += at(r, c).str() + (c < 2 ? " , " : "");
            out += " ]\n";
        }
        return out;
    }
};

/// The signed supermatrix product: each term g1(r,k)*g2(k,c) enters with a
/// minus sign exactly when both factors are odd. On parity-layout matrices
/// this gives the nine-entry formula with minus signs on the odd-odd products
/// (alpha1*gamma2 and friends); on the numeric Lie algebra generators it
/// reduces to the plain matrix product, which is what makes the bracket
/// relations come out in their standard form.
template <class S>
SuperMatrix<S> sm_mul(const SuperMatrix<S>& g1, const SuperMatrix<S>& g2) {
    using G = GrassmannNumber<S>;
    SuperMatrix<S> m;
    m.ctx = g1.ctx ? g1.ctx : g2.ctx;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            G acc;
            for (int k = 0; k < 3; ++k) {
                const G& x = g1.at(r, k);
                const G& y = g2.at(k, c);
                // x*y - 2*odd(x)*odd(y): the sign rule, linear in both slots.
                acc += x * y - (x.odd_part() * y.odd_part()) * ScalarOps<S>::from_int(2);
            }
            m.at(r, c) = acc;
        }
    return m;
}

/// Super transpose: rows and columns of the even block swap, the odd column
/// moves to the bottom row with a sign.
template <class S>
SuperMatrix<S> super_transpose(const SuperMatrix<S>& g) {
    return SuperMatrix<S>::raw(*g.ctx, {g.a(), g.c(), g.gamma(),       //
                                        g.b(), g.d(), g.delta(),       //
                                        -g.alpha(), -g.beta(), g.f()}); //
}

/// Conjugate super transpose.
template <class S>
SuperMatrix<S> dagger(const SuperMatrix<S>& g) {
    SuperMatrix<S> st = super_transpose(g);
    for (auto& x : st.e) x = x.conjugate();
    return st;
}

/// The orthosymplectic form J = (0 -1 0 ; 1 0 0 ; 0 0 1).
template <class S>
SuperMatrix<S> osp_form(const AlgebraContext& ctx) {
    using G = GrassmannNumber<S>;
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G zero = G::scalar(ctx, ScalarOps<S>::zero());
    return SuperMatrix<S>::raw(ctx, {zero, -one, zero, one, zero, zero, zero, zero, one});
}

template <class S>
SuperMatrix<S> osp_form_inverse(const AlgebraContext& ctx) {
    using G = GrassmannNumber<S>;
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G zero = G::scalar(ctx, ScalarOps<S>::zero());
    return SuperMatrix<S>::raw(ctx, {zero, one, zero, -one, zero, zero, zero, zero, one});
}

/// Berezinian f^{-1} det[ (a b; c d) + f^{-1} (alpha*gamma alpha*delta ; beta*gamma beta*delta) ].
template <class S>
GrassmannNumber<S> berezinian(const SuperMatrix<S>& g) {
    auto finv = g.f().inverse(); // throws ZeroBodyError when body(f) = 0
    auto m11 = g.a() + finv * (g.alpha() * g.gamma());
    auto m12 = g.b() + finv * (g.alpha() * g.delta());
    auto m21 = g.c() + finv * (g.beta() * g.gamma());
    auto m22 = g.d() + finv * (g.beta() * g.delta());
    return finv * (m11 * m22 - m12 * m21);
}

/// Outcome of the two membership checks, with the failing entries listed.
template <class S>
struct OrthoCertificate {
    bool sdet_ok = false;
    bool form_ok = false;
    GrassmannNumber<S> sdet_minus_one;
    SuperMatrix<S> form_residual; // g^st J g - J
    std::vector<std::string> failing;

    bool ok() const { return sdet_ok && form_ok; }
};

template <class S>
OrthoCertificate<S> is_orthosymplectic(const SuperMatrix<S>& g, double tol = cert_tol<S>) {
    OrthoCertificate<S> cert;
    const AlgebraContext& ctx = *g.ctx;
    if constexpr (!ScalarOps<S>::is_exact) {
        // The residuals are quadratic in the entries; read the tolerance
        // relative to that scale.
        double m = 0.0;
        for (const auto& e : g.e) m = std::max(m, e.max_abs_coeff());
        tol *= (1.0 + m) * (1.0 + m);
    }
    cert.sdet_minus_one =
        berezinian(g) - GrassmannNumber<S>::scalar(ctx, ScalarOps<S>::one());
    cert.sdet_ok = all_coeffs_within(cert.sdet_minus_one, tol);
    if (!cert.sdet_ok) cert.failing.push_back("sdet != 1");

    auto J = osp_form<S>(ctx);
    cert.form_residual = sm_mul(sm_mul(super_transpose(g), J), g) - J;
    cert.form_ok = cert.form_residual.all_within(tol);
    if (!cert.form_ok) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                if (!all_coeffs_within(cert.form_residual.at(r, c), tol))
                    cert.failing.push_back("(g^st J g - J)(" + std::to_string(r + 1) + "," +
                                           std::to_string(c + 1) + ") = " + cert.form_residual.at(r, c).str());
    }
    return cert;
}

/// A SuperMatrix certified to lie in OSp(1|2): both membership conditions are
/// checked eagerly on construction.
template <class S>
class OspElement {
  public:
    explicit OspElement(SuperMatrix<S> g) : g_(std::move(g)) {
        auto cert = is_orthosymplectic(g_);
        if (!cert.ok()) {
            std::string what = "orthosymplectic certification failed:";
            for (const auto& s : cert.failing) what += " " + s + ";";
            throw CertificationError(what);
        }
    }

    static OspElement identity(const AlgebraContext& ctx) { return OspElement(SuperMatrix<S>::identity(ctx)); }

    const SuperMatrix<S>& matrix() const { return g_; }
    const AlgebraContext& context() const { return *g_.ctx; }

  private:
    SuperMatrix<S> g_;
};

/// u(alpha, beta) = ( 1-alpha*beta/2, 0, alpha ; 0, 1-alpha*beta/2, beta ;
///                    beta, -alpha, 1+alpha*beta ). Odd inputs required.
template <class S>
OspElement<S> make_u(const GrassmannNumber<S>& alpha, const GrassmannNumber<S>& beta) {
    if (!alpha.is_odd() || !beta.is_odd()) throw ParityError("u(alpha,beta) requires odd arguments");
    const AlgebraContext* ctx = alpha.context() ? alpha.context() : beta.context();
    if (!ctx) throw ContextMismatchError("u(alpha,beta) requires context-bound arguments");
    using G = GrassmannNumber<S>;
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    G zero = G::scalar(*ctx, ScalarOps<S>::zero());
    G ab = alpha * beta;
    G half = G::scalar(*ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));
    G diag = one - half * ab;
    return OspElement<S>(SuperMatrix<S>::from_entries(*ctx, {diag, zero, alpha, //
                                                             zero, diag, beta,  //
                                                             beta, -alpha, one + ab}));
}

/// Block-diagonal embedding of SL(2) with even entries and unit determinant.
template <class S>
OspElement<S> lift_sl2(const GrassmannNumber<S>& a, const GrassmannNumber<S>& b, const GrassmannNumber<S>& c,
                       const GrassmannNumber<S>& d) {
    const AlgebraContext* ctx = a.context() ? a.context() : b.context();
    if (!ctx) ctx = c.context() ? c.context() : d.context();
    if (!ctx) throw ContextMismatchError("lift_sl2 requires context-bound arguments");
    if (!a.is_even() || !b.is_even() || !c.is_even() || !d.is_even())
        throw ParityError("lift_sl2 requires even entries");
    using G = GrassmannNumber<S>;
    G det_minus_one = a * d - b * c - G::scalar(*ctx, ScalarOps<S>::one());
    if (!all_coeffs_within(det_minus_one, cert_tol<S>))
        throw CertificationError("lift_sl2 requires ad - bc = 1, residual " + det_minus_one.str());
    G one = G::scalar(*ctx, ScalarOps<S>::one());
    G zero = G::scalar(*ctx, ScalarOps<S>::zero());
    return OspElement<S>(SuperMatrix<S>::from_entries(*ctx, {a, b, zero, c, d, zero, zero, zero, one}));
}

/// Factorization data: g = sl2_part * u(alpha, beta), uniquely.
template <class S>
struct Factorization {
    OspElement<S> sl2_part;
    GrassmannNumber<S> alpha, beta;
};

template <class S>
Factorization<S> factorize(const OspElement<S>& g) {
    const auto& m = g.matrix();
    // The u-factor is read off the third row: gamma = beta_u, delta = -alpha_u.
    GrassmannNumber<S> alpha = -m.delta();
    GrassmannNumber<S> beta = m.gamma();
    auto u_inv = make_u(-alpha, -beta);
    SuperMatrix<S> sl2 = sm_mul(m, u_inv.matrix());
    // Zero out float-mode residue in the off-block slots before lifting.
    if (!all_coeffs_within(sl2.alpha(), cert_tol<S>) || !all_coeffs_within(sl2.beta(), cert_tol<S>) ||
        !all_coeffs_within(sl2.gamma(), cert_tol<S>) || !all_coeffs_within(sl2.delta(), cert_tol<S>))
        throw CertificationError("factorize: residual odd entries in the SL(2) part");
    return {lift_sl2(sl2.a(), sl2.b(), sl2.c(), sl2.d()), alpha, beta};
}

/// Seeded random certified element: lift_sl2(a,b,c,(1+bc)/a) * u(alpha,beta)
/// with small Gaussian-rational bosonic entries and odd combinations over the
/// given generator indices.
template <class S>
OspElement<S> random_osp(const AlgebraContext& ctx, Rng& rng, const std::vector<int>& fermion_indices) {
    for (int i : fermion_indices)
        if (i < 1 || i > ctx.generator_count()) throw DomainError("random_osp: generator budget exhausted");
    auto a = random_gaussian(rng, /*nonzero_body=*/true);
    auto b = random_gaussian(rng);
    auto c = random_gaussian(rng);
    auto d = (GaussianRational(rat(1)) + b * c) / a;
    auto ga = g_scalar<S>(ctx, a);
    auto gb = g_scalar<S>(ctx, b);
    auto gc = g_scalar<S>(ctx, c);
    auto gd = g_scalar<S>(ctx, d);
    auto alpha = random_odd<S>(ctx, rng, fermion_indices);
    auto beta = random_odd<S>(ctx, rng, fermion_indices);
    auto sl2 = lift_sl2(ga, gb, gc, gd);
    auto u = make_u(alpha, beta);
    return OspElement<S>(sm_mul(sl2.matrix(), u.matrix()));
}

/// The numeric generators of the Lie superalgebra, and the relation checks.
template <class S>
struct LieBasis {
    SuperMatrix<S> v_plus, v_minus, h, x_plus, x_minus;
    SuperMatrix<S> v_plus_hat, v_minus_hat, h_hat;
};

template <class S>
LieBasis<S> lie_basis(const AlgebraContext& ctx) {
    using G = GrassmannNumber<S>;
    G one = G::scalar(ctx, ScalarOps<S>::one());
    G zero = G::scalar(ctx, ScalarOps<S>::zero());
    LieBasis<S> b{
        SuperMatrix<S>::raw(ctx, {zero, zero, one, zero, zero, zero, zero, -one, zero}),  // v+
        SuperMatrix<S>::raw(ctx, {zero, zero, zero, zero, zero, one, one, zero, zero}),   // v-
        SuperMatrix<S>::raw(ctx, {one, zero, zero, zero, -one, zero, zero, zero, zero}),  // h
        SuperMatrix<S>::raw(ctx, {zero, one, zero, zero, zero, zero, zero, zero, zero}),  // X+ (derived)
        SuperMatrix<S>::raw(ctx, {zero, zero, zero, one, zero, zero, zero, zero, zero}),  // X- (derived)
        SuperMatrix<S>::raw(ctx, {zero, zero, one, zero, zero, zero, zero, one, zero}),   // v+ hat
        SuperMatrix<S>::raw(ctx, {zero, zero, zero, zero, zero, one, -one, zero, zero}),  // v- hat
        SuperMatrix<S>::raw(ctx, {one, zero, zero, zero, one, zero, zero, zero, zero}),   // h hat
    };
    return b;
}

/// Super commutator of two basis elements of given parities, evaluated with
/// sm_mul: anticommutator when both are odd, commutator otherwise.
template <class S>
SuperMatrix<S> super_bracket(const SuperMatrix<S>& x, bool x_odd, const SuperMatrix<S>& y, bool y_odd) {
    auto xy = sm_mul(x, y);
    auto yx = sm_mul(y, x);
    return (x_odd && y_odd) ? xy + yx : xy - yx;
}

template <class S>
struct LieReport {
    bool relations_ok = false;       // [h,v+-] = +-v+-, [v+-,v+-] = -+2X+-, [v+,v-] = h
    bool functional_equation_ok = false; // J A + A^st J = 0 for each basis element
    std::vector<std::string> failures;
    bool ok() const { return relations_ok && functional_equation_ok; }
};

template <class S>
LieReport<S> lie_relations_check(const AlgebraContext& ctx) {
    using G = GrassmannNumber<S>;
    LieReport<S> rep;
    auto B = lie_basis<S>(ctx);
    G two = G::scalar(ctx, ScalarOps<S>::from_int(2));

    auto expect = [&](const SuperMatrix<S>& got, const SuperMatrix<S>& want, const char* what) {
        if (!(got - want).all_within(cert_tol<S>)) rep.failures.push_back(what);
    };

    expect(super_bracket(B.h, false, B.v_plus, true), B.v_plus, "[h,v+] != v+");
    expect(super_bracket(B.h, false, B.v_minus, true),
           G::scalar(ctx, ScalarOps<S>::from_int(-1)) * B.v_minus, "[h,v-] != -v-");
    expect(super_bracket(B.v_plus, true, B.v_plus, true),
           G::scalar(ctx, ScalarOps<S>::from_int(-2)) * B.x_plus, "[v+,v+] != -2X+");
    expect(super_bracket(B.v_minus, true, B.v_minus, true), two * B.x_minus, "[v-,v-] != 2X-");
    expect(super_bracket(B.v_plus, true, B.v_minus, true), B.h, "[v+,v-] != h");
    rep.relations_ok = rep.failures.empty();

    // Infinitesimal orthosymplectic condition: the generators satisfy
    // J A + A^st J = 0 (equivalently A + J^{-1} A^st J = 0), the derivative
    // of g^st J g = J at the identity.
    auto J = osp_form<S>(ctx);
    std::size_t before = rep.failures.size();
    auto func_eq = [&](const SuperMatrix<S>& A, const char* name) {
        auto lhs = sm_mul(J, A) + sm_mul(super_transpose(A), J);
        if (!lhs.all_within(cert_tol<S>)) rep.failures.push_back(std::string("J A + A^st J != 0 for ") + name);
    };
    func_eq(B.v_plus, "v+");
    func_eq(B.v_minus, "v-");
    func_eq(B.h, "h");
    func_eq(B.x_plus, "X+");
    func_eq(B.x_minus, "X-");
    rep.functional_equation_ok = rep.failures.size() == before;
    return rep;
}

/// Coefficients of a point-form matrix over the generator basis, via
/// B = J^{-1} A and the real/imaginary split of the complexified slots.
template <class S>
struct PointDecomposition {
    GrassmannNumber<S> c_v_plus, c_v_plus_hat;   // Re psi, i Im psi
    GrassmannNumber<S> c_v_minus, c_v_minus_hat; // -Re phi, -i Im phi
    GrassmannNumber<S> c_h, c_h_hat;             // Re x, i Im x
    GrassmannNumber<S> c_x_plus, c_x_minus;      // x2, -x1
};

template <class S>
PointDecomposition<S> decompose_point_matrix(const SuperMatrix<S>& A) {
    const AlgebraContext& ctx = *A.ctx;
    using G = GrassmannNumber<S>;
    // Layout validation: (x1, xbar, phi ; x, x2, psi ; -phibar, -psibar, 0)
    const double tol = ScalarOps<S>::is_exact ? 0.0 : 1e-9;
    if (!all_coeffs_within(A.at(0, 1) - A.at(1, 0).conjugate(), tol) ||
        !all_coeffs_within(A.at(2, 0) + A.at(0, 2).conjugate(), tol) ||
        !all_coeffs_within(A.at(2, 1) + A.at(1, 2).conjugate(), tol) ||
        !all_coeffs_within(A.at(2, 2), tol) || !A.at(0, 0).is_real() || !A.at(1, 1).is_real() ||
        !A.at(0, 0).is_even() || !A.at(1, 1).is_even() || !A.at(0, 2).is_odd() || !A.at(1, 2).is_odd())
        throw LayoutError("matrix is not in point form");

    auto B = sm_mul(osp_form_inverse<S>(ctx), A);
    G psi = B.at(0, 2);
    G minus_phi = B.at(1, 2);
    G x = B.at(0, 0);
    G half = G::scalar(ctx, ScalarOps<S>::one() / ScalarOps<S>::from_int(2));

    PointDecomposition<S> d;
    d.c_v_plus = half * (psi + psi.conjugate());
    d.c_v_plus_hat = half * (psi - psi.conjugate());
    d.c_v_minus = half * (minus_phi + minus_phi.conjugate());
    d.c_v_minus_hat = half * (minus_phi - minus_phi.conjugate());
    d.c_h = half * (x + x.conjugate());
    d.c_h_hat = half * (x - x.conjugate());
    d.c_x_plus = B.at(0, 1);  // = x2
    d.c_x_minus = B.at(1, 0); // = -x1
    return d;
}

/// Rebuild A = J * (sum of coefficients times basis matrices); exact inverse
/// of decompose_point_matrix.
template <class S>
SuperMatrix<S> reconstruct_point_matrix(const AlgebraContext& ctx, const PointDecomposition<S>& d) {
    auto B = lie_basis<S>(ctx);
    SuperMatrix<S> acc = d.c_v_plus * B.v_plus + d.c_v_plus_hat * B.v_plus_hat;
    acc = acc + d.c_v_minus * B.v_minus + d.c_v_minus_hat * B.v_minus_hat;
    acc = acc + d.c_h * B.h + d.c_h_hat * B.h_hat;
    acc = acc + d.c_x_plus * B.x_plus + d.c_x_minus * B.x_minus;
    return sm_mul(osp_form<S>(ctx), acc);
}

} // namespace superhyp
