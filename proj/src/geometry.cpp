#include "k3/geometry.hpp"

namespace k3::geometry {

using groebner::IdealBasis;
using mpoly::Monomial;

bool fourfold_smooth(const QuadricBundle<Fp>& d) {
    MultiPoly<Fp> eq = fourfold_equation(d);
    if (eq.is_zero_poly()) return false;
    IdealBasis jac;
    jac.gens.push_back(eq);
    for (int i = 0; i < 6; ++i) {
        MultiPoly<Fp> di = eq.partial_derivative(i);
        if (!di.is_zero_poly()) jac.gens.push_back(std::move(di));
    }
    return groebner::projective_empty(jac);
}

K3SmoothReport k3_smooth(const K3Surface<Fp>& s) {
    if (s.beta.is_zero_poly() && s.alpha.is_zero_poly()) return {K3SmoothStatus::Singular};
    int p = 0;
    for (auto* f : {&s.alpha, &s.beta})
        if (!f->is_zero_poly()) p = f->leading().second.p;
    if (p != 2) {
        // double cover branched over {beta = 0}: smooth iff the sextic is
        const MultiPoly<Fp>& b = s.beta;
        if (b.is_zero_poly()) return {K3SmoothStatus::Singular};
        IdealBasis jac;
        jac.gens.push_back(b);
        for (int i = 0; i < 3; ++i) {
            MultiPoly<Fp> di = b.partial_derivative(i);
            if (!di.is_zero_poly()) jac.gens.push_back(std::move(di));
        }
        bool ok = groebner::projective_empty(jac);
        return {ok ? K3SmoothStatus::Smooth : K3SmoothStatus::Singular};
    }
    if (s.alpha.is_zero_poly()) return {K3SmoothStatus::SingularAlphaZeroChar2};
    // weighted Jacobian criterion in P(1,1,1,3): the equation, its three
    // x/y/z-partials, and the w-partial (= alpha in char 2)
    Fp one(1, p);
    MultiPoly<Fp> w = MultiPoly<Fp>::variable(3, one, 4);
    MultiPoly<Fp> a4 = s.alpha.extended(4), b4 = s.beta.extended(4);
    MultiPoly<Fp> eq = w * w + a4 * w + b4;
    IdealBasis jac;
    jac.gens.push_back(eq);
    for (int i = 0; i < 3; ++i) {
        MultiPoly<Fp> di = a4.partial_derivative(i) * w + b4.partial_derivative(i);
        if (!di.is_zero_poly()) jac.gens.push_back(std::move(di));
    }
    jac.gens.push_back(a4);
    static constexpr int weights[4] = {1, 1, 1, 3};
    bool ok = groebner::projective_empty(jac, std::span<const int>(weights, 4));
    return {ok ? K3SmoothStatus::Smooth : K3SmoothStatus::Singular};
}

namespace {

/// Principal minors Delta_1, Delta_2, Delta_3 of the permuted conic matrix.
std::array<MultiPoly<Int>, 3> principal_minors(const std::array<std::array<MultiPoly<Int>, 3>, 3>& m) {
    MultiPoly<Int> d1 = m[0][0];
    MultiPoly<Int> d2 = m[0][0] * m[1][1] - m[0][1] * m[0][1];
    std::vector<std::vector<MultiPoly<Int>>> full(3, std::vector<MultiPoly<Int>>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) full[i][j] = m[i][j];
    return {d1, d2, mpoly::poly_det(full)};
}

}  // namespace

CompletionRecord complete_squares(const FiberConic<Int>& c) {
    // symmetric matrix of the form: diag 2*a_ii, off-diagonal a_ij
    const auto& f = c.coeff;
    std::array<std::array<MultiPoly<Int>, 3>, 3> M;
    M[0][0] = f[0] + f[0];
    M[1][1] = f[3] + f[3];
    M[2][2] = f[5] + f[5];
    M[0][1] = M[1][0] = f[1];
    M[0][2] = M[2][0] = f[2];
    M[1][2] = M[2][1] = f[4];

    static constexpr std::array<std::array<int, 3>, 6> kOrders = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

    std::vector<std::vector<MultiPoly<Int>>> full(3, std::vector<MultiPoly<Int>>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) full[i][j] = M[i][j];
    if (mpoly::poly_det(full).is_zero_poly())
        throw std::domain_error("complete_squares: degenerate conic (zero discriminant)");

    for (const auto& perm : kOrders) {
        std::array<std::array<MultiPoly<Int>, 3>, 3> P;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) P[i][j] = M[perm[i]][perm[j]];
        auto [d1, d2, d3] = principal_minors(P);
        if (d1.is_zero_poly() || d2.is_zero_poly()) continue;  // vanishing pivot: try next order

        auto RF = [](MultiPoly<Int> n, MultiPoly<Int> d) { return RatFunc(std::move(n), std::move(d)); };
        auto RP = [](MultiPoly<Int> n) { return RatFunc::from_poly(std::move(n)); };

        CompletionRecord rec;
        rec.perm = perm;
        // lambda = (d1/2) P0^2 + (d2/(2 d1)) P1^2 + (d3/(2 d2)) P2^2
        MultiPoly<Int> two = MultiPoly<Int>::constant(Int(2), 3);
        rec.diag = {RF(d1, two), RF(d2, two * d1), RF(d3, two * d2)};
        RatFunc one = RP(MultiPoly<Int>::constant(Int(1), 3));
        RatFunc zero = RP(MultiPoly<Int>(3));
        // P0 = v0 + (M01/d1) v1 + (M02/d1) v2
        rec.T[0] = {one, RF(P[0][1], d1), RF(P[0][2], d1)};
        // P1 = v1 + mu v2, mu = (d1*M12 - M01*M02)/d2
        rec.T[1] = {zero, one, RF(d1 * P[1][2] - P[0][1] * P[0][2], d2)};
        rec.T[2] = {zero, zero, one};
        // normalized conic P^2 = alpha Q^2 + beta R^2
        rec.algebra.alpha = RF(-(d2), d1 * d1);
        rec.algebra.beta = RF(-(d3), d1 * d2);
        return rec;
    }
    throw std::domain_error("complete_squares: vanishing pivot in every variable ordering");
}

QuadricBundle<Int> crt_lift(const QuadricBundle<Fp>& d2, const QuadricBundle<Fp>& d3) {
    QuadricBundle<Int> out;
    auto f2 = d2.fields();
    auto f3 = d3.fields();
    auto fo = out.fields();
    for (int k = 0; k < 10; ++k) {
        // union of monomials
        MultiPoly<Int> acc(3);
        auto add_terms = [&](const MultiPoly<Fp>& a, const MultiPoly<Fp>& b) {
            for (auto& [m, ca] : a.terms()) {
                int c2 = ca.v % 2;
                int c3 = 0;
                for (auto& [mb, cb] : b.terms())
                    if (mb == m) c3 = cb.v;
                int lift = (3 * c2 + 4 * c3) % 6;
                acc = acc + MultiPoly<Int>::term(m, Int(lift));
            }
            for (auto& [mb, cb] : b.terms()) {
                bool seen = false;
                for (auto& [ma, ca] : a.terms())
                    if (ma == mb) seen = true;
                if (!seen) acc = acc + MultiPoly<Int>::term(mb, Int((4 * cb.v) % 6));
            }
        };
        add_terms(*f2[k], *f3[k]);
        *fo[k] = std::move(acc);
    }
    return out;
}

QuadricBundle<Fp> reduce_bundle(const QuadricBundle<Int>& d, int p) {
    QuadricBundle<Fp> out;
    auto fi = d.fields();
    auto fo = out.fields();
    for (int k = 0; k < 10; ++k) *fo[k] = mpoly::reduce_mod(*fi[k], p);
    return out;
}

}  // namespace k3::geometry
