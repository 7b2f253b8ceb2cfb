#pragma once

#include <array>
#include <optional>
#include <vector>

#include "k3/groebner.hpp"
#include "k3/mpoly.hpp"

namespace k3::geometry {

using mpoly::MultiPoly;
using mpoly::RatFunc;

/// The ten forms in k[Y1,Y2,Y3] (named x,y,z here) cutting out a cubic
/// fourfold containing the plane {Y1 = Y2 = Y3 = 0}: six linear L_ij, three
/// quadratic Q_i4, one cubic C_44.
template <class C>
struct QuadricBundle {
    MultiPoly<C> L11, L12, L13, L22, L23, L33;
    MultiPoly<C> Q14, Q24, Q34;
    MultiPoly<C> C44;

    std::array<const MultiPoly<C>*, 10> fields() const {
        return {&L11, &L12, &L13, &L22, &L23, &L33, &Q14, &Q24, &Q34, &C44};
    }
    std::array<MultiPoly<C>*, 10> fields() {
        return {&L11, &L12, &L13, &L22, &L23, &L33, &Q14, &Q24, &Q34, &C44};
    }
    static std::array<const char*, 10> field_names() {
        return {"L11", "L12", "L13", "L22", "L23", "L33", "Q14", "Q24", "Q34", "C44"};
    }
    bool operator==(const QuadricBundle&) const = default;

    /// Degrees are 1,1,1,1,1,1,2,2,2,3 and every form is homogeneous.
    void check_degrees() const;
};

/// Degree-2 K3 surface w^2 + alpha*w + beta = 0 in P(1,1,1,3);
/// alpha cubic, beta sextic in x,y,z. In characteristic != 2 (and over Z/Q)
/// alpha = 0 and the branch sextic is F = -beta, i.e. the surface is w^2 = F.
template <class C>
struct K3Surface {
    MultiPoly<C> alpha, beta;

    MultiPoly<C> branch_sextic() const { return -beta; }
    bool operator==(const K3Surface&) const = default;
};

/// Ternary quadratic form in (p14, p24, p34) with coefficients in k[x,y,z];
/// coefficient order: p14^2, p14*p24, p14*p34, p24^2, p24*p34, p34^2.
template <class C>
struct FiberConic {
    std::array<MultiPoly<C>, 6> coeff;
    bool operator==(const FiberConic&) const = default;
};

/// Quaternion algebra (alpha, beta) over Q(x,y,z).
struct QuaternionAlgebra {
    RatFunc alpha, beta;
};

/// Change of variables recorded by complete_squares: with the pivot
/// permutation sigma, the form satisfies
///   lambda = c[0]*P0^2 + c[1]*P1^2 + c[2]*P2^2,
/// where Pi = sum_j T[i][j] * v_sigma(j).
struct CompletionRecord {
    std::array<int, 3> perm;
    std::array<RatFunc, 3> diag;
    std::array<std::array<RatFunc, 3>, 3> T;
    QuaternionAlgebra algebra;
};

/// L_11 X1^2 + ... + L_33 X3^2 + Q_14 X1 + Q_24 X2 + Q_34 X3 + C_44 with
/// the forms' variables mapped to (Y1, Y2, Y3); homogeneous cubic in
/// (X1, X2, X3, Y1, Y2, Y3).
template <class C>
MultiPoly<C> fourfold_equation(const QuadricBundle<C>& d);

/// The symmetric matrix of the quadric bundle (valid away from char 2).
template <class C>
std::vector<std::vector<MultiPoly<C>>> gram_matrix(const QuadricBundle<C>& d);

/// Discriminant data of Example-3.2 type: L, M (and N = L11 L22 L33 C44),
/// satisfying det(gram) = L^2 + 4M + 16N identically.
template <class C>
std::pair<MultiPoly<C>, MultiPoly<C>> char2_discriminant_forms(const QuadricBundle<C>& d);

/// K3 surface of the fourfold: char 2 uses (alpha, beta) = (L, M); otherwise
/// alpha = 0 and beta = -det(gram), so that the surface is w^2 = det(gram).
template <class C>
K3Surface<C> k3_from_fourfold(const QuadricBundle<C>& d);

/// Jacobian-criterion smoothness of the fourfold (finite fields).
bool fourfold_smooth(const QuadricBundle<Fp>& d);

enum class K3SmoothStatus { Smooth, SingularAlphaZeroChar2, Singular };
struct K3SmoothReport {
    K3SmoothStatus status;
    bool smooth() const { return status == K3SmoothStatus::Smooth; }
};

/// char != 2: smoothness of the plane branch sextic; char 2: the weighted
/// Jacobian criterion in P(1,1,1,3), with alpha = 0 reported separately.
K3SmoothReport k3_smooth(const K3Surface<Fp>& s);

/// The fiber conic lambda = L11 p14^2 + L12 p14 p24 + L13 p14 p34 +
/// L22 p24^2 + L23 p24 p34 + L33 p34^2.
template <class C>
FiberConic<C> fiber_conic(const QuadricBundle<C>& d);

/// Diagonalize the conic over Q(x,y,z) and renormalize to
/// P^2 = alpha Q^2 + beta R^2; pivot order p14 first, with the other
/// orderings attempted when a pivot vanishes.
CompletionRecord complete_squares(const FiberConic<Int>& c);

/// Coefficientwise CRT: the unique representative in {0..5}.
QuadricBundle<Int> crt_lift(const QuadricBundle<Fp>& d2, const QuadricBundle<Fp>& d3);

QuadricBundle<Fp> reduce_bundle(const QuadricBundle<Int>& d, int p);

template <class C>
K3Surface<Fp> reduce_surface(const K3Surface<C>& s, int p);

// -- template definitions --

template <class C>
void QuadricBundle<C>::check_degrees() const {
    static constexpr int want[10] = {1, 1, 1, 1, 1, 1, 2, 2, 2, 3};
    auto fs = fields();
    for (int i = 0; i < 10; ++i) {
        if (fs[i]->is_zero_poly()) continue;
        auto hd = fs[i]->homogeneous_degree();
        if (!hd || *hd != want[i])
            throw std::invalid_argument(std::string("QuadricBundle: ") + field_names()[i] +
                                        " must be homogeneous of degree " + std::to_string(want[i]));
    }
}

template <class C>
MultiPoly<C> fourfold_equation(const QuadricBundle<C>& d) {
    using P = MultiPoly<C>;
    // variables: X1 X2 X3 Y1 Y2 Y3
    auto embed = [](const P& f) {
        P g = f.extended(6);
        std::vector<typename P::Term> out;
        for (auto& [m, c] : g.terms()) {
            mpoly::Monomial mm = mpoly::Monomial::one(6);
            mm.e[3] = m.e[0];
            mm.e[4] = m.e[1];
            mm.e[5] = m.e[2];
            out.emplace_back(mm, c);
        }
        return P(std::move(out), 6);
    };
    auto X = [](int i, const P& sample) {
        // monomial X_i as a 6-variable polynomial with a unit coefficient
        C one = one_like(sample.leading().second);
        return P::variable(i, one, 6);
    };
    // find a nonzero form to supply the ring context
    const P* ctx = nullptr;
    for (auto* f : d.fields())
        if (!f->is_zero_poly()) ctx = f;
    if (!ctx) throw std::invalid_argument("fourfold_equation: all forms zero");
    P x1 = X(0, *ctx), x2 = X(1, *ctx), x3 = X(2, *ctx);
    return embed(d.L11) * x1 * x1 + embed(d.L12) * x1 * x2 + embed(d.L13) * x1 * x3 +
           embed(d.L22) * x2 * x2 + embed(d.L23) * x2 * x3 + embed(d.L33) * x3 * x3 +
           embed(d.Q14) * x1 + embed(d.Q24) * x2 + embed(d.Q34) * x3 + embed(d.C44);
}

template <class C>
std::vector<std::vector<MultiPoly<C>>> gram_matrix(const QuadricBundle<C>& d) {
    const MultiPoly<C>* ctx = nullptr;
    for (auto* f : d.fields())
        if (!f->is_zero_poly()) ctx = f;
    if (ctx && char_of(ctx->leading().second) == 2)
        throw std::domain_error("gram_matrix: invalid in characteristic 2");
    auto two = [](const MultiPoly<C>& f) {
        return f + f;
    };
    return {{two(d.L11), d.L12, d.L13, d.Q14},
            {d.L12, two(d.L22), d.L23, d.Q24},
            {d.L13, d.L23, two(d.L33), d.Q34},
            {d.Q14, d.Q24, d.Q34, two(d.C44)}};
}

template <class C>
std::pair<MultiPoly<C>, MultiPoly<C>> char2_discriminant_forms(const QuadricBundle<C>& d) {
    const auto &L11 = d.L11, &L12 = d.L12, &L13 = d.L13, &L22 = d.L22, &L23 = d.L23, &L33 = d.L33;
    const auto &Q14 = d.Q14, &Q24 = d.Q24, &Q34 = d.Q34, &C44 = d.C44;
    MultiPoly<C> L = L12 * Q34 + L13 * Q24 + L23 * Q14;
    MultiPoly<C> M = -(L12 * L23 * Q34 * Q14 + L13 * L23 * Q24 * Q14 + L12 * Q24 * L13 * Q34) +
                     (L11 * L23 * Q24 * Q34 + L22 * L13 * Q34 * Q14 + L33 * L12 * Q24 * Q14 +
                      C44 * L12 * L23 * L13) -
                     (L11 * L22 * Q34 * Q34 + L11 * L33 * Q24 * Q24 + L11 * C44 * L23 * L23 +
                      L22 * L33 * Q14 * Q14 + L22 * C44 * L13 * L13 + L33 * C44 * L12 * L12);
    return {std::move(L), std::move(M)};
}

template <class C>
K3Surface<C> k3_from_fourfold(const QuadricBundle<C>& d) {
    d.check_degrees();
    const MultiPoly<C>* ctx = nullptr;
    for (auto* f : d.fields())
        if (!f->is_zero_poly()) ctx = f;
    if (ctx && char_of(ctx->leading().second) == 2) {
        auto [L, M] = char2_discriminant_forms(d);
        return {std::move(L), std::move(M)};
    }
    // w^2 = det(gram); stored in the w^2 + alpha w + beta = 0 convention
    MultiPoly<C> det = mpoly::poly_det(gram_matrix(d));
    return {MultiPoly<C>(3), -det};
}

template <class C>
FiberConic<C> fiber_conic(const QuadricBundle<C>& d) {
    return {{d.L11, d.L12, d.L13, d.L22, d.L23, d.L33}};
}

template <class C>
K3Surface<Fp> reduce_surface(const K3Surface<C>& s, int p) {
    static_assert(std::is_same_v<C, Int>);
    return {mpoly::reduce_mod(s.alpha, p), mpoly::reduce_mod(s.beta, p)};
}

}  // namespace k3::geometry
