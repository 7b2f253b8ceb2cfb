// Independent brute-force oracles used to pin the implementation paths.
#pragma once

#include <map>
#include <set>
#include <vector>

#include "k3/counting.hpp"
#include "k3/ff.hpp"
#include "k3/groebner.hpp"

namespace oracles {

using k3::Fp;
using k3::Int;
using k3::Rat;
using k3::ff::Elem;
using k3::ff::Field;

/// #roots of w^2 + a w + b by trying every w.
inline int naive_root_count(const Field& F, Elem a, Elem b) {
    int cnt = 0;
    for (uint64_t i = 0; i < F.q(); ++i) {
        Elem w = F.from_index(i);
        Elem v = F.add(F.add(F.mul(w, w), F.mul(a, w)), b);
        if (v.is_zero()) ++cnt;
    }
    return cnt;
}

/// #X(F_q) by enumerating all of P(1,1,1,3)(F_q) with weighted-orbit dedup:
/// tuples (x,y,z,w) != 0 under (x,y,z,w) ~ (lx, ly, lz, l^3 w).
inline int64_t naive_weighted_count(const k3::geometry::K3Surface<Fp>& s, const Field& F) {
    auto value = [&](Elem x, Elem y, Elem z, Elem w) {
        std::array<k3::ff::Fq, 3> pt{k3::ff::Fq(F, x), k3::ff::Fq(F, y), k3::ff::Fq(F, z)};
        auto inject = [&](const Fp& c) { return k3::ff::Fq(F, F.from_residue(c.v)); };
        Elem a = s.alpha.is_zero_poly()
                     ? F.zero()
                     : s.alpha.eval<k3::ff::Fq>(std::span<const k3::ff::Fq>(pt.data(), 3), inject).v;
        Elem b = s.beta.is_zero_poly()
                     ? F.zero()
                     : s.beta.eval<k3::ff::Fq>(std::span<const k3::ff::Fq>(pt.data(), 3), inject).v;
        return F.add(F.add(F.mul(w, w), F.mul(a, w)), b);
    };
    auto key = [&](Elem x, Elem y, Elem z, Elem w) {
        return std::array<uint64_t, 4>{F.to_index(x), F.to_index(y), F.to_index(z), F.to_index(w)};
    };
    int64_t orbits = 0;
    for (uint64_t xi = 0; xi < F.q(); ++xi)
        for (uint64_t yi = 0; yi < F.q(); ++yi)
            for (uint64_t zi = 0; zi < F.q(); ++zi)
                for (uint64_t wi = 0; wi < F.q(); ++wi) {
                    if (!xi && !yi && !zi && !wi) continue;
                    Elem x = F.from_index(xi), y = F.from_index(yi), z = F.from_index(zi),
                         w = F.from_index(wi);
                    if (!value(x, y, z, w).is_zero()) continue;
                    // canonical orbit representative: least coordinate key
                    auto mykey = key(x, y, z, w);
                    bool least = true;
                    for (uint64_t li = 1; li < F.q() && least; ++li) {
                        Elem l = F.from_index(li);
                        if (l == F.one()) continue;
                        Elem l3 = F.mul(F.mul(l, l), l);
                        auto other = key(F.mul(l, x), F.mul(l, y), F.mul(l, z), F.mul(l3, w));
                        if (other < mykey) least = false;
                    }
                    if (least) ++orbits;
                }
    return orbits;
}

/// Naive polynomial reducer with a different divisor-selection strategy
/// (last matching basis element), for cross-checking Buchberger output.
inline k3::groebner::Poly naive_normal_form(k3::groebner::Poly f,
                                            std::span<const k3::groebner::Poly> basis) {
    k3::groebner::Poly rem(f.nvars());
    while (!f.is_zero_poly()) {
        auto lm = f.leading().first;  // copies: f is reassigned below
        auto lc = f.leading().second;
        const k3::groebner::Poly* choice = nullptr;
        for (const auto& g : basis) {
            if (!g.is_zero_poly() && g.leading().first.divides(lm)) choice = &g;
        }
        if (choice) {
            const auto& [gm, gc] = choice->leading();
            f = f - choice->times_term(lm.quotient(gm), k3::div_exact(lc, gc));
        } else {
            f = f - k3::groebner::Poly::term(lm, lc);
            rem = rem + k3::groebner::Poly::term(lm, lc);
        }
    }
    return rem;
}

/// Independent Buchberger (FIFO pair queue, no criteria) returning the
/// sorted leading monomials of a reduced basis.
std::vector<k3::mpoly::Monomial> naive_initial_ideal(std::vector<k3::groebner::Poly> G);

/// Hilbert-symbol oracle: primitive solvability of z^2 = a x^2 + b y^2
/// modulo p^3 (odd p) or 2^5; 0 = split, 1 = invariant 1/2.
int hilbert_oracle(const Rat& a, const Rat& b, long p);

/// Pointwise tangency oracle over F_{p^k}, k = 1..6: every root of the
/// degree-12 pullback form has both partials vanishing there, and the root
/// multiplicities found in those fields account for the full degree.
bool pointwise_tangency(const k3::geometry::K3Surface<Fp>& s, const k3::mpoly::MultiPoly<Fp>& conic);

}  // namespace oracles
