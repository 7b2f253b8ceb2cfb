#include "k3/groebner.hpp"

#include <algorithm>
#include <set>

namespace k3::groebner {

using mpoly::grevlex_less;

Poly normal_form(Poly f, std::span<const Poly> basis) {
    Poly rem(f.nvars());
    while (!f.is_zero_poly()) {
        auto lm = f.leading().first;  // copies: f is reassigned below
        auto lc = f.leading().second;
        bool reduced = false;
        for (const auto& g : basis) {
            if (g.is_zero_poly()) continue;
            const auto& [gm, gc] = g.leading();
            if (!gm.divides(lm)) continue;
            f = f - g.times_term(lm.quotient(gm), div_exact(lc, gc));
            reduced = true;
            break;
        }
        if (!reduced) {
            rem = rem + Poly::term(lm, lc);
            f = f - Poly::term(lm, lc);
        }
    }
    return rem;
}

namespace {

Poly spoly(const Poly& f, const Poly& g) {
    const auto& [fm, fc] = f.leading();
    const auto& [gm, gc] = g.leading();
    Monomial l = Monomial::lcm(fm, gm);
    return f.times_term(l.quotient(fm), div_exact(one_like(fc), fc)) -
           g.times_term(l.quotient(gm), div_exact(one_like(gc), gc));
}

}  // namespace

IdealBasis buchberger(const IdealBasis& basis) {
    std::vector<Poly> G;
    for (const auto& g : basis.gens) {
        if (g.is_zero_poly()) continue;
        G.push_back(g.scaled(div_exact(one_like(g.leading().second), g.leading().second)));
    }
    struct Pair {
        int deg;
        size_t i, j;
        bool operator<(const Pair& o) const {
            return std::tie(deg, i, j) < std::tie(o.deg, o.i, o.j);
        }
    };
    std::set<Pair> pairs;
    auto add_pairs = [&](size_t k) {
        for (size_t i = 0; i < k; ++i) {
            Monomial l = Monomial::lcm(G[i].leading().first, G[k].leading().first);
            pairs.insert({l.deg(), i, k});
        }
    };
    for (size_t k = 1; k < G.size(); ++k) add_pairs(k);

    while (!pairs.empty()) {
        auto [deg, i, j] = *pairs.begin();
        pairs.erase(pairs.begin());
        if (G[i].leading().first.coprime_with(G[j].leading().first)) continue;  // Buchberger's criterion
        Poly r = normal_form(spoly(G[i], G[j]), G);
        if (r.is_zero_poly()) continue;
        r = r.scaled(div_exact(one_like(r.leading().second), r.leading().second));
        G.push_back(std::move(r));
        add_pairs(G.size() - 1);
    }

    // inter-reduce to the reduced basis
    for (;;) {
        bool changed = false;
        for (size_t i = 0; i < G.size(); ++i) {
            Poly gi = std::move(G[i]);
            G[i] = Poly(gi.nvars());
            Poly r = normal_form(gi, G);
            if (!(r == gi)) changed = true;
            if (!r.is_zero_poly())
                r = r.scaled(div_exact(one_like(r.leading().second), r.leading().second));
            G[i] = std::move(r);
        }
        std::erase_if(G, [](const Poly& g) { return g.is_zero_poly(); });
        if (!changed) break;
    }
    std::sort(G.begin(), G.end(), [](const Poly& a, const Poly& b) {
        return grevlex_less(a.leading().first, b.leading().first);
    });
    IdealBasis out;
    out.gens = std::move(G);
    return out;
}

bool projective_empty(const IdealBasis& basis, std::span<const int> weights) {
    int nv = 0;
    for (const auto& g : basis.gens)
        if (!g.is_zero_poly()) nv = g.nvars();
    std::vector<int> w(weights.begin(), weights.end());
    if (w.empty()) w.assign(nv, 1);
    for (const auto& g : basis.gens)
        if (!g.is_zero_poly() && !g.homogeneous_degree(w))
            throw std::invalid_argument("projective_empty: non-homogeneous generator");

    IdealBasis gb = buchberger(basis);
    for (const auto& g : gb.gens)
        if (g.leading().first.deg() == 0) return true;  // unit ideal
    for (int v = 0; v < nv; ++v) {
        bool pure = false;
        for (const auto& g : gb.gens) {
            const Monomial& m = g.leading().first;
            if (m.is_pure_power() && m.e[v] > 0) {
                pure = true;
                break;
            }
        }
        if (!pure) return false;
    }
    return true;
}

}  // namespace k3::groebner
