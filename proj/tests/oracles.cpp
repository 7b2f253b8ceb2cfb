#include "oracles.hpp"

#include "k3/lattices.hpp"

namespace oracles {

std::vector<k3::mpoly::Monomial> naive_initial_ideal(std::vector<k3::groebner::Poly> G) {
    using k3::groebner::Poly;
    std::erase_if(G, [](const Poly& g) { return g.is_zero_poly(); });
    for (auto& g : G) g = g.scaled(k3::div_exact(one_like(g.leading().second), g.leading().second));
    std::vector<std::pair<size_t, size_t>> queue;
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = i + 1; j < G.size(); ++j) queue.emplace_back(i, j);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        auto [i, j] = queue[qi];
        const auto& [mi, ci] = G[i].leading();
        const auto& [mj, cj] = G[j].leading();
        auto l = k3::mpoly::Monomial::lcm(mi, mj);
        Poly s = G[i].times_term(l.quotient(mi), k3::div_exact(one_like(ci), ci)) -
                 G[j].times_term(l.quotient(mj), k3::div_exact(one_like(cj), cj));
        Poly r = naive_normal_form(s, G);
        if (r.is_zero_poly()) continue;
        r = r.scaled(k3::div_exact(one_like(r.leading().second), r.leading().second));
        G.push_back(r);
        for (size_t k = 0; k + 1 < G.size(); ++k) queue.emplace_back(k, G.size() - 1);
    }
    // minimal generators of the initial ideal
    std::vector<k3::mpoly::Monomial> lead;
    for (auto& g : G) lead.push_back(g.leading().first);
    std::vector<k3::mpoly::Monomial> minimal;
    for (size_t i = 0; i < lead.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < lead.size() && !redundant; ++j)
            if (i != j && lead[j].divides(lead[i]) && !(lead[i] == lead[j] && j > i)) redundant = true;
        if (!redundant) minimal.push_back(lead[i]);
    }
    std::sort(minimal.begin(), minimal.end(), k3::mpoly::grevlex_less);
    minimal.erase(std::unique(minimal.begin(), minimal.end()), minimal.end());
    return minimal;
}

int hilbert_oracle(const Rat& a, const Rat& b, long p) {
    // clear square denominators and strip square prime powers: the symbol
    // only depends on square classes
    auto normalize = [&](const Rat& x) -> long {
        Int v = x.get_num() * x.get_den();  // x ~ num*den mod squares
        long mod = 1;
        for (int i = 0; i < (p == 2 ? 5 : 3); ++i) mod *= p;
        // reduce the p-valuation mod 2
        Int n = v;
        int val = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n = k3::div_exact(n, Int(p));
            ++val;
        }
        Int rep = (val % 2 == 1) ? n * p : n;
        long r = static_cast<long>(mpz_fdiv_ui(rep.get_mpz_t(), mod));
        return r;
    };
    long mod = 1;
    for (int i = 0; i < (p == 2 ? 5 : 3); ++i) mod *= p;
    long aa = normalize(a), bb = normalize(b);
    for (long x = 0; x < mod; ++x)
        for (long y = 0; y < mod; ++y)
            for (long z = 0; z < mod; ++z) {
                if (x % p == 0 && y % p == 0 && z % p == 0) continue;
                long v = ((aa * x) % mod * x + (bb * y) % mod * y - z * z) % mod;
                if ((v + mod) % mod == 0) return 0;
            }
    return 1;
}

bool pointwise_tangency(const k3::geometry::K3Surface<Fp>& s, const k3::mpoly::MultiPoly<Fp>& conic) {
    using k3::ff::Fq;
    using k3::mpoly::MultiPoly;
    int p = s.beta.leading().second.p;
    // the pullback form over the prime field first
    Field F1(p, 1);
    auto g1 = k3::lattices::conic_pullback_form(k3::ff::lift_poly(s.branch_sextic(), F1),
                                                k3::ff::lift_poly(conic, F1), F1);
    if (!g1 || g1->is_zero_poly()) return false;
    // express g over F_p (the conic and sextic live there)
    MultiPoly<Fp> g = g1->map_coeffs<Fp>([&](const Fq& c) { return Fp(F1.coeffs(c.v)[0], p); });
    int total_degree = g.degree();

    // multiplicity-at-a-point bookkeeping over F_{p^k}, k = 1..6; a root of
    // multiplicity >= 2 of a degree-12 form has degree <= 6 over F_p
    int64_t accounted = 0;
    for (int k = 1; k <= 6; ++k) {
        Field F(p, k);
        MultiPoly<Fq> gk = k3::ff::lift_poly(g, F);
        MultiPoly<Fq> gs = gk.partial_derivative(0), gt = gk.partial_derivative(1);
        auto eval2 = [&](const MultiPoly<Fq>& f, Elem sv, Elem tv) {
            if (f.is_zero_poly()) return F.zero();
            std::array<Fq, 2> pt{Fq(F, sv), Fq(F, tv)};
            return f.eval<Fq>(std::span<const Fq>(pt.data(), 2), [&](const Fq& c) { return c; }).v;
        };
        auto point_degree = [&](Elem sv, Elem tv) {
            // minimal j with Frobenius^j fixing [s:t] projectively
            for (int j = 1; j <= k; ++j) {
                Elem sf = sv, tf = tv;
                for (int i = 0; i < j; ++i) {
                    sf = F.pow(sf, p);
                    tf = F.pow(tf, p);
                }
                // projective equality (s,t) ~ (sf,tf)
                if (F.mul(sv, tf) == F.mul(tv, sf)) return j;
            }
            return k;
        };
        auto multiplicity = [&](Elem sv, Elem tv) {
            // repeated exact division by (t_v s - s_v t)
            MultiPoly<Fq> lin(2);
            Fq one(F, F.one());
            lin = MultiPoly<Fq>::variable(0, one, 2).scaled(Fq(F, tv)) -
                  MultiPoly<Fq>::variable(1, one, 2).scaled(Fq(F, sv));
            MultiPoly<Fq> cur = gk;
            int m = 0;
            for (;;) {
                // divide cur by lin if possible: substitute a parametrization
                // of lin = 0 ... simpler: long division in the s variable
                // cur = lin * q + r with r free of s when tv != 0; use eval test
                // instead: lin | cur iff cur vanishes on the whole line lin=0,
                // which for binary forms means at the single projective root.
                if (!eval2(cur, sv, tv).is_zero()) break;
                // synthetic division of the binary form by the linear form
                // (coefficients ascending in s)
                int d = cur.degree();
                std::vector<Fq> cs(d + 1, Fq(F, F.zero()));
                for (auto& [mm, cc] : cur.terms()) cs[mm.e[0]] = cc;
                std::vector<Fq> qs(d, Fq(F, F.zero()));
                if (!tv.is_zero()) {
                    // lin = tv*s - sv*t: divide treating t = 1 then rehomogenize
                    Fq tvi(F, F.inverse(tv));
                    Fq svq(F, sv);
                    // cur(s,1) = (tv s - sv) * q(s,1)
                    Fq carry(F, F.zero());
                    for (int i = d; i >= 1; --i) {
                        Fq qc = (cs[i] + carry) * tvi;
                        qs[i - 1] = qc;
                        carry = qc * svq;
                    }
                } else {
                    // lin ~ t: every term has a positive t-exponent (the
                    // vanishing eval above is exactly cs[d] = 0)
                    for (int i = 0; i < d; ++i) qs[i] = cs[i];
                }
                MultiPoly<Fq> next(2);
                for (int i = 0; i < d; ++i) {
                    if (is_zero(qs[i])) continue;
                    k3::mpoly::Monomial mm = k3::mpoly::Monomial::one(2);
                    mm.e[0] = static_cast<uint8_t>(i);
                    mm.e[1] = static_cast<uint8_t>(d - 1 - i);
                    next = next + MultiPoly<Fq>::term(mm, qs[i]);
                }
                cur = next;
                ++m;
                if (cur.is_zero_poly()) break;
            }
            return m;
        };
        auto consider = [&](Elem sv, Elem tv) -> bool {
            if (!eval2(gk, sv, tv).is_zero()) return true;
            if (!eval2(gs, sv, tv).is_zero() || !eval2(gt, sv, tv).is_zero()) return false;
            if (point_degree(sv, tv) == k) accounted += multiplicity(sv, tv);
            return true;
        };
        for (uint64_t i = 0; i < F.q(); ++i)
            if (!consider(F.from_index(i), F.one())) return false;
        if (!consider(F.one(), F.zero())) return false;
    }
    return accounted == total_degree;
}

}  // namespace oracles
