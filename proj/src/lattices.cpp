#include "k3/lattices.hpp"

#include <gmpxx.h>

namespace k3::lattices {

using ff::Elem;
using ff::Field;
using ff::Fq;

std::optional<LatticeCertificate> find_char2_divisor(const K3Surface<Fp>& s) {
    if (s.alpha.is_zero_poly()) throw std::invalid_argument("find_char2_divisor: alpha must be nonzero");
    int p = s.alpha.leading().second.p;
    if (p != 2) throw std::invalid_argument("find_char2_divisor: characteristic 2 only");
    Fp one(1, 2), zero(0, 2);

    for (int cx = 0; cx <= 1; ++cx)
        for (int cy = 0; cy <= 1; ++cy)
            for (int cz = 0; cz <= 1; ++cz) {
                if (!cx && !cy && !cz) continue;
                int coef[3] = {cx, cy, cz};
                MultiPoly<Fp> l(3);
                for (int i = 0; i < 3; ++i)
                    if (coef[i]) l = l + MultiPoly<Fp>::variable(i, one, 3);
                // eliminate the last variable with a nonzero coefficient
                int pivot = cz ? 2 : (cy ? 1 : 0);
                std::array<MultiPoly<Fp>, 3> images;
                for (int i = 0; i < 3; ++i) images[i] = MultiPoly<Fp>::variable(i, one, 3);
                MultiPoly<Fp> rest(3);
                for (int i = 0; i < 3; ++i)
                    if (coef[i] && i != pivot) rest = rest + images[i];
                images[pivot] = rest;  // l = 0  <=>  pivot = sum of the others (char 2)
                int u = -1, v = -1;
                for (int i = 0; i < 3; ++i)
                    if (i != pivot) (u < 0 ? u : v) = i;

                auto eliminate = [&](const MultiPoly<Fp>& f) {
                    return f.substitute(std::span<const MultiPoly<Fp>>(images.data(), 3));
                };
                MultiPoly<Fp> ab = eliminate(s.alpha), bb = eliminate(s.beta);

                for (int mask = 0; mask < 16; ++mask) {
                    MultiPoly<Fp> c(3);
                    int bits[4] = {(mask >> 3) & 1, (mask >> 2) & 1, (mask >> 1) & 1, mask & 1};
                    // cubics u^3, u^2 v, u v^2, v^3 in lexicographic coefficient order
                    int es[4][2] = {{3, 0}, {2, 1}, {1, 2}, {0, 3}};
                    for (int t = 0; t < 4; ++t) {
                        if (!bits[t]) continue;
                        mpoly::Monomial m = mpoly::Monomial::one(3);
                        m.e[u] = static_cast<uint8_t>(es[t][0]);
                        m.e[v] = static_cast<uint8_t>(es[t][1]);
                        c = c + MultiPoly<Fp>::term(m, one);
                    }
                    if (!(c * c + ab * c + bb).is_zero_poly()) continue;
                    LatticeCertificate cert;
                    cert.p = 2;
                    cert.kind = "char2-divisor";
                    cert.witness_l = l;
                    cert.witness_c = c;
                    cert.witness_gamma_prime_c = c + ab;
                    cert.gram = {{{-2, 3}, {3, -2}}};
                    cert.discriminant = -5;
                    return cert;
                }
            }
    return std::nullopt;
}

namespace {

/// Value of the ternary quadratic form with coefficient order
/// (x^2, xy, xz, y^2, yz, z^2) at a point.
Elem conic_value(const Field& F, std::span<const Elem> c, Elem x, Elem y, Elem z) {
    Elem r = F.mul(c[0], F.mul(x, x));
    r = F.add(r, F.mul(c[1], F.mul(x, y)));
    r = F.add(r, F.mul(c[2], F.mul(x, z)));
    r = F.add(r, F.mul(c[3], F.mul(y, y)));
    r = F.add(r, F.mul(c[4], F.mul(y, z)));
    r = F.add(r, F.mul(c[5], F.mul(z, z)));
    return r;
}

std::array<Elem, 6> conic_coeffs(const MultiPoly<Fq>& conic, const Field& F) {
    std::array<Elem, 6> c;
    c.fill(F.zero());
    for (auto& [m, cf] : conic.terms()) {
        int i = -1;
        if (m.e[0] == 2) i = 0;
        else if (m.e[0] == 1 && m.e[1] == 1) i = 1;
        else if (m.e[0] == 1 && m.e[2] == 1) i = 2;
        else if (m.e[1] == 2) i = 3;
        else if (m.e[1] == 1 && m.e[2] == 1) i = 4;
        else if (m.e[2] == 2) i = 5;
        if (i < 0) throw std::invalid_argument("conic_coeffs: not a ternary quadratic form");
        c[i] = cf.v;
    }
    return c;
}

bool conic_is_smooth(const Field& F, std::span<const Elem> c) {
    // det of [[2a,b,c],[b,2d,e],[c,e,2f]] (odd characteristic)
    Elem two = F.from_residue(2);
    Elem a = c[0], b = c[1], cc = c[2], d = c[3], e = c[4], f = c[5];
    Elem det = F.mul(F.mul(two, a), F.sub(F.mul(F.mul(two, d), F.mul(two, f)), F.mul(e, e)));
    det = F.sub(det, F.mul(b, F.sub(F.mul(b, F.mul(two, f)), F.mul(e, cc))));
    det = F.add(det, F.mul(cc, F.sub(F.mul(b, e), F.mul(F.mul(two, d), cc))));
    return !det.is_zero();
}

}  // namespace

std::optional<MultiPoly<Fq>> conic_pullback_form(const MultiPoly<Fq>& sextic, const MultiPoly<Fq>& conic,
                                                 const Field& F) {
    auto c = conic_coeffs(conic, F);
    if (!conic_is_smooth(F, c)) return std::nullopt;
    // rational point by scanning P^2(F_q)
    std::array<Elem, 3> P0;
    bool found = false;
    auto try_point = [&](Elem x, Elem y, Elem z) {
        if (found) return;
        if (conic_value(F, c, x, y, z).is_zero()) {
            P0 = {x, y, z};
            found = true;
        }
    };
    for (uint64_t a = 0; a < F.q() && !found; ++a)
        for (uint64_t b = 0; b < F.q() && !found; ++b) try_point(F.one(), F.from_index(a), F.from_index(b));
    for (uint64_t b = 0; b < F.q() && !found; ++b) try_point(F.zero(), F.one(), F.from_index(b));
    if (!found) try_point(F.zero(), F.zero(), F.one());
    if (!found) throw std::logic_error("conic_pullback_form: smooth conic without a rational point");

    // lines through P0 in the directions of the two standard vectors away
    // from P0's leading coordinate
    int i0 = !P0[0].is_zero() ? 0 : (!P0[1].is_zero() ? 1 : 2);
    std::array<Elem, 3> D1{}, D2{};
    int picked = 0;
    for (int i = 0; i < 3; ++i) {
        if (i == i0) continue;
        (picked++ == 0 ? D1 : D2)[i] = F.one();
    }
    // B(u, v) = Q(u+v) - Q(u) - Q(v)
    auto Q = [&](const std::array<Elem, 3>& v) { return conic_value(F, c, v[0], v[1], v[2]); };
    auto B = [&](const std::array<Elem, 3>& u, const std::array<Elem, 3>& v) {
        std::array<Elem, 3> s{F.add(u[0], v[0]), F.add(u[1], v[1]), F.add(u[2], v[2])};
        return F.sub(F.sub(Q(s), Q(u)), Q(v));
    };
    // X(s,t) = Q(V) P0 - B(P0,V) V with V = s D1 + t D2:
    //   Q(V)    = Q(D1) s^2 + B(D1,D2) st + Q(D2) t^2
    //   B(P0,V) = B(P0,D1) s + B(P0,D2) t
    Elem q11 = Q(D1), q12 = B(D1, D2), q22 = Q(D2);
    Elem b1 = B(P0, D1), b2 = B(P0, D2);
    auto bin = [&](Elem s2, Elem st, Elem t2) {
        // binary form s2*s^2 + st*s*t + t2*t^2 over (s, t)
        MultiPoly<Fq> f(2);
        Fq one(F, F.one());
        auto add_term = [&](int es, int et, Elem v) {
            if (v.is_zero()) return;
            mpoly::Monomial m = mpoly::Monomial::one(2);
            m.e[0] = static_cast<uint8_t>(es);
            m.e[1] = static_cast<uint8_t>(et);
            f = f + MultiPoly<Fq>::term(m, Fq(F, v));
        };
        add_term(2, 0, s2);
        add_term(1, 1, st);
        add_term(0, 2, t2);
        return f;
    };
    MultiPoly<Fq> qv = bin(q11, q12, q22);
    Fq fone(F, F.one());
    MultiPoly<Fq> bv = MultiPoly<Fq>::variable(0, fone, 2).scaled(Fq(F, b1)) +
                       MultiPoly<Fq>::variable(1, fone, 2).scaled(Fq(F, b2));
    std::array<MultiPoly<Fq>, 3> X;
    for (int i = 0; i < 3; ++i) {
        MultiPoly<Fq> vi(2);
        if (!D1[i].is_zero()) vi = vi + MultiPoly<Fq>::variable(0, fone, 2).scaled(Fq(F, D1[i]));
        if (!D2[i].is_zero()) vi = vi + MultiPoly<Fq>::variable(1, fone, 2).scaled(Fq(F, D2[i]));
        X[i] = qv.scaled(Fq(F, P0[i])) - bv * vi;
    }
    return sextic.substitute(std::span<const MultiPoly<Fq>>(X.data(), 3));
}

namespace {

MultiPoly<Fq> lift_sextic(const K3Surface<Fp>& s, const Field& F) {
    return ff::lift_poly(s.branch_sextic(), F);
}

}  // namespace

bool conic_is_tangent(const K3Surface<Fp>& s, const MultiPoly<Fp>& conic, int e) {
    int p = s.beta.leading().second.p;
    Field F(p, e);
    auto g = conic_pullback_form(lift_sextic(s, F), ff::lift_poly(conic, F), F);
    if (!g || g->is_zero_poly()) return false;
    return mpoly::even_multiplicity_form(*g);
}

std::optional<LatticeCertificate> find_tangent_conic(const K3Surface<Fp>& s, int e) {
    if (!s.alpha.is_zero_poly()) throw std::invalid_argument("find_tangent_conic: alpha must vanish");
    if (s.beta.is_zero_poly()) throw std::invalid_argument("find_tangent_conic: zero branch sextic");
    int p = s.beta.leading().second.p;
    if (p == 2) throw std::invalid_argument("find_tangent_conic: odd characteristic only");
    Field F(p, e);
    MultiPoly<Fq> sextic = lift_sextic(s, F);

    // conics up to scalar: first nonzero coefficient = 1, remaining entries
    // enumerated by element index; lexicographically least vector first
    uint64_t q = F.q();
    for (int lead = 5; lead >= 0; --lead) {
        int free = 5 - lead;
        std::vector<uint64_t> idx(free, 0);
        for (;;) {
            std::array<Elem, 6> c;
            c.fill(F.zero());
            c[lead] = F.one();
            for (int i = 0; i < free; ++i) c[lead + 1 + i] = F.from_index(idx[i]);
            if (conic_is_smooth(F, c)) {
                Fq fone(F, F.one());
                MultiPoly<Fq> conic(3);
                static constexpr int mono[6][3] = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                                   {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
                for (int i = 0; i < 6; ++i) {
                    if (c[i].is_zero()) continue;
                    mpoly::Monomial m = mpoly::Monomial::one(3);
                    for (int k = 0; k < 3; ++k) m.e[k] = static_cast<uint8_t>(mono[i][k]);
                    conic = conic + MultiPoly<Fq>::term(m, Fq(F, c[i]));
                }
                auto g = conic_pullback_form(sextic, conic, F);
                if (g && !g->is_zero_poly() && mpoly::even_multiplicity_form(*g)) {
                    LatticeCertificate cert;
                    cert.p = p;
                    cert.kind = "tangent-conic";
                    cert.conic_field_degree = e;
                    cert.conic_text = mpoly::to_string(conic, mpoly::vars_xyz());
                    if (e == 1)
                        cert.conic_fp = conic.map_coeffs<Fp>(
                            [&](const Fq& cf) { return Fp(F.coeffs(cf.v)[0], p); });
                    cert.gram = {{{-2, 6}, {6, -2}}};
                    cert.discriminant = -32;
                    return cert;
                }
            }
            // next index vector (lexicographic, last position fastest)
            int i = free - 1;
            while (i >= 0 && idx[i] == q - 1) idx[i--] = 0;
            if (i < 0) break;
            ++idx[i];
        }
    }
    return std::nullopt;
}

bool rank_one_conclusion(const LatticeCertificate& cert2, const LatticeCertificate& cert3, int ub2,
                         int ub3) {
    if (ub2 != 2 || ub3 != 2) return false;
    if (cert2.discriminant == 0 || cert3.discriminant == 0) return false;
    Int prod = Int(cert2.discriminant) * Int(cert3.discriminant);
    if (sgn(prod) < 0) return true;  // negative numbers are never squares
    return mpz_perfect_square_p(prod.get_mpz_t()) == 0;
}

}  // namespace k3::lattices
