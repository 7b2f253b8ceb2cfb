#include "k3/counting.hpp"

#include <algorithm>
#include <thread>

namespace k3::counting {

using ff::Elem;
using ff::Field;
using geometry::K3Surface;
using mpoly::MultiPoly;

std::string surface_fingerprint(const geometry::K3Surface<Fp>& s) {
    int p = 0;
    for (auto* f : {&s.alpha, &s.beta})
        if (!f->is_zero_poly()) p = f->leading().second.p;
    std::string data = std::to_string(p) + "|" + mpoly::to_string(s.alpha, mpoly::vars_xyz()) + "|" +
                       mpoly::to_string(s.beta, mpoly::vars_xyz());
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

/// f restricted to a patch (x fixed to 0/1, y fixed to 0/1 or free):
/// term list (e_y, e_z, coeff) grouped by the z-exponent.
struct PatchTerms {
    // groups[k] = (y-exponent, coefficient value in [0,p)) with z-exponent k
    std::array<std::vector<std::pair<int, int>>, 7> groups;
    int maxz = 0;
};

PatchTerms restrict_patch1(const MultiPoly<Fp>& f) {
    PatchTerms t;
    for (auto& [m, c] : f.terms()) {
        // x = 1: monomial x^a y^b z^k contributes (b, k)
        t.groups[m.e[2]].emplace_back(m.e[1], c.v);
        t.maxz = std::max<int>(t.maxz, m.e[2]);
    }
    return t;
}

Elem row_coefficient(const Field& F, const std::vector<std::pair<int, int>>& grp, uint64_t y_idx) {
    Elem acc = F.zero();
    for (auto& [ey, c] : grp) {
        Elem v = F.table_pow(y_idx, ey);
        for (int i = 0; i < c; ++i) acc = F.add(acc, v);
    }
    return acc;
}

/// Shared per-field counting context.
struct Engine {
    const Field& F;
    uint64_t q;
    // generator-power enumeration of F_q^*
    struct Packed {
        uint32_t lo, hi;
    };
    std::vector<Packed> exp_rep;    // g^j, packed planes (p = 2, 3)
    std::vector<uint32_t> exp_idx;  // index of g^j
    std::vector<uint32_t> log_tbl;  // inverse of exp_idx
    std::vector<uint32_t> l0;       // p = 3: bitmask -> sum of 3^i
    std::vector<uint8_t> fiber;     // odd p: #roots of w^2 = -(...) per index

    explicit Engine(const Field& f) : F(f), q(f.q()) {
        Elem g = F.multiplicative_generator();
        exp_rep.resize(q - 1);
        exp_idx.resize(q - 1);
        log_tbl.assign(q, 0);
        Elem cur = F.one();
        bool packed_ok = F.rep() != ff::Rep::Bytes;
        for (uint64_t j = 0; j < q - 1; ++j) {
            if (packed_ok) exp_rep[j] = {static_cast<uint32_t>(cur.a), static_cast<uint32_t>(cur.b)};
            uint64_t idx = F.to_index(cur);
            exp_idx[j] = static_cast<uint32_t>(idx);
            log_tbl[idx] = static_cast<uint32_t>(j);
            cur = F.mul(cur, g);
        }
        if (F.p() != 2) {
            fiber.resize(q);
            for (uint64_t i = 0; i < q; ++i)
                fiber[i] = static_cast<uint8_t>(F.quadratic_solution_count(F.zero(), F.from_index(i)));
            if (F.p() == 3) {
                l0.assign(uint64_t(1) << F.n(), 0);
                std::vector<uint32_t> pow3(F.n());
                uint32_t pw = 1;
                for (int i = 0; i < F.n(); ++i) {
                    pow3[i] = pw;
                    pw *= 3;
                }
                for (uint64_t m = 1; m < l0.size(); ++m)
                    l0[m] = l0[m & (m - 1)] + pow3[__builtin_ctzll(m)];
            }
        }
    }
};

inline void trit_add32(uint32_t& a0, uint32_t& a1, uint32_t b0, uint32_t b1) {
    uint32_t t = (a0 | b1) ^ (a1 | b0);
    uint32_t r0 = t ^ (a1 | b1);
    uint32_t r1 = t ^ (a0 | b0);
    a0 = r0;
    a1 = r1;
}

/// Rows y in [y_lo, y_hi) of the x = 1 patch, characteristic 3 surface
/// w^2 = -beta(1, y, z): Zech-style inner loop in generator-power order with
/// per-term exponent counters.
int64_t rows_char3(const Engine& E, const PatchTerms& beta, uint64_t y_lo, uint64_t y_hi) {
    const Field& F = E.F;
    const uint64_t qm1 = E.q - 1;
    int64_t total = 0;
    struct Active {
        uint32_t e, step;
    };
    for (uint64_t y = y_lo; y < y_hi; ++y) {
        Elem A[7];
        for (int k = 0; k <= beta.maxz; ++k) A[k] = row_coefficient(F, beta.groups[k], y);
        total += E.fiber[F.to_index(A[0])];  // z = 0
        Active act[6];
        int na = 0;
        for (int k = 1; k <= beta.maxz; ++k)
            if (!A[k].is_zero())
                act[na++] = {E.log_tbl[F.to_index(A[k])], static_cast<uint32_t>(uint64_t(k) % qm1)};
        if (na == 0) {
            total += int64_t(qm1) * E.fiber[F.to_index(A[0])];
            continue;
        }
        const uint32_t base_lo = static_cast<uint32_t>(A[0].a);
        const uint32_t base_hi = static_cast<uint32_t>(A[0].b);
        const auto* exp = E.exp_rep.data();
        const auto* l0 = E.l0.data();
        const auto* fib = E.fiber.data();
        int64_t sub = 0;
        for (uint64_t j = 0; j < qm1; ++j) {
            uint32_t a0 = base_lo, a1 = base_hi;
            for (int t = 0; t < na; ++t) {
                auto& ac = act[t];
                auto pr = exp[ac.e];
                trit_add32(a0, a1, pr.lo, pr.hi);
                ac.e += ac.step;
                if (ac.e >= qm1) ac.e -= qm1;
            }
            sub += fib[uint64_t(l0[a0]) + 2 * uint64_t(l0[a1])];
        }
        total += sub;
    }
    return total;
}

/// Same rows for characteristic 2: w^2 + alpha w + beta with the monomial
/// products from the power tables, summed unreduced, one reduction per value.
int64_t rows_char2(const Engine& E, const PatchTerms& alpha, const PatchTerms& beta, uint64_t y_lo,
                   uint64_t y_hi) {
    const Field& F = E.F;
    const uint64_t qm1 = E.q - 1;
    int64_t total = 0;
    for (uint64_t y = y_lo; y < y_hi; ++y) {
        Elem Aa[4], Ab[7];
        for (int k = 0; k <= alpha.maxz; ++k) Aa[k] = row_coefficient(F, alpha.groups[k], y);
        for (int k = 0; k <= beta.maxz; ++k) Ab[k] = row_coefficient(F, beta.groups[k], y);
        auto fiber2 = [&](Elem a, Elem b) -> int64_t {
            if (a.is_zero()) return 1;
            if (b.is_zero()) return 2;
            Elem quot = F.reduce(F.mul_unreduced(b, F.table_inv_sq(a.a)));
            return F.table_trace(quot.a) == 0 ? 2 : 0;
        };
        total += fiber2(Aa[0], Ab[0]);  // z = 0
        for (uint64_t j = 0; j < qm1; ++j) {
            uint64_t zi = E.exp_idx[j];
            Elem va{}, vb{};
            for (int k = 0; k <= alpha.maxz; ++k) {
                if (Aa[k].is_zero()) continue;
                va = F.add_unreduced(va, F.mul_unreduced(Aa[k], F.table_pow(zi, k)));
            }
            for (int k = 0; k <= beta.maxz; ++k) {
                if (Ab[k].is_zero()) continue;
                vb = F.add_unreduced(vb, F.mul_unreduced(Ab[k], F.table_pow(zi, k)));
            }
            total += fiber2(F.reduce(va), F.reduce(vb));
        }
    }
    return total;
}

/// Generic small-odd-p rows (no packed planes); plain field arithmetic.
int64_t rows_generic(const Engine& E, const PatchTerms& beta, uint64_t y_lo, uint64_t y_hi) {
    const Field& F = E.F;
    int64_t total = 0;
    for (uint64_t y = y_lo; y < y_hi; ++y) {
        Elem A[7];
        for (int k = 0; k <= beta.maxz; ++k) A[k] = row_coefficient(F, beta.groups[k], y);
        for (uint64_t zi = 0; zi < E.q; ++zi) {
            Elem v = A[0];
            for (int k = 1; k <= beta.maxz; ++k) {
                if (A[k].is_zero()) continue;
                v = F.add(v, F.mul(A[k], F.table_pow(zi, k)));
            }
            total += E.fiber[F.to_index(v)];
        }
    }
    return total;
}

/// Exact evaluation of an F_p polynomial at an extension-field point.
Elem eval_at(const Field& F, const MultiPoly<Fp>& f, Elem x, Elem y, Elem z) {
    if (f.is_zero_poly()) return F.zero();
    std::array<ff::Fq, 3> pt{ff::Fq(F, x), ff::Fq(F, y), ff::Fq(F, z)};
    auto inject = [&](const Fp& c) { return ff::Fq(F, F.from_residue(c.v)); };
    return f.eval<ff::Fq>(std::span<const ff::Fq>(pt.data(), 3), inject).v;
}

/// f(x0, y0, z) for all z by element index (the two low-dimensional patches).
int64_t patch_line(const Field& F, const MultiPoly<Fp>& alpha, const MultiPoly<Fp>& beta, Elem x0,
                   Elem y0) {
    int64_t total = 0;
    for (uint64_t zi = 0; zi < F.q(); ++zi) {
        Elem z = F.from_index(zi);
        total += F.quadratic_solution_count(eval_at(F, alpha, x0, y0, z), eval_at(F, beta, x0, y0, z));
    }
    return total;
}

}  // namespace

int64_t count_points(const K3Surface<Fp>& s, int n, const CountOptions& opt) {
    if (n < 1) throw std::invalid_argument("count_points: n >= 1 required");
    int p = 0;
    for (auto* f : {&s.alpha, &s.beta})
        if (!f->is_zero_poly()) p = f->leading().second.p;
    if (p == 0) throw std::invalid_argument("count_points: zero surface");
    if (p != 2 && !s.alpha.is_zero_poly())
        throw std::invalid_argument("count_points: alpha must vanish away from characteristic 2");

    Field F(p, n);
    uint64_t q = F.q();
    if (opt.point_cap && q * q + q + 1 > opt.point_cap)
        throw BudgetExceeded("count_points: point budget exceeded for n=" + std::to_string(n));
    F.build_counting_tables();
    Engine E(F);

    PatchTerms beta1 = restrict_patch1(s.beta);
    PatchTerms alpha1 = restrict_patch1(s.alpha);

    int workers = std::max(1, opt.workers);
    std::vector<std::pair<uint64_t, uint64_t>> ranges;
    uint64_t chunk = (q + workers - 1) / workers;
    for (uint64_t lo = 0; lo < q; lo += chunk) ranges.emplace_back(lo, std::min(q, lo + chunk));

    std::vector<int64_t> partial(ranges.size(), 0);
    auto run_range = [&](size_t r) {
        auto [lo, hi] = ranges[r];
        if (p == 2)
            partial[r] = rows_char2(E, alpha1, beta1, lo, hi);
        else if (p == 3)
            partial[r] = rows_char3(E, beta1, lo, hi);
        else
            partial[r] = rows_generic(E, beta1, lo, hi);
    };
    if (ranges.size() == 1) {
        run_range(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t r = 0; r < ranges.size(); ++r) pool.emplace_back(run_range, r);
        for (auto& t : pool) t.join();
    }
    int64_t total = 0;
    for (int64_t v : partial) total += v;

    // patches (0 : 1 : z) and (0 : 0 : 1)
    total += patch_line(F, s.alpha, s.beta, F.zero(), F.one());
    total += F.quadratic_solution_count(eval_at(F, s.alpha, F.zero(), F.zero(), F.one()),
                                        eval_at(F, s.beta, F.zero(), F.zero(), F.one()));
    return total;
}

std::vector<int64_t> traces_from_counts(const CountSeries& cs, int upto) {
    std::vector<int64_t> t;
    for (int n = 1; n <= upto; ++n) {
        auto it = cs.counts.find(n);
        if (it == cs.counts.end())
            throw std::invalid_argument("traces_from_counts: missing N_" + std::to_string(n));
        int64_t p2n = 1;
        for (int i = 0; i < 2 * n; ++i) p2n *= cs.p;
        t.push_back(it->second - p2n - 1);
    }
    return t;
}

std::vector<int64_t> newton_coefficients(std::span<const int64_t> traces) {
    if (traces.size() > 22) throw std::invalid_argument("newton_coefficients: at most 22 traces");
    std::vector<int64_t> c;
    for (size_t k = 1; k <= traces.size(); ++k) {
        __int128 acc = traces[k - 1];
        for (size_t i = 1; i < k; ++i) acc += static_cast<__int128>(c[i - 1]) * traces[k - i - 1];
        if (acc % static_cast<__int128>(k) != 0)
            throw InconsistentCounts("newton_coefficients: c_" + std::to_string(k) +
                                     " is not integral; counts are inconsistent");
        __int128 ck = -(acc / static_cast<__int128>(k));
        if (ck > INT64_MAX || ck < INT64_MIN)
            throw InconsistentCounts("newton_coefficients: coefficient overflow");
        c.push_back(static_cast<int64_t>(ck));
    }
    return c;
}

WeilPolynomial complete_charpoly(std::span<const int64_t> c, int p) {
    if (c.size() != 12) throw std::invalid_argument("complete_charpoly: need c_1..c_12");
    WeilPolynomial w;
    w.p = p;
    w.c[0] = 1;
    for (int k = 1; k <= 12; ++k) w.c[k] = c[k - 1];
    if (w.c[11] != 0) {
        w.sign = +1;
    } else if (w.c[10] != 0) {
        int64_t denom = int64_t(p) * p * w.c[10];
        if (w.c[12] % denom != 0)
            throw InconsistentCounts("complete_charpoly: functional equation rejects c_12");
        int64_t eps = w.c[12] / denom;
        if (eps != 1 && eps != -1)
            throw InconsistentCounts("complete_charpoly: sign is not +-1");
        w.sign = static_cast<int>(eps);
    } else {
        throw InconsistentCounts("complete_charpoly: c_11 = c_10 = 0, sign ambiguous; need more counts");
    }
    for (int j = 0; j <= 9; ++j) {
        __int128 pw = 1;
        for (int i = 0; i < 22 - 2 * j; ++i) pw *= p;
        __int128 val = static_cast<__int128>(w.sign) * pw * w.c[j];
        if (val > INT64_MAX || val < INT64_MIN) throw InconsistentCounts("complete_charpoly: overflow");
        w.c[22 - j] = static_cast<int64_t>(val);
    }
    // consistency of the middle coefficients
    if (w.c[11] != w.sign * w.c[11])
        throw InconsistentCounts("complete_charpoly: c_11 breaks the functional equation");
    int64_t denom = int64_t(p) * p * w.c[10];
    if (w.c[10] != 0 && w.c[12] != w.sign * denom)
        throw InconsistentCounts("complete_charpoly: c_12 breaks the functional equation");
    return w;
}

namespace {
int euler_phi(int m) {
    int r = m;
    for (int d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            r -= r / d;
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) r -= r / m;
    return r;
}
}  // namespace

PicardBound picard_upper_bound(const WeilPolynomial& w) {
    using mpoly::UniPoly;
    // f~(t) = p^-22 f(pt): coefficient of t^(22-k) is c_k / p^k
    std::vector<Rat> co(23);
    Rat pk(1);
    for (int k = 0; k <= 22; ++k) {
        co[22 - k] = Rat(w.c[k]) / pk;
        pk *= w.p;
    }
    UniPoly<Rat> ft{std::move(co)};
    int raw = 0;
    for (int m = 1; m <= 66; ++m) {
        if (euler_phi(m) > 22) continue;
        UniPoly<Rat> phi = mpoly::cyclotomic(m).map_coeffs<Rat>([](const Int& c) { return Rat(c); });
        for (;;) {
            auto [qt, rm] = UniPoly<Rat>::divrem(ft, phi);
            if (!rm.is_zero_poly() || qt.is_zero_poly()) break;
            ft = std::move(qt);
            raw += euler_phi(m);
        }
    }
    return {raw, raw % 2 == 0 ? raw : raw - 1};
}

void bulk_eval_row(const Field& F, const MultiPoly<Fp>& f, Elem x0, Elem y, std::span<Elem> out) {
    if (static_cast<uint64_t>(out.size()) != F.q())
        throw std::invalid_argument("bulk_eval_row: output span must have q entries");
    if (!F.has_counting_tables())
        throw std::invalid_argument("bulk_eval_row: field tables not built");
    // split terms by z-exponent; assemble the y-row coefficients from the
    // power tables (x0 and y are fixed along the row)
    uint64_t yi = F.to_index(y), xi = F.to_index(x0);
    std::array<Elem, 7> A;
    A.fill(F.zero());
    int maxz = 0;
    for (auto& [m, c] : f.terms()) {
        Elem v = F.mul(F.table_pow(xi, m.e[0]), F.table_pow(yi, m.e[1]));
        for (int i = 0; i < c.v; ++i) A[m.e[2]] = F.add(A[m.e[2]], v);
        maxz = std::max<int>(maxz, m.e[2]);
    }
    bool planes = F.rep() != ff::Rep::Bytes;
    for (uint64_t zi = 0; zi < F.q(); ++zi) {
        Elem acc = A[0];
        for (int k = 1; k <= maxz; ++k) {
            if (A[k].is_zero()) continue;
            Elem zp = F.table_pow(zi, k);
            acc = planes ? F.add_unreduced(acc, F.mul_unreduced(A[k], zp)) : F.add(acc, F.mul(A[k], zp));
        }
        out[zi] = planes ? F.reduce(acc) : acc;
    }
}

}  // namespace k3::counting
