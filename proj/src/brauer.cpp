#include "k3/brauer.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace k3::brauer {

namespace {

/// valuation and unit part of a nonzero rational at p.
std::pair<long, Rat> val_unit(const Rat& x, const Int& p) {
    long v = 0;
    Int num = x.get_num(), den = x.get_den();
    while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
        num = div_exact(num, p);
        ++v;
    }
    while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
        den = div_exact(den, p);
        --v;
    }
    Rat u(num);
    u /= Rat(den);
    return {v, u};
}

/// Legendre symbol of a p-adic unit written num/den, odd p.
int legendre_unit(const Rat& u, const Int& p) {
    int a = mpz_legendre(u.get_num().get_mpz_t(), p.get_mpz_t());
    int b = mpz_legendre(u.get_den().get_mpz_t(), p.get_mpz_t());
    return a * b;
}

/// Odd unit mod 8 for a 2-adic unit num/den.
long mod8(const Rat& u) {
    long num = mpz_fdiv_ui(u.get_num().get_mpz_t(), 8);
    long den = mpz_fdiv_ui(u.get_den().get_mpz_t(), 8);
    // inverses of odd residues mod 8 are themselves
    return (num * den) % 8;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const Place& v) {
    if (is_zero(a) || is_zero(b)) throw std::invalid_argument("hilbert_symbol: zero argument");
    if (v.real) return (sgn(a) < 0 && sgn(b) < 0) ? 1 : 0;
    const Int& p = v.p;
    auto [al, u] = val_unit(a, p);
    auto [be, w] = val_unit(b, p);
    if (p != 2) {
        long eps_p = mpz_fdiv_ui(p.get_mpz_t(), 4) == 3 ? 1 : 0;  // (p-1)/2 mod 2
        int sign = 1;
        if ((al & 1) && (be & 1) && eps_p) sign = -sign;
        if ((be & 1) && legendre_unit(u, p) == -1) sign = -sign;
        if ((al & 1) && legendre_unit(w, p) == -1) sign = -sign;
        return sign == -1 ? 1 : 0;
    }
    long uu = mod8(u), ww = mod8(w);
    long eps_u = ((uu - 1) / 2) & 1, eps_w = ((ww - 1) / 2) & 1;
    long om_u = ((uu * uu - 1) / 8) & 1, om_w = ((ww * ww - 1) / 8) & 1;
    long e = eps_u * eps_w + (al & 1) * om_w + (be & 1) * om_u;
    return (e & 1) ? 1 : 0;
}

std::vector<Int> relevant_primes(const Rat& a, const Rat& b) {
    std::vector<Int> primes{Int(2)};
    auto add_factors = [&](Int big) {
        big = abs(big);
        if (!big.fits_ulong_p()) {
            // values in this artifact stay far below 2^64; factor generically
            for (Int d(3); d * d <= big; d += 2)
                while (mpz_divisible_p(big.get_mpz_t(), d.get_mpz_t())) {
                    primes.push_back(d);
                    big = div_exact(big, d);
                }
            while (mpz_even_p(big.get_mpz_t())) big = div_exact(big, Int(2));
            if (big > 1) primes.push_back(big);
            return;
        }
        unsigned long n = big.get_ui();
        while (n % 2 == 0) n /= 2;
        for (unsigned long d = 3; d * d <= n; d += 2)
            if (n % d == 0) {
                primes.emplace_back(d);
                while (n % d == 0) n /= d;
            }
        if (n > 1) primes.emplace_back(n);
    };
    for (const Rat* x : {&a, &b}) {
        add_factors(x->get_num());
        add_factors(x->get_den());
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

std::map<std::string, int> all_invariants(const Rat& a, const Rat& b) {
    std::map<std::string, int> inv;
    for (const Int& p : relevant_primes(a, b)) inv[p.get_str()] = hilbert_symbol(a, b, Place::finite(p));
    inv["real"] = hilbert_symbol(a, b, Place::infinite());
    return inv;
}

std::string SurfacePoint::str() const {
    std::ostringstream os;
    os << "[" << x.get_str() << ":" << y.get_str() << ":" << z.get_str() << ":";
    if (place.real)
        os << "sqrt(" << f_value.get_str() << ")";
    else
        os << w.get_str();
    os << "]";
    return os.str();
}

std::pair<Rat, Rat> evaluate_algebra(const QuaternionAlgebra& A, const SurfacePoint& P) {
    std::array<Int, 3> pt{P.x, P.y, P.z};
    std::span<const Int> sp(pt.data(), 3);
    try {
        return {A.alpha.eval(sp), A.beta.eval(sp)};
    } catch (const std::domain_error&) {
        throw RepresentativeUndefined("representative undefined at point " + P.str());
    }
}

int local_invariant(const QuaternionAlgebra& A, const SurfacePoint& P) {
    auto [a, b] = evaluate_algebra(A, P);
    if (is_zero(a) || is_zero(b))
        throw RepresentativeUndefined("representative degenerate at point " + P.str());
    return hilbert_symbol(a, b, P.place);
}

std::vector<SurfacePoint> search_rational_points(const geometry::K3Surface<Int>& s, long H) {
    if (!s.alpha.is_zero_poly())
        throw std::invalid_argument("search_rational_points: surface must have the w^2 = F form");
    mpoly::MultiPoly<Int> F = s.branch_sextic();
    std::vector<SurfacePoint> out;
    auto consider = [&](long x, long y, long z) {
        Int g = gcd(gcd(Int(x), Int(y)), Int(z));
        if (g != 1) return;
        std::array<Int, 3> pt{Int(x), Int(y), Int(z)};
        Int val = F.eval(std::span<const Int>(pt.data(), 3));
        if (sgn(val) < 0 || mpz_perfect_square_p(val.get_mpz_t()) == 0) return;
        SurfacePoint P;
        P.place = Place::finite(Int(0));  // adelic rational point; place chosen by callers
        P.x = pt[0];
        P.y = pt[1];
        P.z = pt[2];
        P.f_value = Rat(val);
        Int w = sqrt(val);
        P.w = Rat(w);
        P.both_signs = sgn(w) != 0;
        out.push_back(std::move(P));
    };
    // canonical projective representatives: first nonzero coordinate positive
    for (long x = 1; x <= H; ++x)
        for (long y = -H; y <= H; ++y)
            for (long z = -H; z <= H; ++z) consider(x, y, z);
    for (long y = 1; y <= H; ++y)
        for (long z = -H; z <= H; ++z) consider(0, y, z);
    if (H >= 1) consider(0, 0, 1);
    std::sort(out.begin(), out.end(), [](const SurfacePoint& a, const SurfacePoint& b) {
        return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
    });
    return out;
}

VerdictRecord obstruction_verdict(const QuaternionAlgebra& A, const SurfacePoint& rational_point,
                                  const SurfacePoint& real_point) {
    VerdictRecord rec;
    rec.rational_point = rational_point;
    rec.real_point = real_point;

    auto [a1, b1] = evaluate_algebra(A, rational_point);
    if (is_zero(a1) || is_zero(b1))
        throw RepresentativeUndefined("representative degenerate at the rational point");
    rec.rational_invariants = all_invariants(a1, b1);
    int total = 0;
    for (auto& [k, v] : rec.rational_invariants) total = (total + v) & 1;
    rec.rational_sum = total;
    if (total != 0)
        throw std::logic_error("obstruction_verdict: reciprocity violated (implementation bug)");
    rec.inv_infinity_rational = rec.rational_invariants.at("real");

    auto [a2, b2] = evaluate_algebra(A, real_point);
    if (is_zero(a2) || is_zero(b2))
        throw RepresentativeUndefined("representative degenerate at the real point");
    rec.inv_infinity_real = hilbert_symbol(a2, b2, Place::infinite());

    int finite_sum = (rec.rational_sum + rec.inv_infinity_rational) & 1;  // -x = x in (1/2)Z/Z
    rec.hybrid_sum = (finite_sum + rec.inv_infinity_real) & 1;
    rec.verdict = rec.hybrid_sum ? Verdict::Obstructed : Verdict::NotObstructed;
    return rec;
}

}  // namespace k3::brauer
