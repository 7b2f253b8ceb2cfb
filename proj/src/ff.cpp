#include "k3/ff.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace k3::ff {

namespace {

using mpoly::UniPoly;

bool is_prime_small(int p) {
    if (p < 2) return false;
    for (int d = 2; int64_t(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

UniPoly<Fp> poly_x(int p) { return UniPoly<Fp>({Fp(0, p), Fp(1, p)}); }

UniPoly<Fp> mulmod(const UniPoly<Fp>& a, const UniPoly<Fp>& b, const UniPoly<Fp>& f) {
    return UniPoly<Fp>::divrem(a * b, f).second;
}

UniPoly<Fp> powmod(UniPoly<Fp> base, uint64_t e, const UniPoly<Fp>& f) {
    UniPoly<Fp> r = UniPoly<Fp>::constant(Fp(1, base.is_zero_poly() ? 2 : base.lead().p));
    base = UniPoly<Fp>::divrem(base, f).second;
    while (e) {
        if (e & 1) r = mulmod(r, base, f);
        base = mulmod(base, base, f);
        e >>= 1;
    }
    return r;
}

/// gcd(x^{p^k} - x, f) = 1 for k <= n/2 and x^{p^n} = x mod f.
bool is_irreducible(const UniPoly<Fp>& f, int p, int n) {
    if (n == 1) return true;
    UniPoly<Fp> x = poly_x(p);
    UniPoly<Fp> r = x;
    for (int k = 1; k <= n; ++k) {
        r = powmod(r, p, f);  // r = x^(p^k) mod f
        if (k <= n / 2) {
            if (mpoly::uni_gcd(r - x, f).degree() != 0) return false;
        }
    }
    return r == UniPoly<Fp>::divrem(x, f).second;
}

}  // namespace

Field::Field(int p, int n) : p_(p), n_(n) {
    if (!is_prime_small(p)) throw std::invalid_argument("ext_field_create: p not prime");
    if (n < 1 || n > 16) throw std::invalid_argument("ext_field_create: need 1 <= n <= 16");
    // candidates by number of nonzero terms, then lex by coefficient vector
    for (int k = 0; k <= n && mod_low_.empty(); ++k) {
        std::vector<std::vector<uint8_t>> cands;
        std::vector<int> pos(k);
        std::function<void(int, int)> rec = [&](int start, int left) {
            if (left == 0) {
                std::vector<uint8_t> v(n, 0);
                std::vector<int> val(k, 1);
                for (;;) {
                    for (int i = 0; i < k; ++i) v[pos[i]] = static_cast<uint8_t>(val[i]);
                    cands.push_back(v);
                    int i = k - 1;
                    while (i >= 0 && val[i] == p - 1) val[i--] = 1;
                    if (i < 0) break;
                    ++val[i];
                }
                return;
            }
            for (int s = start; s < n; ++s) {
                pos[k - left] = s;
                rec(s + 1, left - 1);
            }
        };
        rec(0, k);
        std::sort(cands.begin(), cands.end());
        for (auto& v : cands) {
            std::vector<Fp> cf;
            for (int i = 0; i < n; ++i) cf.emplace_back(v[i], p);
            cf.emplace_back(1, p);
            if (is_irreducible(UniPoly<Fp>(std::move(cf)), p, n)) {
                mod_low_ = v;
                break;
            }
        }
    }
    if (mod_low_.empty()) throw std::logic_error("ext_field_create: no irreducible found (search-policy bug)");
    init();
}

Field::Field(int p, int n, std::vector<uint8_t> modulus_low) : p_(p), n_(n), mod_low_(std::move(modulus_low)) {
    if (!is_prime_small(p)) throw std::invalid_argument("Field: p not prime");
    if (n < 1 || n > 16 || static_cast<int>(mod_low_.size()) != n)
        throw std::invalid_argument("Field: bad modulus length");
    std::vector<Fp> cf;
    for (int i = 0; i < n; ++i) cf.emplace_back(mod_low_[i], p);
    cf.emplace_back(1, p);
    if (!is_irreducible(UniPoly<Fp>(std::move(cf)), p, n))
        throw std::invalid_argument("Field: modulus not irreducible");
    init();
}

void Field::init() {
    q_ = 1;
    for (int i = 0; i < n_; ++i) q_ *= static_cast<uint64_t>(p_);
    rep_ = (p_ == 2) ? Rep::Bits2 : (p_ == 3) ? Rep::Planes3 : Rep::Bytes;
    mod_terms_.clear();
    for (int i = 0; i < n_; ++i)
        if (mod_low_[i]) mod_terms_.emplace_back(i, mod_low_[i]);
}

std::string Field::modulus_string() const {
    std::ostringstream os;
    os << "x^" << n_;
    for (int i = n_ - 1; i >= 0; --i) {
        if (!mod_low_[i]) continue;
        os << " + ";
        if (mod_low_[i] > 1 || i == 0) os << int(mod_low_[i]);
        if (mod_low_[i] > 1 && i > 0) os << "*";
        if (i > 1)
            os << "x^" << i;
        else if (i == 1)
            os << "x";
    }
    return os.str();
}

Elem Field::from_residue(long c) const {
    long r = c % p_;
    if (r < 0) r += p_;
    switch (rep_) {
        case Rep::Bits2:
            return {static_cast<uint64_t>(r), 0};
        case Rep::Planes3:
            return {static_cast<uint64_t>(r == 1), static_cast<uint64_t>(r == 2)};
        case Rep::Bytes:
            return {static_cast<uint64_t>(r), 0};
    }
    return {};
}

Elem Field::from_coeffs(std::span<const int> coeffs) const {
    Elem e;
    for (size_t i = 0; i < coeffs.size() && i < static_cast<size_t>(n_); ++i) {
        int c = coeffs[i] % p_;
        if (c < 0) c += p_;
        if (!c) continue;
        switch (rep_) {
            case Rep::Bits2:
                e.a |= uint64_t(1) << i;
                break;
            case Rep::Planes3:
                if (c == 1)
                    e.a |= uint64_t(1) << i;
                else
                    e.b |= uint64_t(1) << i;
                break;
            case Rep::Bytes:
                if (i < 8)
                    e.a |= uint64_t(c) << (8 * i);
                else
                    e.b |= uint64_t(c) << (8 * (i - 8));
                break;
        }
    }
    return e;
}

std::vector<int> Field::coeffs(Elem g) const {
    std::vector<int> out(n_, 0);
    for (int i = 0; i < n_; ++i) {
        switch (rep_) {
            case Rep::Bits2:
                out[i] = (g.a >> i) & 1;
                break;
            case Rep::Planes3:
                out[i] = int((g.a >> i) & 1) + 2 * int((g.b >> i) & 1);
                break;
            case Rep::Bytes:
                out[i] = int((i < 8 ? (g.a >> (8 * i)) : (g.b >> (8 * (i - 8)))) & 0xFF);
                break;
        }
    }
    return out;
}

uint64_t Field::to_index(Elem g) const {
    if (rep_ == Rep::Bits2) return g.a;
    uint64_t idx = 0, pw = 1;
    auto cs = coeffs(g);
    for (int i = 0; i < n_; ++i) {
        idx += pw * static_cast<uint64_t>(cs[i]);
        pw *= static_cast<uint64_t>(p_);
    }
    return idx;
}

Elem Field::from_index(uint64_t i) const {
    if (rep_ == Rep::Bits2) return {i, 0};
    std::vector<int> cs(n_);
    for (int k = 0; k < n_; ++k) {
        cs[k] = static_cast<int>(i % p_);
        i /= p_;
    }
    return from_coeffs(cs);
}

namespace {
// bit-plane add mod 3: each position holds a trit (lo, hi)
inline void trit_add(uint64_t& a0, uint64_t& a1, uint64_t b0, uint64_t b1) {
    uint64_t t = (a0 | b1) ^ (a1 | b0);
    uint64_t r0 = t ^ (a1 | b1);
    uint64_t r1 = t ^ (a0 | b0);
    a0 = r0;
    a1 = r1;
}
}  // namespace

Elem Field::add_raw(Elem x, Elem y) const {
    switch (rep_) {
        case Rep::Bits2:
            return {x.a ^ y.a, 0};
        case Rep::Planes3: {
            trit_add(x.a, x.b, y.a, y.b);
            return x;
        }
        case Rep::Bytes: {
            Elem r;
            for (int i = 0; i < n_; ++i) {
                int xa = int((i < 8 ? (x.a >> (8 * i)) : (x.b >> (8 * (i - 8)))) & 0xFF);
                int ya = int((i < 8 ? (y.a >> (8 * i)) : (y.b >> (8 * (i - 8)))) & 0xFF);
                int s = xa + ya;
                if (s >= p_) s -= p_;
                if (i < 8)
                    r.a |= uint64_t(s) << (8 * i);
                else
                    r.b |= uint64_t(s) << (8 * (i - 8));
            }
            return r;
        }
    }
    return {};
}

Elem Field::add(Elem x, Elem y) const { return add_raw(x, y); }

Elem Field::neg(Elem x) const {
    switch (rep_) {
        case Rep::Bits2:
            return x;
        case Rep::Planes3:
            return {x.b, x.a};
        case Rep::Bytes: {
            Elem r;
            for (int i = 0; i < n_; ++i) {
                int xa = int((i < 8 ? (x.a >> (8 * i)) : (x.b >> (8 * (i - 8)))) & 0xFF);
                int s = xa ? p_ - xa : 0;
                if (i < 8)
                    r.a |= uint64_t(s) << (8 * i);
                else
                    r.b |= uint64_t(s) << (8 * (i - 8));
            }
            return r;
        }
    }
    return {};
}

Elem Field::sub(Elem x, Elem y) const { return add_raw(x, neg(y)); }

Elem Field::mul_unreduced(Elem x, Elem y) const {
    switch (rep_) {
        case Rep::Bits2: {
            uint64_t r = 0;
            uint64_t xa = x.a;
            while (xa) {
                int i = __builtin_ctzll(xa);
                xa &= xa - 1;
                r ^= y.a << i;
            }
            return {r, 0};
        }
        case Rep::Planes3: {
            uint64_t r0 = 0, r1 = 0;
            for (int i = 0; i < n_; ++i) {
                uint64_t m1 = -uint64_t((x.a >> i) & 1);
                uint64_t m2 = -uint64_t((x.b >> i) & 1);
                // x_i * y is y (trit 1) or -y (trit 2), shifted by i
                uint64_t b0 = ((y.a & m1) | (y.b & m2)) << i;
                uint64_t b1 = ((y.b & m1) | (y.a & m2)) << i;
                trit_add(r0, r1, b0, b1);
            }
            return {r0, r1};
        }
        case Rep::Bytes:
            return mul(x, y);  // no unreduced form for the generic rep
    }
    return {};
}

Elem Field::reduce(Elem wide) const {
    switch (rep_) {
        case Rep::Bits2: {
            uint64_t r = wide.a;
            uint64_t modmask = 0;
            for (auto& [d, c] : mod_terms_) modmask |= uint64_t(1) << d;
            for (int d = 2 * n_ - 2; d >= n_; --d)
                if ((r >> d) & 1) r ^= (modmask << (d - n_)) | (uint64_t(1) << d);
            return {r, 0};
        }
        case Rep::Planes3: {
            uint64_t r0 = wide.a, r1 = wide.b;
            // x^n = -g; trit c at degree d adds c * (-g) << (d-n)
            uint64_t g0 = 0, g1 = 0;
            for (auto& [d, c] : mod_terms_) {
                if (c == 1)
                    g0 |= uint64_t(1) << d;
                else
                    g1 |= uint64_t(1) << d;
            }
            uint64_t ng0 = g1, ng1 = g0;  // -g
            for (int d = 2 * n_ - 2; d >= n_; --d) {
                uint64_t c1 = (r0 >> d) & 1, c2 = (r1 >> d) & 1;
                if (!(c1 | c2)) continue;
                r0 &= ~(uint64_t(1) << d);
                r1 &= ~(uint64_t(1) << d);
                uint64_t m1 = -c1, m2 = -c2;
                uint64_t b0 = ((ng0 & m1) | (ng1 & m2)) << (d - n_);
                uint64_t b1 = ((ng1 & m1) | (ng0 & m2)) << (d - n_);
                trit_add(r0, r1, b0, b1);
            }
            return {r0, r1};
        }
        case Rep::Bytes:
            return wide;
    }
    return {};
}

Elem Field::mul(Elem x, Elem y) const {
    if (rep_ == Rep::Bytes) {
        int buf[31] = {0};
        auto xc = coeffs(x), yc = coeffs(y);
        for (int i = 0; i < n_; ++i) {
            if (!xc[i]) continue;
            for (int j = 0; j < n_; ++j) buf[i + j] = (buf[i + j] + xc[i] * yc[j]) % p_;
        }
        for (int d = 2 * n_ - 2; d >= n_; --d) {
            int c = buf[d];
            if (!c) continue;
            buf[d] = 0;
            for (auto& [k, m] : mod_terms_) buf[d - n_ + k] = ((buf[d - n_ + k] - c * m) % p_ + p_) % p_;
        }
        std::vector<int> out(buf, buf + n_);
        return from_coeffs(out);
    }
    return reduce(mul_unreduced(x, y));
}

Elem Field::pow(Elem g, uint64_t k) const {
    Elem r = one();
    while (k) {
        if (k & 1) r = mul(r, g);
        g = mul(g, g);
        k >>= 1;
    }
    return r;
}

Elem Field::inverse(Elem g) const {
    if (g.is_zero()) throw std::domain_error("ff: inverse of zero");
    return pow(g, q_ - 2);
}

int Field::trace_to_prime_field(Elem g) const {
    Elem s = g, t = g;
    for (int i = 1; i < n_; ++i) {
        t = pow(t, p_);
        s = add(s, t);
    }
    auto cs = coeffs(s);
    for (int i = 1; i < n_; ++i) assert(cs[i] == 0);
    return cs[0];
}

bool Field::is_square(Elem g) const {
    if (p_ == 2) throw std::domain_error("is_square: use quadratic_solution_count in characteristic 2");
    if (g.is_zero()) return true;
    if (!sq_bits_.empty()) return sq_bits_[to_index(g)] != 0;
    if (q_ <= kTableLimit) {
        // square-table threshold policy: build lazily once, then look up
        const_cast<Field*>(this)->build_square_bits();
        return sq_bits_[to_index(g)] != 0;
    }
    return pow(g, (q_ - 1) / 2) == one();
}

void Field::build_square_bits() {
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    if (!sq_bits_.empty()) return;
    std::vector<uint8_t> bits(q_, 0);
    for (uint64_t i = 0; i < q_; ++i) {
        Elem g = from_index(i);
        bits[to_index(mul(g, g))] = 1;
    }
    sq_bits_ = std::move(bits);
}

int Field::quadratic_solution_count(Elem a, Elem b) const {
    if (p_ == 2) {
        if (a.is_zero()) return 1;  // w -> w^2 is bijective
        if (b.is_zero()) return 2;  // w(w + a)
        Elem quot = mul(b, pow(mul(a, a), q_ - 2));
        return trace_to_prime_field(quot) == 0 ? 2 : 0;
    }
    // 1 + chi(a^2 - 4b), chi(0) = 0
    Elem d = sub(mul(a, a), mul(from_residue(4), b));
    if (d.is_zero()) return 1;
    return is_square(d) ? 2 : 0;
}

Elem Field::multiplicative_generator() const {
    uint64_t m = q_ - 1;
    std::vector<uint64_t> primes;
    uint64_t mm = m;
    for (uint64_t d = 2; d * d <= mm; ++d) {
        if (mm % d == 0) {
            primes.push_back(d);
            while (mm % d == 0) mm /= d;
        }
    }
    if (mm > 1) primes.push_back(mm);
    for (uint64_t i = 1; i < q_; ++i) {
        Elem g = from_index(i);
        bool ok = true;
        for (uint64_t ell : primes)
            if (pow(g, m / ell) == one()) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("ff: no generator found");
}

void Field::build_counting_tables() {
    if (has_counting_tables()) return;
    if (q_ > kTableLimit) throw std::invalid_argument("ff: field too large for counting tables");
    pow_k_.assign(q_ * 5, Elem{});
    if (p_ != 2) sq_bits_.assign(q_, 0);
    for (uint64_t i = 0; i < q_; ++i) {
        Elem g = from_index(i);
        Elem gk = g;
        for (int k = 2; k <= 6; ++k) {
            gk = mul(gk, g);
            pow_k_[i * 5 + (k - 2)] = gk;
            if (k == 2 && p_ != 2) sq_bits_[to_index(gk)] = 1;  // by-product square list
        }
    }
    if (p_ == 2) {
        trace_bits_.assign(q_, 0);
        inv_sq_.assign(q_, Elem{});
        for (uint64_t i = 0; i < q_; ++i) {
            Elem g = from_index(i);
            trace_bits_[i] = static_cast<uint8_t>(trace_to_prime_field(g));
            if (i) inv_sq_[i] = pow(mul(g, g), q_ - 2);
        }
    }
}

}  // namespace k3::ff
