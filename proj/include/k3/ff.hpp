#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "k3/mpoly.hpp"
#include "k3/rings.hpp"

namespace k3::ff {

/// Packed element of F_{p^n}. Interpretation depends on the field kind:
///   p = 2 : `a` holds the n coefficient bits, `b` = 0
///   p = 3 : `a`/`b` are the low/high bit-planes of the n trits
///   p >= 5: base-256 digit string, digits 0..7 in `a`, 8..15 in `b`
struct Elem {
    uint64_t a = 0, b = 0;
    bool operator==(const Elem&) const = default;
    bool is_zero() const { return a == 0 && b == 0; }
};

enum class Rep { Bits2, Planes3, Bytes };

/// F_{p^n} with a deterministic sparse modulus and optional bulk tables.
/// Immutable after construction (and after an explicit build_counting_tables()
/// call, which must happen before the field is shared across threads).
class Field {
  public:
    /// Searches the canonical modulus: monic degree-n polynomials ordered by
    /// number of nonzero terms, then lexicographically by coefficient vector
    /// (c_0 most significant); first irreducible wins.
    Field(int p, int n);
    /// Explicit modulus (low-first coefficients of the non-leading part must
    /// have length n; the monic leading 1 is implicit). Verified irreducible.
    Field(int p, int n, std::vector<uint8_t> modulus_low);

    int p() const { return p_; }
    int n() const { return n_; }
    uint64_t q() const { return q_; }
    Rep rep() const { return rep_; }
    /// Non-leading modulus coefficients, ascending degree (length n).
    const std::vector<uint8_t>& modulus_low() const { return mod_low_; }
    std::string modulus_string() const;

    Elem zero() const { return {}; }
    Elem one() const { return from_residue(1); }
    /// Embedding of Z -> F_p -> F_{p^n}.
    Elem from_residue(long c) const;
    Elem from_coeffs(std::span<const int> coeffs) const;
    std::vector<int> coeffs(Elem g) const;

    uint64_t to_index(Elem g) const;   // sum c_i p^i
    Elem from_index(uint64_t i) const;

    Elem add(Elem x, Elem y) const;
    Elem sub(Elem x, Elem y) const;
    Elem neg(Elem x) const;
    Elem mul(Elem x, Elem y) const;    // schoolbook product, inline reduction
    /// Product left unreduced (degree <= 2n-2); combine with reduce().
    Elem mul_unreduced(Elem x, Elem y) const;
    Elem add_unreduced(Elem x, Elem y) const { return add_raw(x, y); }
    Elem reduce(Elem wide) const;

    /// g^k by square-and-multiply over inline-reduced products; g^0 = 1.
    Elem pow(Elem g, uint64_t k) const;
    Elem inverse(Elem g) const;        // g^(q-2)
    Elem frobenius(Elem g) const { return pow(g, p_); }

    /// Tr_{F_q/F_p}(g) = g + g^p + ... + g^(p^(n-1)) as a residue in [0, p).
    int trace_to_prime_field(Elem g) const;

    /// Quadratic-character square test; odd characteristic only.
    bool is_square(Elem g) const;

    /// #{w in F_q : w^2 + a w + b = 0}.
    int quadratic_solution_count(Elem a, Elem b) const;

    /// Smallest-index generator of the multiplicative group.
    Elem multiplicative_generator() const;

    /// Per-element power tables g^k (2 <= k <= 6), the square-membership
    /// bitset (odd p, a by-product of the power run), and for p = 2 the
    /// trace bits and (g^2)^(q-2) inversion table. Requires q <= 2^24.
    void build_counting_tables();
    bool has_counting_tables() const { return !pow_k_.empty(); }
    /// g^k for 2 <= k <= 6 from the table (k = 0, 1 handled inline).
    Elem table_pow(uint64_t index, int k) const {
        if (k == 0) return one();
        if (k == 1) return from_index(index);
        return pow_k_[index * 5 + (k - 2)];
    }
    bool table_is_square(uint64_t index) const { return sq_bits_[index]; }
    int table_trace(uint64_t index) const { return trace_bits_[index]; }
    Elem table_inv_sq(uint64_t index) const { return inv_sq_[index]; }

    bool operator==(const Field& o) const {
        return p_ == o.p_ && n_ == o.n_ && mod_low_ == o.mod_low_;
    }

    static constexpr uint64_t kTableLimit = uint64_t(1) << 24;

  private:
    void init();
    void build_square_bits();            // lazy q <= 2^24 square table
    Elem add_raw(Elem x, Elem y) const;  // coefficientwise mod p, any width

    int p_ = 0, n_ = 0;
    uint64_t q_ = 0;
    Rep rep_ = Rep::Bytes;
    std::vector<uint8_t> mod_low_;               // ascending, length n
    std::vector<std::pair<int, int>> mod_terms_; // nonzero (degree, coeff) of mod_low_

    std::vector<Elem> pow_k_;      // q * 5 entries, k = 2..6
    std::vector<uint8_t> sq_bits_; // q entries (odd p)
    std::vector<uint8_t> trace_bits_;
    std::vector<Elem> inv_sq_;     // p = 2: (g^2)^(q-2)
};

/// ext_field_create of the build contract: deterministic field construction.
inline Field ext_field_create(int p, int n) { return Field(p, n); }

/// Extension-field coefficient for mpoly templates.
struct Fq {
    const Field* F = nullptr;
    Elem v;

    Fq() = default;
    Fq(const Field& f, Elem e) : F(&f), v(e) {}

    friend Fq operator+(const Fq& x, const Fq& y) { return {*x.F, x.F->add(x.v, y.v)}; }
    friend Fq operator-(const Fq& x, const Fq& y) { return {*x.F, x.F->sub(x.v, y.v)}; }
    friend Fq operator*(const Fq& x, const Fq& y) { return {*x.F, x.F->mul(x.v, y.v)}; }
    Fq operator-() const { return {*F, F->neg(v)}; }
    bool operator==(const Fq& o) const { return v == o.v; }
};

inline bool is_zero(const Fq& c) { return c.v.is_zero(); }
inline Fq one_like(const Fq& c) { return {*c.F, c.F->one()}; }
inline Fq zero_like(const Fq& c) { return {*c.F, c.F->zero()}; }
inline Fq int_like(const Fq& c, long k) { return {*c.F, c.F->from_residue(k)}; }
inline Fq div_exact(const Fq& a, const Fq& b) { return {*a.F, a.F->mul(a.v, a.F->inverse(b.v))}; }
inline std::string coeff_to_string(const Fq& c) {
    std::string s = "[";
    auto cs = c.F->coeffs(c.v);
    for (size_t i = 0; i < cs.size(); ++i) s += (i ? "," : "") + std::to_string(cs[i]);
    return s + "]";
}
inline bool prints_negative(const Fq&) { return false; }
inline bool is_unit_coeff(const Fq& c) { return c.v == c.F->one(); }
inline int char_of(const Fq& c) { return c.F->p(); }
inline Fq coeff_pth_root(const Fq& c) {
    // inverse Frobenius: c^(q/p)
    return {*c.F, c.F->pow(c.v, c.F->q() / c.F->p())};
}

/// Lift a prime-field polynomial into F_{p^n}.
inline mpoly::MultiPoly<Fq> lift_poly(const mpoly::MultiPoly<Fp>& f, const Field& F) {
    return f.map_coeffs<Fq>([&](const Fp& c) { return Fq(F, F.from_residue(c.v)); });
}

}  // namespace k3::ff
