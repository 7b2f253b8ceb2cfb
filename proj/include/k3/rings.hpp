#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace k3 {

// Arbitrary-precision integers and rationals (GMP-backed).
using Int = mpz_class;
using Rat = mpq_class;

/// Element of a prime field F_p, p a small prime carried with the value.
struct Fp {
    int32_t v = 0;
    int32_t p = 0;

    Fp() = default;
    Fp(long value, int prime) : p(static_cast<int32_t>(prime)) {
        long r = value % prime;
        if (r < 0) r += prime;
        v = static_cast<int32_t>(r);
    }

    friend Fp operator+(Fp a, Fp b) {
        assert(a.p == b.p);
        int32_t s = a.v + b.v;
        if (s >= a.p) s -= a.p;
        return raw(s, a.p);
    }
    friend Fp operator-(Fp a, Fp b) {
        assert(a.p == b.p);
        int32_t s = a.v - b.v;
        if (s < 0) s += a.p;
        return raw(s, a.p);
    }
    friend Fp operator*(Fp a, Fp b) {
        assert(a.p == b.p);
        return raw(static_cast<int32_t>((int64_t(a.v) * b.v) % a.p), a.p);
    }
    Fp operator-() const { return raw(v == 0 ? 0 : p - v, p); }
    bool operator==(const Fp&) const = default;

    Fp inv() const {
        if (v == 0) throw std::domain_error("Fp: inverse of zero");
        // p is prime, so v^(p-2) works and p is tiny.
        Fp r = raw(1, p), b = *this;
        int e = p - 2;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    static Fp raw(int32_t value, int32_t prime) {
        Fp f;
        f.v = value;
        f.p = prime;
        return f;
    }
};

inline bool is_zero(const Fp& c) { return c.v == 0; }
inline bool is_zero(const Int& c) { return sgn(c) == 0; }
inline bool is_zero(const Rat& c) { return sgn(c) == 0; }

inline Fp one_like(const Fp& c) { return Fp::raw(1, c.p); }
inline Int one_like(const Int&) { return Int(1); }
inline Rat one_like(const Rat&) { return Rat(1); }

inline Fp zero_like(const Fp& c) { return Fp::raw(0, c.p); }
inline Int zero_like(const Int&) { return Int(0); }
inline Rat zero_like(const Rat&) { return Rat(0); }

/// Scalar embedding of a machine integer into the ring of `ctx`.
inline Fp int_like(const Fp& ctx, long k) { return Fp(k, ctx.p); }
inline Int int_like(const Int&, long k) { return Int(k); }
inline Rat int_like(const Rat&, long k) { return Rat(k); }

/// Exact division; requires the ring to support it for the given operands.
inline Fp div_exact(const Fp& a, const Fp& b) { return a * b.inv(); }
inline Rat div_exact(const Rat& a, const Rat& b) {
    if (is_zero(b)) throw std::domain_error("Rat: division by zero");
    return a / b;
}
inline Int div_exact(const Int& a, const Int& b) {
    if (is_zero(b)) throw std::domain_error("Int: division by zero");
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (!is_zero(r)) throw std::domain_error("Int: inexact division");
    return q;
}

/// Characteristic of the coefficient ring (0 for Z, Q).
inline int char_of(const Fp& c) { return c.p; }
inline int char_of(const Int&) { return 0; }
inline int char_of(const Rat&) { return 0; }

/// p-th root of a coefficient (inverse Frobenius); identity on prime fields.
inline Fp coeff_pth_root(const Fp& c) { return c; }

inline std::string coeff_to_string(const Fp& c) { return std::to_string(c.v); }
inline std::string coeff_to_string(const Int& c) { return c.get_str(); }
inline std::string coeff_to_string(const Rat& c) { return c.get_str(); }

/// True when the coefficient prints with a leading '-'; used by the
/// canonical polynomial printer.
inline bool prints_negative(const Fp&) { return false; }
inline bool prints_negative(const Int& c) { return sgn(c) < 0; }
inline bool prints_negative(const Rat& c) { return sgn(c) < 0; }

inline bool is_unit_coeff(const Fp& c) { return c.v == 1; }
inline bool is_unit_coeff(const Int& c) { return c == 1; }
inline bool is_unit_coeff(const Rat& c) { return c == 1; }

}  // namespace k3
