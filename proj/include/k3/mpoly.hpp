#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "k3/rings.hpp"

namespace k3::mpoly {

inline constexpr int kMaxVars = 8;

/// Exponent vector of a monomial in up to kMaxVars variables.
struct Monomial {
    std::array<uint8_t, kMaxVars> e{};
    uint8_t nv = 0;

    int deg() const {
        int d = 0;
        for (int i = 0; i < nv; ++i) d += e[i];
        return d;
    }
    long weighted_deg(std::span<const int> w) const {
        long d = 0;
        for (int i = 0; i < nv; ++i) d += long(e[i]) * w[i];
        return d;
    }
    bool operator==(const Monomial&) const = default;

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        assert(a.nv == b.nv);
        Monomial m;
        m.nv = a.nv;
        for (int i = 0; i < a.nv; ++i) {
            int s = a.e[i] + b.e[i];
            assert(s < 256);
            m.e[i] = static_cast<uint8_t>(s);
        }
        return m;
    }
    bool divides(const Monomial& b) const {
        assert(nv == b.nv);
        for (int i = 0; i < nv; ++i)
            if (e[i] > b.e[i]) return false;
        return true;
    }
    Monomial quotient(const Monomial& b) const {  // *this / b
        assert(b.divides(*this));
        Monomial m;
        m.nv = nv;
        for (int i = 0; i < nv; ++i) m.e[i] = static_cast<uint8_t>(e[i] - b.e[i]);
        return m;
    }
    static Monomial lcm(const Monomial& a, const Monomial& b) {
        assert(a.nv == b.nv);
        Monomial m;
        m.nv = a.nv;
        for (int i = 0; i < a.nv; ++i) m.e[i] = std::max(a.e[i], b.e[i]);
        return m;
    }
    static Monomial one(int nv) {
        Monomial m;
        m.nv = static_cast<uint8_t>(nv);
        return m;
    }
    static Monomial var(int i, int nv, int exp = 1) {
        Monomial m = one(nv);
        m.e[i] = static_cast<uint8_t>(exp);
        return m;
    }
    bool coprime_with(const Monomial& b) const {
        for (int i = 0; i < nv; ++i)
            if (e[i] && b.e[i]) return false;
        return true;
    }
    bool is_pure_power() const {  // x_i^k for some i, k >= 0 (constant counts)
        int nz = 0;
        for (int i = 0; i < nv; ++i) nz += (e[i] != 0);
        return nz <= 1;
    }
};

/// Graded reverse lexicographic order with x0 > x1 > ... .
inline bool grevlex_less(const Monomial& a, const Monomial& b) {
    int da = a.deg(), db = b.deg();
    if (da != db) return da < db;
    for (int i = a.nv - 1; i >= 0; --i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
}

/// Sparse multivariate polynomial; terms kept in descending grevlex order,
/// no zero coefficients stored.
template <class C>
class MultiPoly {
  public:
    using Term = std::pair<Monomial, C>;

    MultiPoly() = default;
    explicit MultiPoly(int nv) : nv_(static_cast<uint8_t>(nv)) {}
    MultiPoly(std::vector<Term> terms, int nv) : nv_(static_cast<uint8_t>(nv)) {
        normalize(std::move(terms));
    }

    static MultiPoly constant(const C& c, int nv) {
        MultiPoly f(nv);
        if (!is_zero(c)) f.terms_.emplace_back(Monomial::one(nv), c);
        return f;
    }
    static MultiPoly variable(int i, const C& one, int nv) {
        MultiPoly f(nv);
        f.terms_.emplace_back(Monomial::var(i, nv), one);
        return f;
    }
    static MultiPoly term(const Monomial& m, const C& c) {
        MultiPoly f(m.nv);
        if (!is_zero(c)) f.terms_.emplace_back(m, c);
        return f;
    }

    int nvars() const { return nv_; }
    bool is_zero_poly() const { return terms_.empty(); }
    std::span<const Term> terms() const { return terms_; }
    size_t nterms() const { return terms_.size(); }

    const Term& leading() const {
        assert(!terms_.empty());
        return terms_.front();
    }

    int degree() const {  // -1 for the zero polynomial
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, m.deg());
        return d;
    }

    /// Degree when homogeneous w.r.t. the given weights; nullopt otherwise.
    std::optional<long> homogeneous_degree(std::span<const int> w) const {
        if (terms_.empty()) return 0;
        long d = terms_.front().first.weighted_deg(w);
        for (auto& [m, c] : terms_)
            if (m.weighted_deg(w) != d) return std::nullopt;
        return d;
    }
    std::optional<long> homogeneous_degree() const {
        static constexpr int ones[kMaxVars] = {1, 1, 1, 1, 1, 1, 1, 1};
        return homogeneous_degree(std::span<const int>(ones, nv_));
    }

    C coeff(const Monomial& m) const {
        for (auto& [mm, c] : terms_)
            if (mm == m) return c;
        return terms_.empty() ? C{} : zero_like(terms_.front().second);
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        assert(a.nv_ == b.nv_ || a.terms_.empty() || b.terms_.empty());
        std::vector<Term> out;
        out.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            const auto& [ma, ca] = a.terms_[i];
            const auto& [mb, cb] = b.terms_[j];
            if (ma == mb) {
                C s = ca + cb;
                if (!is_zero(s)) out.emplace_back(ma, s);
                ++i, ++j;
            } else if (grevlex_less(mb, ma)) {
                out.push_back(a.terms_[i++]);
            } else {
                out.push_back(b.terms_[j++]);
            }
        }
        for (; i < a.terms_.size(); ++i) out.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) out.push_back(b.terms_[j]);
        MultiPoly r(std::max(a.nv_, b.nv_));
        r.terms_ = std::move(out);
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r(nv_);
        r.terms_ = terms_;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        assert(a.nv_ == b.nv_ || a.terms_.empty() || b.terms_.empty());
        std::vector<Term> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) out.emplace_back(ma * mb, ca * cb);
        MultiPoly r;
        r.nv_ = std::max(a.nv_, b.nv_);
        r.normalize(std::move(out));
        return r;
    }
    bool operator==(const MultiPoly&) const = default;

    MultiPoly scaled(const C& s) const {
        MultiPoly r(nv_);
        if (is_zero(s)) return r;
        r.terms_ = terms_;
        for (auto& [m, c] : r.terms_) c = c * s;
        std::erase_if(r.terms_, [](const Term& t) { return is_zero(t.second); });
        return r;
    }

    /// c * m * (*this) — the Groebner reduction step workhorse.
    MultiPoly times_term(const Monomial& m, const C& c) const {
        MultiPoly r(nv_);
        if (is_zero(c)) return r;
        r.terms_.reserve(terms_.size());
        for (auto& [mm, cc] : terms_) {
            C prod = cc * c;
            if (!is_zero(prod)) r.terms_.emplace_back(mm * m, prod);
        }
        return r;
    }

    MultiPoly pow(int k) const {
        assert(k >= 0);
        MultiPoly r = constant(one_like_hint(), nv_);
        MultiPoly b = *this;
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    template <class D, class F>
    MultiPoly<D> map_coeffs(F&& fn) const {
        std::vector<typename MultiPoly<D>::Term> out;
        out.reserve(terms_.size());
        for (auto& [m, c] : terms_) out.emplace_back(m, fn(c));
        return MultiPoly<D>(std::move(out), nv_);
    }

    /// Evaluation over any ring E reachable from C by `inject`.
    template <class E, class F>
    E eval(std::span<const E> pt, F&& inject) const {
        if (static_cast<int>(pt.size()) != nv_)
            throw std::invalid_argument("eval: arity mismatch");
        E acc = pt[0];            // just to get a context value
        acc = acc - acc;          // zero of E
        for (auto& [m, c] : terms_) {
            E t = inject(c);
            for (int i = 0; i < nv_; ++i)
                for (int k = 0; k < m.e[i]; ++k) t = t * pt[i];
            acc = acc + t;
        }
        return acc;
    }
    C eval(std::span<const C> pt) const {
        if (terms_.empty()) {
            assert(!pt.empty());
            return zero_like(pt[0]);
        }
        return eval<C>(pt, [](const C& c) { return c; });
    }

    /// Formal partial derivative in variable i (characteristic-aware).
    MultiPoly partial_derivative(int i) const {
        assert(i >= 0 && i < nv_);
        std::vector<Term> out;
        for (auto& [m, c] : terms_) {
            if (m.e[i] == 0) continue;
            C nc = c * int_like(c, m.e[i]);
            if (is_zero(nc)) continue;
            Monomial mm = m;
            mm.e[i] -= 1;
            out.emplace_back(mm, nc);
        }
        return MultiPoly(std::move(out), nv_);
    }

    /// Same polynomial viewed in a larger variable set (new variables get
    /// exponent zero).
    MultiPoly extended(int new_nv) const {
        assert(new_nv >= nv_ && new_nv <= kMaxVars);
        MultiPoly r = *this;
        r.nv_ = static_cast<uint8_t>(new_nv);
        for (auto& [m, c] : r.terms_) m.nv = static_cast<uint8_t>(new_nv);
        return r;
    }

    /// Compose with images[i] substituted for variable i.
    MultiPoly substitute(std::span<const MultiPoly> images) const {
        if (static_cast<int>(images.size()) != nv_)
            throw std::invalid_argument("substitute: arity mismatch");
        int out_nv = nv_;
        for (auto& g : images)
            if (!g.is_zero_poly()) out_nv = g.nvars();
        // cache powers of each image
        std::array<int, kMaxVars> maxe{};
        for (auto& [m, c] : terms_)
            for (int i = 0; i < nv_; ++i) maxe[i] = std::max<int>(maxe[i], m.e[i]);
        std::vector<std::vector<MultiPoly>> pw(nv_);
        C onec = one_like_hint();
        for (int i = 0; i < nv_; ++i) {
            pw[i].push_back(constant(onec, out_nv));
            for (int k = 1; k <= maxe[i]; ++k) {
                MultiPoly img = images[i];
                if (img.is_zero_poly()) img = MultiPoly(out_nv);
                pw[i].push_back(pw[i][k - 1] * img);
            }
        }
        MultiPoly acc(out_nv);
        for (auto& [m, c] : terms_) {
            MultiPoly t = constant(c, out_nv);
            for (int i = 0; i < nv_; ++i)
                if (m.e[i]) t = t * pw[i][m.e[i]];
            acc = acc + t;
        }
        return acc;
    }

  private:
    C one_like_hint() const {
        if (!terms_.empty()) return one_like(terms_.front().second);
        return one_like(C{});
    }
    void normalize(std::vector<Term> in) {
        std::sort(in.begin(), in.end(),
                  [](const Term& a, const Term& b) { return grevlex_less(b.first, a.first); });
        terms_.clear();
        for (auto& t : in) {
            if (!terms_.empty() && terms_.back().first == t.first)
                terms_.back().second = terms_.back().second + t.second;
            else
                terms_.push_back(std::move(t));
            if (!terms_.empty() && is_zero(terms_.back().second)) terms_.pop_back();
        }
    }

    std::vector<Term> terms_;
    uint8_t nv_ = 0;
};

/// Named variable context used for parsing/printing; weights are the
/// projective weights when relevant (e.g. 1,1,1,3).
struct VarSet {
    std::vector<std::string> names;
    std::vector<int> weights;

    VarSet(std::initializer_list<std::string> n) : names(n), weights(n.size(), 1) {}
    VarSet(std::vector<std::string> n, std::vector<int> w) : names(std::move(n)), weights(std::move(w)) {}
    int index_of(const std::string& s) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == s) return static_cast<int>(i);
        return -1;
    }
    int size() const { return static_cast<int>(names.size()); }
};

inline const VarSet& vars_xyz() {
    static const VarSet v{"x", "y", "z"};
    return v;
}
inline const VarSet& vars_xyzw() {
    static const VarSet v({"x", "y", "z", "w"}, {1, 1, 1, 3});
    return v;
}
inline const VarSet& vars_p5() {
    static const VarSet v{"X1", "X2", "X3", "Y1", "Y2", "Y3"};
    return v;
}
inline const VarSet& vars_st() {
    static const VarSet v{"s", "t"};
    return v;
}
inline const VarSet& vars_conic() {
    static const VarSet v{"p14", "p24", "p34"};
    return v;
}

/// Canonical text form: grevlex-descending sum of coef*var^e terms.
template <class C>
std::string to_string(const MultiPoly<C>& f, const VarSet& vars) {
    if (f.is_zero_poly()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : f.terms()) {
        C mag = c;
        if (prints_negative(c)) {
            os << (first ? "-" : " - ");
            mag = -c;
        } else if (!first) {
            os << " + ";
        }
        first = false;
        bool has_vars = m.deg() > 0;
        if (!has_vars || !is_unit_coeff(mag)) {
            os << coeff_to_string(mag);
            if (has_vars) os << "*";
        }
        bool star = false;
        for (int i = 0; i < m.nv; ++i) {
            if (!m.e[i]) continue;
            if (star) os << "*";
            os << vars.names[i];
            if (m.e[i] > 1) os << "^" << int(m.e[i]);
            star = true;
        }
    }
    return os.str();
}

inline Fp parse_coeff(const std::string& s, const Fp& sample) {
    return Fp(std::stol(s), sample.p);
}
inline Int parse_coeff(const std::string& s, const Int&) { return Int(s); }
inline Rat parse_coeff(const std::string& s, const Rat&) {
    Rat r(s);
    r.canonicalize();
    return r;
}

/// Parse the canonical form (tolerates whitespace, unit coefficients,
/// missing '*', exponent 1). `sample` supplies the ring context.
template <class C>
MultiPoly<C> parse(const std::string& s, const VarSet& vars, const C& sample) {
    std::string t;
    for (char ch : s)
        if (!isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty() || t == "0") return MultiPoly<C>(vars.size());
    std::vector<std::pair<std::string, int>> terms;  // body, sign
    size_t pos = 0;
    int sign = +1;
    if (t[0] == '-') {
        sign = -1;
        pos = 1;
    } else if (t[0] == '+') {
        pos = 1;
    }
    size_t start = pos;
    auto flush = [&](size_t end) {
        if (end > start) terms.emplace_back(t.substr(start, end - start), sign);
    };
    while (pos < t.size()) {
        char ch = t[pos];
        if ((ch == '+' || ch == '-') && pos > start && t[pos - 1] != '^' && t[pos - 1] != '/') {
            flush(pos);
            sign = (ch == '-') ? -1 : +1;
            start = pos + 1;
        }
        ++pos;
    }
    flush(pos);

    MultiPoly<C> acc(vars.size());
    for (auto& [body, sg] : terms) {
        C coeff = one_like(sample);
        Monomial m = Monomial::one(vars.size());
        size_t i = 0;
        while (i < body.size()) {
            size_t j = i;
            while (j < body.size() && body[j] != '*') ++j;
            std::string fac = body.substr(i, j - i);
            if (fac.empty()) throw std::invalid_argument("parse: empty factor in '" + body + "'");
            if (isdigit(static_cast<unsigned char>(fac[0]))) {
                coeff = coeff * parse_coeff(fac, sample);
            } else {
                std::string name = fac;
                int e = 1;
                if (auto c = fac.find('^'); c != std::string::npos) {
                    name = fac.substr(0, c);
                    e = std::stoi(fac.substr(c + 1));
                }
                int vi = vars.index_of(name);
                if (vi < 0) throw std::invalid_argument("parse: unknown variable '" + name + "'");
                if (m.e[vi] + e >= 256) throw std::invalid_argument("parse: exponent overflow");
                m.e[vi] = static_cast<uint8_t>(m.e[vi] + e);
            }
            i = j + 1;
        }
        if (sg < 0) coeff = -coeff;
        acc = acc + MultiPoly<C>::term(m, coeff);
    }
    return acc;
}

/// Dense univariate polynomial, coefficients ascending by degree.
template <class C>
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<C> c) : c_(std::move(c)) { trim(); }

    static UniPoly constant(const C& c) {
        UniPoly f;
        if (!is_zero(c)) f.c_ = {c};
        return f;
    }
    static UniPoly monomial(int k, const C& c) {
        UniPoly f;
        if (!is_zero(c)) {
            f.c_.assign(k + 1, zero_like(c));
            f.c_[k] = c;
        }
        return f;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 when zero
    bool is_zero_poly() const { return c_.empty(); }
    const std::vector<C>& coeffs() const { return c_; }
    C coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return c_.empty() ? C{} : zero_like(c_[0]);
        return c_[k];
    }
    const C& lead() const {
        assert(!c_.empty());
        return c_.back();
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<C> r(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < r.size(); ++i) {
            if (i < a.c_.size() && i < b.c_.size())
                r[i] = a.c_[i] + b.c_[i];
            else if (i < a.c_.size())
                r[i] = a.c_[i];
            else
                r[i] = b.c_[i];
        }
        return UniPoly(std::move(r));
    }
    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero_poly() || b.is_zero_poly()) return UniPoly();
        std::vector<C> r(a.c_.size() + b.c_.size() - 1, zero_like(a.c_[0]));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        }
        return UniPoly(std::move(r));
    }
    bool operator==(const UniPoly&) const = default;

    UniPoly scaled(const C& s) const {
        UniPoly r = *this;
        for (auto& x : r.c_) x = x * s;
        r.trim();
        return r;
    }

    /// Quotient and remainder; requires lead(b) invertible via div_exact
    /// (fields, or monic divisors over Z).
    static std::pair<UniPoly, UniPoly> divrem(UniPoly a, const UniPoly& b) {
        if (b.is_zero_poly()) throw std::domain_error("UniPoly: division by zero");
        UniPoly q;
        if (a.degree() >= b.degree())
            q.c_.assign(a.degree() - b.degree() + 1, zero_like(b.lead()));
        while (!a.is_zero_poly() && a.degree() >= b.degree()) {
            C f = div_exact(a.lead(), b.lead());
            int shift = a.degree() - b.degree();
            q.c_[shift] = f;
            for (int i = 0; i <= b.degree(); ++i)
                a.c_[i + shift] = a.c_[i + shift] - f * b.c_[i];
            a.trim();
        }
        q.trim();
        return {std::move(q), std::move(a)};
    }

    C eval(const C& x) const {
        if (c_.empty()) return zero_like(x);
        C acc = c_.back();
        for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) acc = acc * x + c_[i];
        return acc;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<C> r(c_.size() - 1, zero_like(c_[0]));
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * int_like(c_[i], long(i));
        return UniPoly(std::move(r));
    }

    UniPoly monic() const {
        if (c_.empty()) return *this;
        C li = div_exact(one_like(c_.back()), c_.back());
        return scaled(li);
    }

    template <class D, class F>
    UniPoly<D> map_coeffs(F&& fn) const {
        std::vector<D> r;
        r.reserve(c_.size());
        for (auto& x : c_) r.push_back(fn(x));
        return UniPoly<D>(std::move(r));
    }

  private:
    void trim() {
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }
    std::vector<C> c_;
};

/// Monic gcd by the Euclidean algorithm (field coefficients).
template <class C>
UniPoly<C> uni_gcd(UniPoly<C> a, UniPoly<C> b) {
    while (!b.is_zero_poly()) {
        auto [q, r] = UniPoly<C>::divrem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero_poly()) a = a.monic();
    return a;
}

/// m-th cyclotomic polynomial over Z via iterated exact division of t^m - 1.
UniPoly<Int> cyclotomic(int m);

/// Squarefree radical of a univariate polynomial over a field of
/// characteristic p >= 0; PthRoot extracts p-th roots of coefficients.
template <class C, class PthRoot>
UniPoly<C> radical(const UniPoly<C>& g, PthRoot&& pth_root) {
    if (g.degree() <= 0) return UniPoly<C>::constant(one_like(g.coeff(0)));
    int p = char_of(g.lead());
    UniPoly<C> d = g.derivative();
    if (d.is_zero_poly()) {
        // g = h(t^p): extract the p-th root and recurse
        assert(p > 0);
        std::vector<C> h;
        for (int k = 0; k <= g.degree(); k += p) h.push_back(pth_root(g.coeff(k)));
        return radical(UniPoly<C>(std::move(h)), pth_root);
    }
    UniPoly<C> cpart = uni_gcd(g, d);
    if (cpart.degree() == 0) return g.monic();
    auto [w, r0] = UniPoly<C>::divrem(g, cpart);
    assert(r0.is_zero_poly());
    // w = product of distinct factors with multiplicity not divisible by p;
    // strip them from cpart, what remains is a p-th power.
    UniPoly<C> y = cpart;
    for (;;) {
        UniPoly<C> d2 = uni_gcd(y, w);
        if (d2.degree() == 0) break;
        auto [q, r] = UniPoly<C>::divrem(y, d2);
        assert(r.is_zero_poly());
        y = std::move(q);
    }
    UniPoly<C> rest = UniPoly<C>::constant(one_like(g.lead()));
    if (y.degree() > 0) rest = radical(y, pth_root);
    return (w * rest).monic();
}

/// True iff every root of the nonzero binary form g (homogeneous in two
/// variables) over the algebraic closure has multiplicity >= 2.
template <class C, class PthRoot>
bool even_multiplicity_form(const MultiPoly<C>& g, PthRoot&& pth_root) {
    if (g.is_zero_poly()) throw std::invalid_argument("even_multiplicity_form: zero form");
    assert(g.nvars() == 2);
    auto hd = g.homogeneous_degree();
    if (!hd) throw std::invalid_argument("even_multiplicity_form: not homogeneous");
    int d = static_cast<int>(*hd);
    // G(T) = g(T, 1); the t-multiplicity is d - deg G.
    std::vector<C> gc(d + 1, zero_like(g.leading().second));
    for (auto& [m, c] : g.terms()) gc[m.e[0]] = c;
    UniPoly<C> G(std::move(gc));
    int t_mult = d - G.degree();
    if (t_mult == 1) return false;
    if (G.degree() <= 0) return true;
    UniPoly<C> rad = radical(G, pth_root);
    auto [q, r] = UniPoly<C>::divrem(G, rad * rad);
    (void)q;
    return r.is_zero_poly();
}

template <class C>
bool even_multiplicity_form(const MultiPoly<C>& g) {
    return even_multiplicity_form(g, [](const C& c) { return coeff_pth_root(c); });
}

// -- integer-polynomial helpers used by normalization and CRT lifting --

/// gcd of all coefficient numerators/denominators handled by callers; this is
/// the plain integer content (nonnegative).
inline Int int_content(const MultiPoly<Int>& f) {
    Int g = 0;
    for (auto& [m, c] : f.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

inline MultiPoly<Fp> reduce_mod(const MultiPoly<Int>& f, int p) {
    std::vector<typename MultiPoly<Fp>::Term> out;
    for (auto& [m, c] : f.terms()) {
        Fp r(mpz_fdiv_ui(c.get_mpz_t(), p), p);
        if (!is_zero(r)) out.emplace_back(m, r);
    }
    return MultiPoly<Fp>(std::move(out), f.nvars());
}

inline MultiPoly<Int> lift_to_int(const MultiPoly<Fp>& f) {
    std::vector<typename MultiPoly<Int>::Term> out;
    for (auto& [m, c] : f.terms()) out.emplace_back(m, Int(c.v));
    return MultiPoly<Int>(std::move(out), f.nvars());
}

inline MultiPoly<Rat> int_to_rat(const MultiPoly<Int>& f) {
    return f.map_coeffs<Rat>([](const Int& c) { return Rat(c); });
}

/// Exact determinant by cofactor expansion along the first row.
template <class C>
MultiPoly<C> poly_det(const std::vector<std::vector<MultiPoly<C>>>& m) {
    size_t n = m.size();
    for (auto& row : m)
        if (row.size() != n) throw std::invalid_argument("poly_det: non-square matrix");
    if (n == 1) return m[0][0];
    int nv = 0;
    for (auto& row : m)
        for (auto& f : row)
            if (!f.is_zero_poly()) nv = f.nvars();
    MultiPoly<C> acc(nv);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero_poly()) continue;
        std::vector<std::vector<MultiPoly<C>>> minor;
        minor.reserve(n - 1);
        for (size_t i = 1; i < n; ++i) {
            std::vector<MultiPoly<C>> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        MultiPoly<C> t = m[0][j] * poly_det(minor);
        acc = (j % 2 == 0) ? acc + t : acc - t;
    }
    return acc;
}

/// Rational function over Q(x_1..x_v), stored as an integer-primitive
/// numerator/denominator pair: gcd of the two integer contents is 1 and the
/// denominator's grevlex-leading coefficient is positive. No polynomial gcd
/// is taken; equality is by cross-multiplication.
struct RatFunc {
    MultiPoly<Int> num, den;

    RatFunc() = default;
    RatFunc(MultiPoly<Int> n, MultiPoly<Int> d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero_poly()) throw std::domain_error("RatFunc: zero denominator");
        normalize();
    }
    static RatFunc from_poly(MultiPoly<Int> n) {
        int nv = n.nvars();
        return RatFunc(std::move(n), MultiPoly<Int>::constant(Int(1), nv));
    }

    bool is_zero() const { return num.is_zero_poly(); }
    int nvars() const { return den.nvars(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.num, a.den * b.den);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
        return RatFunc(a.num * b.den, a.den * b.num);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num = -r.num;
        return r;
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num * b.den == b.num * a.den;
    }

    /// Exact rational value at an integer point; denominator must not vanish.
    Rat eval(std::span<const Int> pt) const {
        Int dv = den.eval(pt);
        if (k3::is_zero(dv)) throw std::domain_error("RatFunc: denominator vanishes at point");
        Int nv = num.eval(pt);
        Rat r(nv);
        r /= Rat(dv);
        return r;
    }

  private:
    void normalize() {
        Int cn = int_content(num), cd = int_content(den);
        Int g;
        mpz_gcd(g.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
        if (g > 1) {
            num = num.map_coeffs<Int>([&](const Int& c) { return div_exact(c, g); });
            den = den.map_coeffs<Int>([&](const Int& c) { return div_exact(c, g); });
        }
        if (sgn(den.leading().second) < 0) {
            num = -num;
            den = -den;
        }
    }
};

inline std::string to_string(const RatFunc& f, const VarSet& vars) {
    if (f.is_zero()) return "0";
    std::string d = to_string(f.den, vars);
    if (d == "1") return to_string(f.num, vars);
    return "(" + to_string(f.num, vars) + ") / (" + d + ")";
}

}  // namespace k3::mpoly
