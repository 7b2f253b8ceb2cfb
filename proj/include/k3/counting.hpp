#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "k3/ff.hpp"
#include "k3/geometry.hpp"

namespace k3::counting {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentCounts : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Point counts N_n = #X(F_{p^n}) for one surface.
struct CountSeries {
    int p = 0;
    std::map<int, int64_t> counts;
    std::string fingerprint;
};

/// Degree-22 Frobenius characteristic polynomial on H^2; c[0] = 1 and
/// c[22-j] = sign * p^(22-2j) * c[j].
struct WeilPolynomial {
    int p = 0;
    int sign = 0;
    std::array<int64_t, 23> c{};
};

/// Stable FNV-1a fingerprint of (p, alpha, beta) in canonical text form.
std::string surface_fingerprint(const geometry::K3Surface<Fp>& s);

struct CountOptions {
    int workers = 1;
    uint64_t point_cap = 0;  // 0 = no cap; exceeding throws BudgetExceeded
};

/// Exact #{(x:y:z:w) in P(1,1,1,3)(F_{p^n}) : w^2 + alpha w + beta = 0},
/// summed over the three affine patches of the base P^2. Deterministic and
/// independent of the worker partition.
int64_t count_points(const geometry::K3Surface<Fp>& s, int n, const CountOptions& opt = {});

/// Lefschetz traces t_n = N_n - p^(2n) - 1 for n = 1..upto.
std::vector<int64_t> traces_from_counts(const CountSeries& cs, int upto);

/// Newton's identity -k c_k = t_k + sum_{i<k} c_i t_{k-i}; the division by k
/// must be exact or the counts are rejected.
std::vector<int64_t> newton_coefficients(std::span<const int64_t> traces);

/// Functional-equation completion from c_1..c_12.
WeilPolynomial complete_charpoly(std::span<const int64_t> c, int p);

/// Total multiplicity of cyclotomic factors of p^-22 f(pt) (raw) and the
/// even-adjusted bound.
struct PicardBound {
    int raw = 0;
    int parity_adjusted = 0;
};
PicardBound picard_upper_bound(const WeilPolynomial& w);

/// Paper-style bulk evaluation of f over the patch row {(x0, y, z) : z in
/// F_q, indexed by element index}: per point the monomial values come from
/// the power tables, partial products stay unreduced and a single reduction
/// closes the sum. Exposed for cross-checking the counting loops.
void bulk_eval_row(const ff::Field& F, const mpoly::MultiPoly<Fp>& f, ff::Elem x0, ff::Elem y,
                   std::span<ff::Elem> out);

}  // namespace k3::counting
