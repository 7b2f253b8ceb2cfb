#pragma once

#include <optional>
#include <string>

#include "k3/ff.hpp"
#include "k3/geometry.hpp"

namespace k3::lattices {

using geometry::K3Surface;
using mpoly::MultiPoly;

/// Rank-2 sublattice certificate for a Picard lower bound at p.
struct LatticeCertificate {
    int p = 0;
    std::string kind;  // "char2-divisor" | "tangent-conic"
    // char2-divisor witness: Gamma = {l = w + c = 0}, Gamma' = psi(Gamma)
    MultiPoly<Fp> witness_l, witness_c, witness_gamma_prime_c;
    // tangent-conic witness (coefficients in F_{p^e}; canonical text form)
    std::string conic_text;
    MultiPoly<Fp> conic_fp;  // populated when e = 1
    int conic_field_degree = 1;
    std::array<std::array<int, 2>, 2> gram{};
    int64_t discriminant = 0;
};

/// Search for a divisor {l = w + c = 0} on a char-2 surface: all 7 nonzero
/// linear forms l, all 16 cubics c in the two variables complementary to l,
/// accepting when c^2 + alpha c + beta vanishes modulo l. The certificate
/// carries gram [[-2,3],[3,-2]], discriminant -5.
std::optional<LatticeCertificate> find_char2_divisor(const K3Surface<Fp>& s);

/// Search for a smooth conic with coefficients in F_{p^e} tangent to the
/// branch sextic at all intersection points (multiplicity >= 2 everywhere).
/// Enumerates conics up to scalar in lexicographic coefficient order; the
/// certificate carries gram [[-2,6],[6,-2]], discriminant -32.
std::optional<LatticeCertificate> find_tangent_conic(const K3Surface<Fp>& s, int e = 1);

/// Direct tangency test of one conic over F_{p^e} against the branch sextic
/// of s (both given over F_p; lifted into F_{p^e} internally).
bool conic_is_tangent(const K3Surface<Fp>& s, const MultiPoly<Fp>& conic, int e = 1);

/// The branch-sextic composition with a parametrization of the conic: the
/// degree-12 binary form whose root multiplicities witness tangency.
/// Returns nullopt when the conic is singular; the zero form when the conic
/// lies on the sextic.
std::optional<MultiPoly<ff::Fq>> conic_pullback_form(const MultiPoly<ff::Fq>& sextic,
                                                     const MultiPoly<ff::Fq>& conic,
                                                     const ff::Field& F);

/// van Luijk pinch: both parity-adjusted upper bounds equal 2, both
/// certificates nondegenerate, and the two discriminants lie in different
/// square classes.
bool rank_one_conclusion(const LatticeCertificate& cert2, const LatticeCertificate& cert3, int ub2,
                         int ub3);

}  // namespace k3::lattices
