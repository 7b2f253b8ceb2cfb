#pragma once

#include <span>
#include <vector>

#include "k3/mpoly.hpp"

namespace k3::groebner {

using mpoly::Monomial;
using Poly = mpoly::MultiPoly<Fp>;

/// Ideal generators over F_p under the fixed grevlex order.
struct IdealBasis {
    std::vector<Poly> gens;
};

/// Full normal form of f against the basis (first-divisor strategy).
Poly normal_form(Poly f, std::span<const Poly> basis);

/// Reduced Groebner basis via Buchberger: normal pair selection (minimal lcm
/// degree first) with the coprimality criterion, then inter-reduction.
IdealBasis buchberger(const IdealBasis& basis);

/// True iff the affine cone of the (weighted-)homogeneous ideal has no point
/// other than the origin over the algebraic closure; decided by the
/// pure-power criterion on the leading monomials of a Groebner basis.
/// Throws on non-homogeneous input.
bool projective_empty(const IdealBasis& basis, std::span<const int> weights = {});

}  // namespace k3::groebner
