#pragma once

#include <array>
#include <cstdint>

#include "k3/geometry.hpp"

namespace k3::fixtures {

using geometry::K3Surface;
using geometry::QuadricBundle;
using mpoly::MultiPoly;

/// The cubic fourfold over Z whose K3 surface realizes the obstruction
/// (all coefficients in {0..5}; reduces mod 2 and 3 to the two special
/// fourfolds below).
QuadricBundle<Int> obstruction_bundle();

/// Special fourfold over F_2 and its K3 surface
/// w^2 + (x^2 y + y^3 + y^2 z) w + (x^5 z + ... + z^6) = 0.
QuadricBundle<Fp> bundle_f2();
K3Surface<Fp> surface_f2();

/// Special fourfold over F_3 and its K3 surface w^2 = F (stored beta = -F).
QuadricBundle<Fp> bundle_f3();
K3Surface<Fp> surface_f3();

/// The printed 4x4 matrix of the obstruction surface (entries over Z);
/// its determinant is the branch sextic F.
std::vector<std::vector<MultiPoly<Int>>> obstruction_matrix();

/// Printed quaternion-algebra representative (alpha, beta) over Q(x,y,z).
geometry::QuaternionAlgebra obstruction_algebra();

/// Point-count tables #X(F_{p^n}).
inline constexpr std::array<int64_t, 12> kCountsP2 = {7,      25,      73,      249,     1137,     4273,
                                                      16737,  65313,   264385,  1047745, 4203393,  16767105};
inline constexpr std::array<int64_t, 12> kCountsP3 = {11,        119,        758,         6707,
                                                      58421,     529472,     4784357,     43059323,
                                                      387449246, 3486568169, 31380849731, 282429079832};

/// Frobenius charpoly coefficients c_1..c_12 derived from the counts
/// (the p = 3 row carries the corrected c_12 = -9 * c_10).
inline constexpr std::array<int64_t, 12> kCoeffsP2 = {-2, -2, 4, 8, -32, 0, 64, 128, -512, 512, 0, 2048};
inline constexpr std::array<int64_t, 12> kCoeffsP3 = {-1,    -18,   9,     135,   162, -243,
                                                      -3645, -6561, 26244, 118098, 0,  -1062882};

/// Degree-20 non-cyclotomic factors of p^-22 f(pt), coefficients from t^20
/// down to t^0; f~_2 = (1/2)(t-1)^2 * (...), f~_3 = (1/3)(t-1)(t+1) * (...).
inline constexpr std::array<int, 21> kDeg20FactorP2 = {2, 2, 1, 1, 2, 1, 0, 0, 1, 0, 0,
                                                       0, 1, 0, 0, 1, 2, 1, 1, 2, 2};
inline constexpr std::array<int, 21> kDeg20FactorP3 = {3, -1, -3, 0, 2, 2, 1, -3, -2, 1, 4,
                                                       1, -2, -3, 1, 2, 2, 0, -3, -1, 3};

/// Rational point [15:15:16:13752] and real point [1:0:1:sqrt(8)].
inline constexpr std::array<long, 3> kRationalPoint = {15, 15, 16};
inline constexpr long kRationalPointW = 13752;
inline constexpr std::array<long, 3> kRealPoint = {1, 0, 1};

/// The tangent conic of the F_3 surface: 2x^2 + 2xy + xz + 2y^2.
MultiPoly<Fp> tangent_conic_f3();

}  // namespace k3::fixtures
