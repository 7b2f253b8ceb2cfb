#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k3/geometry.hpp"

namespace k3::brauer {

using geometry::QuaternionAlgebra;

struct RepresentativeUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A place of Q: the real place or a finite prime.
struct Place {
    bool real = false;
    Int p;

    static Place infinite() { return {true, Int(0)}; }
    static Place finite(Int prime) { return {false, std::move(prime)}; }
    std::string key() const { return real ? "real" : p.get_str(); }
    bool operator<(const Place& o) const {
        if (real != o.real) return !real;  // finite places sort before "real"
        return p < o.p;
    }
};

/// Local invariant of the quaternion algebra (a, b) over Q_place, as an
/// element of (1/2)Z/Z encoded 0 -> 0, 1 -> 1/2. Exact integer arithmetic.
int hilbert_symbol(const Rat& a, const Rat& b, const Place& v);

/// Primes where (a, b) can ramify: 2 and every prime dividing a numerator
/// or denominator of a or b.
std::vector<Int> relevant_primes(const Rat& a, const Rat& b);

/// Invariants at all relevant places (others are 0); keys are the prime
/// decimal strings plus "real". Their sum is 0 by reciprocity.
std::map<std::string, int> all_invariants(const Rat& a, const Rat& b);

/// Point of the surface w^2 = F(x,y,z): a rational point (coprime integer
/// coordinates, rational w with w^2 = F exactly) or a real point
/// (F(x,y,z) >= 0 as the w = sqrt(F) certificate).
struct SurfacePoint {
    Place place;
    Int x, y, z;
    Rat w;             // rational points: the nonnegative root
    bool both_signs = false;
    Rat f_value;       // F(x,y,z); >= 0 certifies the real point

    std::string str() const;
};

/// (alpha(P), beta(P)) as exact rationals; throws RepresentativeUndefined
/// when a denominator vanishes at P.
std::pair<Rat, Rat> evaluate_algebra(const QuaternionAlgebra& A, const SurfacePoint& P);

/// hilbert_symbol of the evaluated pair at P's place.
int local_invariant(const QuaternionAlgebra& A, const SurfacePoint& P);

/// All points [x:y:z:w] with coprime integer (x,y,z), max|coord| <= H and
/// F(x,y,z) a perfect square; w is the nonnegative root, both_signs records
/// the w != 0 pair. Sorted by (x,y,z).
std::vector<SurfacePoint> search_rational_points(const geometry::K3Surface<Int>& s, long H);

enum class Verdict { Obstructed, NotObstructed };

struct VerdictRecord {
    SurfacePoint rational_point, real_point;
    std::map<std::string, int> rational_invariants;  // all places of A(P_rational)
    int rational_sum = 0;                            // must be 0 (reciprocity)
    int inv_infinity_rational = 0;
    int inv_infinity_real = 0;
    int hybrid_sum = 0;  // finite invariants of the rational point + real inv at infinity
    Verdict verdict = Verdict::NotObstructed;
};

/// The adelic point equal to rational_point at the finite places and
/// real_point at infinity; OBSTRUCTED when its total invariant is 1/2.
VerdictRecord obstruction_verdict(const QuaternionAlgebra& A, const SurfacePoint& rational_point,
                                  const SurfacePoint& real_point);

}  // namespace k3::brauer
