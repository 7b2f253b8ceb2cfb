#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "k3/fixtures.hpp"
#include "k3/lattices.hpp"
#include "oracles.hpp"

using namespace k3;
using geometry::K3Surface;
using lattices::LatticeCertificate;
using mpoly::MultiPoly;
using mpoly::parse;
using mpoly::vars_xyz;

TEST_CASE("char-2 divisor on the special surface: w = z = 0") {
    auto s = fixtures::surface_f2();
    auto cert = lattices::find_char2_divisor(s);
    REQUIRE(cert.has_value());
    Fp one(1, 2);
    CHECK(cert->witness_l == parse("z", vars_xyz(), one));
    CHECK(cert->witness_c.is_zero_poly());
    CHECK(cert->witness_gamma_prime_c == parse("x^2*y + y^3", vars_xyz(), one));
    CHECK(cert->discriminant == -5);
    CHECK(cert->gram == std::array<std::array<int, 2>, 2>{{{-2, 3}, {3, -2}}});

    // membership identity: c^2 + alpha c + beta = 0 modulo l, re-substituted
    // (l = z: drop every term containing z)
    MultiPoly<Fp> w = cert->witness_c * cert->witness_c + s.alpha * cert->witness_c + s.beta;
    MultiPoly<Fp> residue(3);
    for (auto& [m, c] : w.terms())
        if (m.e[2] == 0) residue = residue + MultiPoly<Fp>::term(m, c);
    CHECK(residue.is_zero_poly());
}

TEST_CASE("char-2 divisor search returns none when no witness exists") {
    // alpha = x^3 and beta with a pure power in each variable: membership
    // c^2 + alpha c + beta = 0 mod l is impossible for every (l, c)
    K3Surface<Fp> s{parse("x^3", vars_xyz(), Fp(0, 2)),
                    parse("x^6 + y^6 + z^6", vars_xyz(), Fp(0, 2))};
    auto cert = lattices::find_char2_divisor(s);
    // independent exhaustive double loop over the same witness space
    bool naive_found = false;
    Fp one(1, 2);
    for (int mask = 1; mask < 8; ++mask) {
        MultiPoly<Fp> l(3);
        for (int i = 0; i < 3; ++i)
            if (mask >> (2 - i) & 1) l = l + MultiPoly<Fp>::variable(i, one, 3);
        int pivot = (mask & 1) ? 2 : ((mask & 2) ? 1 : 0);
        std::array<MultiPoly<Fp>, 3> img{MultiPoly<Fp>::variable(0, one, 3),
                                         MultiPoly<Fp>::variable(1, one, 3),
                                         MultiPoly<Fp>::variable(2, one, 3)};
        img[pivot] = l - MultiPoly<Fp>::variable(pivot, one, 3);
        int u = pivot == 0 ? 1 : 0, v = pivot == 2 ? 1 : 2;
        for (int cm = 0; cm < 16; ++cm) {
            MultiPoly<Fp> c(3);
            for (int t = 0; t < 4; ++t) {
                if (!(cm >> t & 1)) continue;
                mpoly::Monomial m = mpoly::Monomial::one(3);
                m.e[u] = uint8_t(3 - t);
                m.e[v] = uint8_t(t);
                c = c + MultiPoly<Fp>::term(m, one);
            }
            auto w = c * c + s.alpha * c + s.beta;
            if (w.substitute(std::span<const MultiPoly<Fp>>(img.data(), 3)).is_zero_poly())
                naive_found = true;
        }
    }
    CHECK_FALSE(naive_found);
    CHECK_FALSE(cert.has_value());
}

TEST_CASE("tangent conic on the F_3 surface") {
    auto s = fixtures::surface_f3();
    auto cert = lattices::find_tangent_conic(s, 1);
    REQUIRE(cert.has_value());
    CHECK(cert->discriminant == -32);
    CHECK(cert->gram == std::array<std::array<int, 2>, 2>{{{-2, 6}, {6, -2}}});
    CHECK(cert->kind == "tangent-conic");
    CHECK(cert->conic_field_degree == 1);
    // whatever the search found passes the direct test, and so does the
    // conic printed in the tangency example (they agree up to scalar here
    // or not; both must be tangent)
    CHECK(lattices::conic_is_tangent(s, cert->conic_fp, 1));
    CHECK(lattices::conic_is_tangent(s, fixtures::tangent_conic_f3(), 1));

    // pullback form invariants: g != 0, rad(g)^2 | g, <= 6 distinct roots
    ff::Field F(3, 1);
    auto g = lattices::conic_pullback_form(ff::lift_poly(s.branch_sextic(), F),
                                           ff::lift_poly(cert->conic_fp, F), F);
    REQUIRE(g.has_value());
    CHECK_FALSE(g->is_zero_poly());
    CHECK(g->homogeneous_degree() == 12);
    CHECK(mpoly::even_multiplicity_form(*g));
}

TEST_CASE("conic lying on the sextic is rejected by the pullback form") {
    // sextic = smooth conic * smooth conic * conic: the pullback of any of
    // its conic components vanishes identically
    Fp s3(0, 3);
    auto conic = parse("x^2 + y^2 + z^2", vars_xyz(), s3);  // smooth over F_3
    auto other = parse("x^2 + x*y + z^2 + y^2", vars_xyz(), s3);
    auto sextic = conic * conic * other;
    ff::Field F(3, 1);
    auto g = lattices::conic_pullback_form(ff::lift_poly(sextic, F), ff::lift_poly(conic, F), F);
    REQUIRE(g.has_value());
    CHECK(g->is_zero_poly());
    // and the certified search path treats that as not tangent
    K3Surface<Fp> fake{MultiPoly<Fp>(3), -sextic};
    CHECK_FALSE(lattices::conic_is_tangent(fake, conic, 1));
}

TEST_CASE("Fermat-type sextic over F_5: search agrees with the pointwise oracle") {
    K3Surface<Fp> s{MultiPoly<Fp>(3), -parse("x^6 + y^6 + z^6", vars_xyz(), Fp(0, 5))};
    auto cert = lattices::find_tangent_conic(s, 1);
    if (cert) {
        CHECK(lattices::conic_is_tangent(s, cert->conic_fp, 1));
        CHECK(oracles::pointwise_tangency(s, cert->conic_fp));
    } else {
        // no conic passed; the oracle must reject a sample of smooth conics
        Fp one(1, 5);
        auto probe = parse("x^2 + y^2 + z^2", vars_xyz(), one);
        CHECK_FALSE(oracles::pointwise_tangency(s, probe));
    }
    // cross-check the oracle against the radical-based test on the winning
    // F_3 conic of the main example
    CHECK(oracles::pointwise_tangency(fixtures::surface_f3(), fixtures::tangent_conic_f3()));
}

TEST_CASE("rank-one conclusion") {
    LatticeCertificate c2, c3;
    c2.discriminant = -5;
    c3.discriminant = -32;
    CHECK(lattices::rank_one_conclusion(c2, c3, 2, 2));
    CHECK(lattices::rank_one_conclusion(c3, c2, 2, 2));  // symmetric
    LatticeCertificate c5b = c2;
    CHECK_FALSE(lattices::rank_one_conclusion(c2, c5b, 2, 2));  // product 25 is a square
    CHECK_FALSE(lattices::rank_one_conclusion(c2, c3, 4, 2));
    CHECK_FALSE(lattices::rank_one_conclusion(c2, c3, 2, 4));
    // square-class invariance: scaling either discriminant by a square
    LatticeCertificate c2s = c2, c3s = c3;
    c2s.discriminant = -5 * 49;
    c3s.discriminant = -32 * 9;
    CHECK(lattices::rank_one_conclusion(c2s, c3s, 2, 2) ==
          lattices::rank_one_conclusion(c2, c3, 2, 2));
    LatticeCertificate z = c2;
    z.discriminant = 0;
    CHECK_FALSE(lattices::rank_one_conclusion(z, c3, 2, 2));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(lattices::find_char2_divisor(fixtures::surface_f3()), std::invalid_argument);
    CHECK_THROWS_AS(lattices::find_tangent_conic(fixtures::surface_f2()), std::invalid_argument);
}
