#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "k3/pipeline.hpp"

using namespace k3;
using pipeline::json;

TEST_CASE("seeded generation is deterministic and respects the smoothness contract") {
    auto g1 = pipeline::cmd_generate(2, 42);
    auto g2 = pipeline::cmd_generate(2, 42);
    CHECK(g1.data == g2.data);
    CHECK(g1.retries == g2.retries);
    CHECK(geometry::fourfold_smooth(g1.data));
    auto s = geometry::k3_from_fourfold(g1.data);
    CHECK(geometry::k3_smooth(s).smooth());
    CHECK_FALSE(s.alpha.is_zero_poly());  // smooth char-2 surfaces force alpha != 0

    auto g3 = pipeline::cmd_generate(3, 42);
    CHECK(geometry::fourfold_smooth(g3.data));
    CHECK_THROWS_AS(pipeline::cmd_generate(5, 1), std::invalid_argument);
}

TEST_CASE("certify on the bundled F_2 fixture with a small budget") {
    pipeline::CertifyOptions opt;
    opt.max_n = 6;
    auto r = pipeline::cmd_certify(2, fixtures::bundle_f2(), opt);
    CHECK(r.status == "needs-more-counts");
    CHECK(r.certificate.discriminant == -5);
    for (int n = 1; n <= 6; ++n) CHECK(r.counts.counts.at(n) == fixtures::kCountsP2[n - 1]);
    for (int k = 0; k < 6; ++k) CHECK(r.coefficients[k] == fixtures::kCoeffsP2[k]);
    CHECK_FALSE(r.weil.has_value());
}

TEST_CASE("certify completes at full budget for p = 2") {
    pipeline::CertifyOptions opt;
    auto r = pipeline::cmd_certify(2, fixtures::bundle_f2(), opt);
    CHECK(r.status == "complete");
    REQUIRE(r.upper_bound.has_value());
    CHECK(r.upper_bound->parity_adjusted == 2);
    CHECK(r.weil->sign == +1);
}

TEST_CASE("count cache round-trips and is consulted before recounting") {
    std::string path = "test_cache_tmp.json";
    std::remove(path.c_str());
    {
        pipeline::CountCache cache;
        cache.bind_file(path);
        cache.store("deadbeef00000000", 3, 11, 31380849731, 123.0);
    }
    pipeline::CountCache cache2;
    cache2.bind_file(path);
    REQUIRE(cache2.lookup("deadbeef00000000", 3, 11).has_value());
    CHECK(*cache2.lookup("deadbeef00000000", 3, 11) == 31380849731);
    CHECK_FALSE(cache2.lookup("deadbeef00000000", 3, 12).has_value());
    std::remove(path.c_str());

    // a poisoned cache entry short-circuits counting (proving the lookup path)
    pipeline::CountCache cache3;
    auto s = geometry::k3_from_fourfold(fixtures::bundle_f2());
    auto fp = counting::surface_fingerprint(s);
    cache3.store(fp, 2, 1, 999, 0.0);
    pipeline::CertifyOptions opt;
    opt.max_n = 1;
    opt.cache = &cache3;
    auto r = pipeline::cmd_certify(2, fixtures::bundle_f2(), opt);
    CHECK(r.counts.counts.at(1) == 999);
}

TEST_CASE("long-run gate for p = 3") {
    pipeline::CertifyOptions opt;
    opt.max_n = 11;
    CHECK_THROWS_AS(pipeline::cmd_certify(3, fixtures::bundle_f3(), opt),
                    counting::BudgetExceeded);
    // with the values already cached the gate does not trigger
    pipeline::CountCache cache;
    auto s = geometry::k3_from_fourfold(fixtures::bundle_f3());
    auto fp = counting::surface_fingerprint(s);
    for (int n = 1; n <= 12; ++n) cache.store(fp, 3, n, fixtures::kCountsP3[n - 1], 0.0);
    pipeline::CertifyOptions opt2;
    opt2.max_n = 12;
    opt2.cache = &cache;
    auto r = pipeline::cmd_certify(3, fixtures::bundle_f3(), opt2);
    CHECK(r.status == "complete");
    CHECK(r.upper_bound->parity_adjusted == 2);
    CHECK(r.weil->sign == -1);
    CHECK(r.coefficients[11] == -1062882);
}

TEST_CASE("assemble on the fixture pair reproduces the obstruction") {
    pipeline::AssembleOptions opt;
    opt.height = 16;
    auto r = pipeline::cmd_assemble(fixtures::bundle_f2(), fixtures::bundle_f3(), opt);
    CHECK(r.status == "verdict");
    CHECK(r.lift == fixtures::obstruction_bundle());
    REQUIRE(r.verdict.has_value());
    CHECK(r.verdict->verdict == brauer::Verdict::Obstructed);
    CHECK(r.verdict->hybrid_sum == 1);
    CHECK(r.chosen_rational->x == 15);
    // the printed algebra comes out verbatim
    auto printed = fixtures::obstruction_algebra();
    CHECK(r.completion.algebra.alpha.num == printed.alpha.num);
    CHECK(r.completion.algebra.beta.den == printed.beta.den);

    // height 0: reported, not silently dropped
    pipeline::AssembleOptions h0;
    h0.height = 0;
    auto r0 = pipeline::cmd_assemble(fixtures::bundle_f2(), fixtures::bundle_f3(), h0);
    CHECK(r0.status == "no-rational-point");
    CHECK_FALSE(r0.verdict.has_value());
}

TEST_CASE("records are byte-identical across reruns once timings are stripped") {
    auto run = [&]() {
        auto g = pipeline::cmd_generate(2, 7);
        pipeline::CertifyOptions opt;
        opt.max_n = 6;
        auto c = pipeline::cmd_certify(2, g.data, opt);
        return pipeline::strip_timings(pipeline::prime_record(2, g, c)).dump();
    };
    CHECK(run() == run());
}

TEST_CASE("JSON round-trips for the wire formats") {
    auto b2 = fixtures::bundle_f2();
    CHECK(pipeline::bundle_from_json_fp(pipeline::bundle_to_json(b2)) == b2);
    auto bz = fixtures::obstruction_bundle();
    CHECK(pipeline::bundle_from_json_int(pipeline::bundle_to_json(bz)) == bz);

    brauer::SurfacePoint P;
    P.place = brauer::Place::finite(Int(0));
    P.x = 15;
    P.y = 15;
    P.z = 16;
    P.w = Rat(13752);
    P.both_signs = true;
    auto P2 = pipeline::point_from_json(pipeline::point_to_json(P));
    CHECK(P2.x == P.x);
    CHECK(P2.w == P.w);
    CHECK(P2.both_signs);

    auto A = fixtures::obstruction_algebra();
    auto A2 = pipeline::algebra_from_json(pipeline::algebra_to_json(A));
    CHECK(A2.alpha == A.alpha);
    CHECK(A2.beta == A.beta);

    // malformed bundle JSON is rejected
    json bad = pipeline::bundle_to_json(b2);
    bad["modulus"] = 7;
    CHECK_THROWS_AS(pipeline::bundle_from_json_fp(bad), std::invalid_argument);
}
