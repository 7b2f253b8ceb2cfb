#include "k3/fixtures.hpp"

namespace k3::fixtures {

using mpoly::parse;
using mpoly::vars_xyz;

namespace {

template <class C>
QuadricBundle<C> parse_bundle(const std::array<const char*, 10>& forms, const C& sample) {
    QuadricBundle<C> d;
    auto fs = d.fields();
    for (int i = 0; i < 10; ++i) *fs[i] = parse(forms[i], vars_xyz(), sample);
    return d;
}

}  // namespace

QuadricBundle<Int> obstruction_bundle() {
    // L11..L33, Q14, Q24, Q34, C44
    static const std::array<const char*, 10> forms = {
        "2*x + 3*y + z", "3*x + 3*y", "3*x + 4*y", "z", "3*z", "x + 3*z",
        "3*y^2 + 2*z^2", "4*y^2", "4*x^2 + 5*x*y + 5*y^2", "2*x^3 + 3*x^2*z + 3*x*z^2 + 3*z^3"};
    return parse_bundle(forms, Int(0));
}

QuadricBundle<Fp> bundle_f2() {
    static const std::array<const char*, 10> forms = {
        "y + z", "x + y", "x", "z", "z", "x + z", "y^2", "0", "x*y + y^2", "x^2*z + x*z^2 + z^3"};
    return parse_bundle(forms, Fp(0, 2));
}

QuadricBundle<Fp> bundle_f3() {
    static const std::array<const char*, 10> forms = {
        "2*x + z", "0", "y", "z", "0", "x", "2*z^2", "y^2", "x^2 + 2*x*y + 2*y^2", "2*x^3"};
    return parse_bundle(forms, Fp(0, 3));
}

K3Surface<Fp> surface_f2() {
    Fp s(0, 2);
    return {parse("x^2*y + y^3 + y^2*z", vars_xyz(), s),
            parse("x^5*z + x^3*y^2*z + x^2*y^3*z + x^3*y*z^2 + x^2*y^2*z^2 + y^2*z^4 + x*z^5 + y*z^5 + z^6",
                  vars_xyz(), s)};
}

K3Surface<Fp> surface_f3() {
    Fp s(0, 3);
    // w^2 = F with the printed sextic F; stored as w^2 + beta = 0, beta = -F
    MultiPoly<Fp> F = parse(
        "2*x^5*z + x^4*y*z + x^4*z^2 + 2*x^3*y*z^2 + x^2*y^4 + 2*x^2*y^3*z + x^2*y^2*z^2 + "
        "2*x^2*y*z^3 + x*y^3*z^2 + x*y^2*z^3 + 2*x*z^5 + y^6 + 2*y^4*z^2 + y^3*z^3",
        vars_xyz(), s);
    return {MultiPoly<Fp>(3), -F};
}

std::vector<std::vector<MultiPoly<Int>>> obstruction_matrix() {
    Int s(0);
    auto P = [&](const char* str) { return parse(str, vars_xyz(), s); };
    return {{P("4*x + 6*y + 2*z"), P("3*x + 3*y"), P("3*x + 4*y"), P("3*y^2 + 2*z^2")},
            {P("3*x + 3*y"), P("2*z"), P("3*z"), P("4*y^2")},
            {P("3*x + 4*y"), P("3*z"), P("2*x + 6*z"), P("4*x^2 + 5*x*y + 5*y^2")},
            {P("3*y^2 + 2*z^2"), P("4*y^2"), P("4*x^2 + 5*x*y + 5*y^2"),
             P("4*x^3 + 6*x^2*z + 6*x*z^2 + 6*z^3")}};
}

geometry::QuaternionAlgebra obstruction_algebra() {
    Int s(0);
    auto P = [&](const char* str) { return parse(str, vars_xyz(), s); };
    geometry::QuaternionAlgebra A;
    A.alpha = mpoly::RatFunc(P("9*x^2 + 18*x*y - 8*x*z + 9*y^2 - 12*y*z - 4*z^2"),
                             P("2*x + 3*y + z") * P("2*x + 3*y + z") * P("4"));
    A.beta = mpoly::RatFunc(
        -P("9*x^3 + 18*x^2*y + x^2*z + 9*x*y^2 + 3*x*y*z - 10*x*z^2 + 7*y^2*z - 9*y*z^2 - 3*z^3"),
        P("2*x + 3*y + z") * P("9*x^2 + 18*x*y - 8*x*z + 9*y^2 - 12*y*z - 4*z^2"));
    return A;
}

MultiPoly<Fp> tangent_conic_f3() {
    return parse("2*x^2 + 2*x*y + x*z + 2*y^2", vars_xyz(), Fp(0, 3));
}

}  // namespace k3::fixtures
