#include "k3/mpoly.hpp"

namespace k3::mpoly {

UniPoly<Int> cyclotomic(int m) {
    if (m < 1) throw std::invalid_argument("cyclotomic: m >= 1 required");
    // t^m - 1
    std::vector<Int> c(m + 1, Int(0));
    c[0] = -1;
    c[m] = 1;
    UniPoly<Int> num{std::move(c)};
    for (int d = 1; d < m; ++d) {
        if (m % d) continue;
        auto [q, r] = UniPoly<Int>::divrem(num, cyclotomic(d));
        if (!r.is_zero_poly()) throw std::logic_error("cyclotomic: inexact division");
        num = std::move(q);
    }
    return num;
}

}  // namespace k3::mpoly
