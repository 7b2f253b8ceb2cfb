#include "k3/pipeline.hpp"

#include <chrono>
#include <fstream>

namespace k3::pipeline {

using geometry::K3Surface;
using geometry::QuadricBundle;
using mpoly::MultiPoly;
using mpoly::vars_xyz;

namespace {

std::vector<mpoly::Monomial> monomials_of_degree(int d) {
    std::vector<mpoly::Monomial> out;
    for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
            mpoly::Monomial m = mpoly::Monomial::one(3);
            m.e[0] = static_cast<uint8_t>(a);
            m.e[1] = static_cast<uint8_t>(b);
            m.e[2] = static_cast<uint8_t>(d - a - b);
            out.push_back(m);
        }
    std::sort(out.begin(), out.end(),
              [](const mpoly::Monomial& x, const mpoly::Monomial& y) { return grevlex_less(y, x); });
    return out;
}

MultiPoly<Fp> random_form(Rng& rng, int p, int degree) {
    MultiPoly<Fp> f(3);
    for (const auto& m : monomials_of_degree(degree)) {
        int c = static_cast<int>(rng.uniform(p));
        if (c) f = f + MultiPoly<Fp>::term(m, Fp(c, p));
    }
    return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GenerateResult cmd_generate(int p, uint64_t seed, int retry_cap) {
    if (p != 2 && p != 3) throw std::invalid_argument("generate: p must be 2 or 3");
    Rng rng(seed);
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        QuadricBundle<Fp> d;
        auto fs = d.fields();
        static constexpr int deg[10] = {1, 1, 1, 1, 1, 1, 2, 2, 2, 3};
        for (int i = 0; i < 10; ++i) *fs[i] = random_form(rng, p, deg[i]);
        if (!geometry::fourfold_smooth(d)) continue;
        if (!geometry::k3_smooth(geometry::k3_from_fourfold(d)).smooth()) continue;
        return {std::move(d), attempt};
    }
    throw SearchFailed("generate: retry cap exceeded without a smooth pair");
}

std::optional<int64_t> CountCache::lookup(const std::string& fp, int p, int n) const {
    auto it = entries_.find({fp, p, n});
    if (it == entries_.end()) return std::nullopt;
    return it->second.N;
}

void CountCache::store(const std::string& fp, int p, int n, int64_t N, double wall_seconds) {
    entries_[{fp, p, n}] = {N, wall_seconds};
    if (!path_.empty()) save();
}

void CountCache::bind_file(const std::string& path) {
    path_ = path;
    std::ifstream in(path);
    if (in) {
        json j;
        in >> j;
        from_json(j);
    }
}

json CountCache::to_json() const {
    json arr = json::array();
    for (auto& [key, e] : entries_) {
        auto& [fp, p, n] = key;
        arr.push_back({{"fingerprint", fp}, {"p", p}, {"n", n}, {"N", e.N}, {"wall_seconds", e.wall_seconds}});
    }
    return json{{"entries", arr}};
}

void CountCache::from_json(const json& j) {
    for (auto& e : j.at("entries")) {
        entries_[{e.at("fingerprint").get<std::string>(), e.at("p").get<int>(), e.at("n").get<int>()}] = {
            e.at("N").get<int64_t>(), e.value("wall_seconds", 0.0)};
    }
}

void CountCache::save() const {
    std::ofstream out(path_);
    out << to_json().dump(2) << "\n";
}

CertifyResult cmd_certify(int p, const QuadricBundle<Fp>& data, const CertifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    if (p != 2 && p != 3) throw std::invalid_argument("certify: p must be 2 or 3");
    if (!geometry::fourfold_smooth(data)) throw std::invalid_argument("certify: fourfold not smooth");
    CertifyResult res;
    res.surface = geometry::k3_from_fourfold(data);
    if (!geometry::k3_smooth(res.surface).smooth()) throw std::invalid_argument("certify: surface not smooth");

    // Step 2: lower-bound witness
    std::optional<lattices::LatticeCertificate> cert =
        (p == 2) ? lattices::find_char2_divisor(res.surface) : lattices::find_tangent_conic(res.surface);
    if (!cert) throw SearchFailed("certify: no lower-bound witness found (restart generation)");
    res.certificate = std::move(*cert);

    // Step 3: counts and the characteristic polynomial
    int max_n = opt.max_n;
    if (max_n == 0) max_n = (p == 2 || opt.long_run) ? 12 : 10;
    res.counts.p = p;
    res.counts.fingerprint = counting::surface_fingerprint(res.surface);
    for (int n = 1; n <= max_n; ++n) {
        std::optional<int64_t> cached =
            opt.cache ? opt.cache->lookup(res.counts.fingerprint, p, n) : std::nullopt;
        if (cached) {
            res.counts.counts[n] = *cached;
            continue;
        }
        if (p == 3 && n > 10 && !opt.long_run)
            throw counting::BudgetExceeded("certify: counting F_{3^n} beyond n = 10 needs --long-run");
        auto tc = std::chrono::steady_clock::now();
        int64_t N = counting::count_points(res.surface, n, {opt.workers, opt.point_cap});
        double secs = seconds_since(tc);
        res.counts.counts[n] = N;
        if (opt.cache) opt.cache->store(res.counts.fingerprint, p, n, N, secs);
    }
    res.traces = counting::traces_from_counts(res.counts, max_n);
    res.coefficients = counting::newton_coefficients(
        std::span<const int64_t>(res.traces.data(), std::min<size_t>(res.traces.size(), 12)));
    if (res.coefficients.size() >= 12) {
        res.weil = counting::complete_charpoly(std::span<const int64_t>(res.coefficients.data(), 12), p);
        res.upper_bound = counting::picard_upper_bound(*res.weil);
        res.status = "complete";
    } else {
        res.status = "needs-more-counts";
    }
    res.wall_seconds = seconds_since(t0);
    return res;
}

AssembleResult cmd_assemble(const QuadricBundle<Fp>& data2, const QuadricBundle<Fp>& data3,
                            const AssembleOptions& opt) {
    AssembleResult res;
    res.lift = geometry::crt_lift(data2, data3);
    if (!(geometry::reduce_bundle(res.lift, 2) == data2) || !(geometry::reduce_bundle(res.lift, 3) == data3))
        throw std::logic_error("assemble: CRT round-trip failed");
    res.surface = geometry::k3_from_fourfold(res.lift);
    res.conic = geometry::fiber_conic(res.lift);
    res.completion = geometry::complete_squares(res.conic);
    const geometry::QuaternionAlgebra& A = res.completion.algebra;

    res.rational_points = brauer::search_rational_points(res.surface, opt.height);
    for (const auto& P : res.rational_points) {
        try {
            auto [a, b] = brauer::evaluate_algebra(A, P);
            if (is_zero(a) || is_zero(b)) {
                ++res.excluded_points;
                continue;
            }
        } catch (const brauer::RepresentativeUndefined&) {
            ++res.excluded_points;
            continue;
        }
        if (!res.chosen_rational) res.chosen_rational = P;
    }
    if (res.rational_points.empty()) {
        res.status = "no-rational-point";
        return res;
    }
    if (!res.chosen_rational) {
        res.status = "representative-undefined";
        return res;
    }

    // real point: prefer an infinity invariant differing from the rational
    // point's; search integer shells in deterministic order
    auto [ar, br] = brauer::evaluate_algebra(A, *res.chosen_rational);
    int inv_rat = brauer::hilbert_symbol(ar, br, brauer::Place::infinite());
    MultiPoly<Int> F = res.surface.branch_sextic();
    std::optional<brauer::SurfacePoint> fallback;
    for (long r = 0; r <= opt.real_height && !res.chosen_real; ++r) {
        for (long x = -r; x <= r && !res.chosen_real; ++x)
            for (long y = -r; y <= r && !res.chosen_real; ++y)
                for (long z = -r; z <= r && !res.chosen_real; ++z) {
                    if (std::max({labs(x), labs(y), labs(z)}) != r) continue;
                    if (!x && !y && !z) continue;
                    std::array<Int, 3> pt{Int(x), Int(y), Int(z)};
                    Int val = F.eval(std::span<const Int>(pt.data(), 3));
                    if (sgn(val) < 0) continue;
                    brauer::SurfacePoint P;
                    P.place = brauer::Place::infinite();
                    P.x = pt[0];
                    P.y = pt[1];
                    P.z = pt[2];
                    P.f_value = Rat(val);
                    try {
                        auto [a, b] = brauer::evaluate_algebra(A, P);
                        if (is_zero(a) || is_zero(b)) continue;
                        if (!fallback) fallback = P;
                        if (brauer::hilbert_symbol(a, b, brauer::Place::infinite()) != inv_rat)
                            res.chosen_real = P;
                    } catch (const brauer::RepresentativeUndefined&) {
                        continue;
                    }
                }
    }
    if (!res.chosen_real) res.chosen_real = fallback;
    if (!res.chosen_real) {
        res.status = "representative-undefined";
        return res;
    }
    res.verdict = brauer::obstruction_verdict(A, *res.chosen_rational, *res.chosen_real);
    res.status = "verdict";
    return res;
}

// ---------------- JSON ----------------

namespace {

template <class C>
json bundle_json(const QuadricBundle<C>& d, int modulus) {
    json j;
    j["modulus"] = modulus;
    auto fs = d.fields();
    auto names = QuadricBundle<C>::field_names();
    for (int i = 0; i < 10; ++i) j[names[i]] = mpoly::to_string(*fs[i], vars_xyz());
    return j;
}

}  // namespace

json bundle_to_json(const QuadricBundle<Fp>& d) {
    int p = 0;
    for (auto* f : d.fields())
        if (!f->is_zero_poly()) p = f->leading().second.p;
    return bundle_json(d, p);
}

json bundle_to_json(const QuadricBundle<Int>& d) { return bundle_json(d, 0); }

QuadricBundle<Fp> bundle_from_json_fp(const json& j) {
    int p = j.at("modulus").get<int>();
    if (p != 2 && p != 3) throw std::invalid_argument("bundle: modulus must be 2 or 3");
    QuadricBundle<Fp> d;
    auto fs = d.fields();
    auto names = QuadricBundle<Fp>::field_names();
    for (int i = 0; i < 10; ++i)
        *fs[i] = mpoly::parse(j.at(names[i]).get<std::string>(), vars_xyz(), Fp(0, p));
    d.check_degrees();
    return d;
}

QuadricBundle<Int> bundle_from_json_int(const json& j) {
    if (j.at("modulus").get<int>() != 0) throw std::invalid_argument("bundle: expected modulus 0");
    QuadricBundle<Int> d;
    auto fs = d.fields();
    auto names = QuadricBundle<Int>::field_names();
    for (int i = 0; i < 10; ++i)
        *fs[i] = mpoly::parse(j.at(names[i]).get<std::string>(), vars_xyz(), Int(0));
    d.check_degrees();
    return d;
}

json certificate_to_json(const lattices::LatticeCertificate& c) {
    json w;
    if (c.kind == "char2-divisor") {
        w["l"] = mpoly::to_string(c.witness_l, vars_xyz());
        w["c"] = mpoly::to_string(c.witness_c, vars_xyz());
        w["gamma_prime_c"] = mpoly::to_string(c.witness_gamma_prime_c, vars_xyz());
    } else {
        w["conic"] = c.conic_text;
        w["field_degree"] = c.conic_field_degree;
    }
    return json{{"p", c.p},
                {"kind", c.kind},
                {"witness", w},
                {"gram", {{c.gram[0][0], c.gram[0][1]}, {c.gram[1][0], c.gram[1][1]}}},
                {"discriminant", c.discriminant}};
}

json point_to_json(const brauer::SurfacePoint& p) {
    json j;
    j["place"] = p.place.key();
    j["x"] = p.x.get_str();
    j["y"] = p.y.get_str();
    j["z"] = p.z.get_str();
    if (p.place.real) {
        j["f_value"] = p.f_value.get_str();
    } else {
        j["w"] = p.w.get_str();
        j["both_signs"] = p.both_signs;
    }
    return j;
}

brauer::SurfacePoint point_from_json(const json& j) {
    brauer::SurfacePoint p;
    std::string place = j.at("place").get<std::string>();
    p.place = place == "real" ? brauer::Place::infinite() : brauer::Place::finite(Int(place));
    p.x = Int(j.at("x").get<std::string>());
    p.y = Int(j.at("y").get<std::string>());
    p.z = Int(j.at("z").get<std::string>());
    if (p.place.real) {
        p.f_value = Rat(j.at("f_value").get<std::string>());
    } else {
        p.w = Rat(j.at("w").get<std::string>());
        p.both_signs = j.value("both_signs", false);
    }
    return p;
}

json ratfunc_to_json(const mpoly::RatFunc& f) {
    return json{{"num", mpoly::to_string(f.num, vars_xyz())}, {"den", mpoly::to_string(f.den, vars_xyz())}};
}

mpoly::RatFunc ratfunc_from_json(const json& j) {
    return mpoly::RatFunc(mpoly::parse(j.at("num").get<std::string>(), vars_xyz(), Int(0)),
                          mpoly::parse(j.at("den").get<std::string>(), vars_xyz(), Int(0)));
}

json algebra_to_json(const geometry::QuaternionAlgebra& a) {
    return json{{"alpha", ratfunc_to_json(a.alpha)}, {"beta", ratfunc_to_json(a.beta)}};
}

geometry::QuaternionAlgebra algebra_from_json(const json& j) {
    return {ratfunc_from_json(j.at("alpha")), ratfunc_from_json(j.at("beta"))};
}

json verdict_to_json(const brauer::VerdictRecord& v) {
    json inv;
    for (auto& [k, val] : v.rational_invariants) inv[k] = val ? "1/2" : "0";
    return json{{"rational_point", point_to_json(v.rational_point)},
                {"real_point", point_to_json(v.real_point)},
                {"invariants", inv},
                {"rational_sum", v.rational_sum ? "1/2" : "0"},
                {"inv_infinity_rational", v.inv_infinity_rational ? "1/2" : "0"},
                {"inv_infinity_real", v.inv_infinity_real ? "1/2" : "0"},
                {"hybrid_sum", v.hybrid_sum ? "1/2" : "0"},
                {"verdict", v.verdict == brauer::Verdict::Obstructed ? "OBSTRUCTED" : "NOT_OBSTRUCTED"}};
}

json certify_to_json(const CertifyResult& r) {
    json counts;
    for (auto& [n, N] : r.counts.counts) counts[std::to_string(n)] = N;
    json j{{"surface", surface_to_json(r.surface)},
           {"fingerprint", r.counts.fingerprint},
           {"certificate", certificate_to_json(r.certificate)},
           {"counts", counts},
           {"traces", r.traces},
           {"coefficients", r.coefficients},
           {"status", r.status},
           {"timings", json{{"wall_seconds", r.wall_seconds}}}};
    if (r.weil) {
        j["weil"] = json{{"p", r.weil->p}, {"sign", r.weil->sign},
                         {"c", std::vector<int64_t>(r.weil->c.begin(), r.weil->c.end())}};
    }
    if (r.upper_bound)
        j["upper_bound"] = json{{"raw", r.upper_bound->raw}, {"parity_adjusted", r.upper_bound->parity_adjusted}};
    return j;
}

json assemble_to_json(const AssembleResult& r) {
    json pts = json::array();
    for (auto& p : r.rational_points) pts.push_back(point_to_json(p));
    json conic;
    static const char* names[6] = {"p14^2", "p14*p24", "p14*p34", "p24^2", "p24*p34", "p34^2"};
    for (int i = 0; i < 6; ++i) conic[names[i]] = mpoly::to_string(r.conic.coeff[i], vars_xyz());
    json j{{"lift", bundle_to_json(r.lift)},
           {"surface", surface_to_json(r.surface)},
           {"fiber_conic", conic},
           {"algebra", algebra_to_json(r.completion.algebra)},
           {"rational_points", pts},
           {"excluded_points", r.excluded_points},
           {"status", r.status}};
    if (r.chosen_rational) j["chosen_rational"] = point_to_json(*r.chosen_rational);
    if (r.chosen_real) j["chosen_real"] = point_to_json(*r.chosen_real);
    if (r.verdict) j["verdict"] = verdict_to_json(*r.verdict);
    return j;
}

json prime_record(int p, const GenerateResult& g, const CertifyResult& c) {
    return json{{"p", p}, {"data", bundle_to_json(g.data)}, {"retries", g.retries},
                {"certify", certify_to_json(c)}};
}

json strip_timings(json j) {
    if (j.is_object()) {
        j.erase("timings");
        j.erase("wall_seconds");
        for (auto& [k, v] : j.items()) v = strip_timings(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_timings(v);
    }
    return j;
}

}  // namespace k3::pipeline
