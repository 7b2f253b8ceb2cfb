// Command-line driver: generate / certify / assemble / count / charpoly /
// brauer / verify, JSON records on stdout, logs on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "k3/pipeline.hpp"

namespace {

using k3::pipeline::json;

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitSearch = 4;
constexpr int kExitInconsistent = 5;
constexpr int kExitInternal = 6;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j, const std::string& record_path) {
    std::string text = j.dump(2);
    if (!record_path.empty()) {
        std::ofstream out(record_path);
        out << text << "\n";
    }
    std::cout << text << "\n";
}

k3::geometry::QuadricBundle<k3::Fp> load_bundle_fp(const std::string& path, bool fixture, int p) {
    if (fixture) {
        if (p == 2) return k3::fixtures::bundle_f2();
        if (p == 3) return k3::fixtures::bundle_f3();
        throw std::invalid_argument("fixture bundles exist for p = 2, 3 only");
    }
    json j = read_json(path);
    if (j.contains("data")) j = j.at("data");
    return k3::pipeline::bundle_from_json_fp(j);
}

int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;  // CLI wins
    if (const char* env = std::getenv("K3BRAUER_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degree-2 K3 surfaces from cubic fourfolds: Picard rank one certification "
                 "and the quaternion Brauer obstruction"};
    app.require_subcommand(1);

    // shared flags
    int prime = 2;
    uint64_t seed = 1;
    int max_n = 0;
    bool long_run = false;
    long height = 64;
    int workers = 0;
    std::string cache_path, record_path, data_path, data2_path, data3_path;
    bool fixture = false;
    int count_n = 1;
    int retry_cap = 10000;

    auto* gen = app.add_subcommand("generate", "draw random smooth fourfold data over F_p");
    gen->add_option("--prime", prime)->required();
    gen->add_option("--seed", seed);
    gen->add_option("--retry-cap", retry_cap);
    gen->add_option("--record", record_path);

    auto* cert = app.add_subcommand("certify", "lower-bound witness, point counts, Weil polynomial, "
                                               "Picard upper bound");
    cert->add_option("--prime", prime)->required();
    cert->add_option("--data", data_path);
    cert->add_flag("--fixture", fixture);
    cert->add_option("--max-n", max_n);
    cert->add_flag("--long-run", long_run);
    cert->add_option("--workers", workers);
    cert->add_option("--cache", cache_path);
    cert->add_option("--record", record_path);

    auto* asm_ = app.add_subcommand("assemble", "CRT lift, quaternion algebra, point search, verdict");
    asm_->add_option("--data2", data2_path);
    asm_->add_option("--data3", data3_path);
    asm_->add_flag("--fixture", fixture);
    asm_->add_option("--height", height);
    asm_->add_option("--record", record_path);

    auto* cnt = app.add_subcommand("count", "raw point count N_n");
    cnt->add_option("--prime", prime)->required();
    cnt->add_option("--data", data_path);
    cnt->add_flag("--fixture", fixture);
    cnt->add_option("--n", count_n)->required();
    cnt->add_option("--workers", workers);
    cnt->add_option("--cache", cache_path);

    auto* chp = app.add_subcommand("charpoly", "traces, Newton coefficients, functional-equation "
                                               "completion from a counts record");
    chp->add_option("--data", data_path)->required();

    auto* brr = app.add_subcommand("brauer", "fiber conic and quaternion algebra of the lifted fourfold");
    brr->add_option("--data2", data2_path);
    brr->add_option("--data3", data3_path);
    brr->add_flag("--fixture", fixture);

    auto* ver = app.add_subcommand("verify", "recompute the verdict from an assemble record");
    ver->add_option("--record", record_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto g = k3::pipeline::cmd_generate(prime, seed, retry_cap);
            json j{{"p", prime}, {"seed", seed}, {"retries", g.retries},
                   {"data", k3::pipeline::bundle_to_json(g.data)}};
            emit(j, record_path);
            return 0;
        }
        if (cert->parsed()) {
            auto data = load_bundle_fp(data_path, fixture, prime);
            k3::pipeline::CountCache cache;
            if (!cache_path.empty()) cache.bind_file(cache_path);
            k3::pipeline::CertifyOptions opt;
            opt.max_n = max_n;
            opt.long_run = long_run;
            opt.workers = resolve_workers(workers);
            if (!cache_path.empty()) opt.cache = &cache;
            auto r = k3::pipeline::cmd_certify(prime, data, opt);
            json j{{"p", prime}, {"data", k3::pipeline::bundle_to_json(data)},
                   {"certify", k3::pipeline::certify_to_json(r)}};
            emit(j, record_path);
            return r.status == "complete" ? 0 : kExitInconsistent;
        }
        if (asm_->parsed()) {
            k3::geometry::QuadricBundle<k3::Fp> d2, d3;
            if (fixture) {
                d2 = k3::fixtures::bundle_f2();
                d3 = k3::fixtures::bundle_f3();
            } else {
                if (data2_path.empty() || data3_path.empty())
                    throw std::invalid_argument("assemble: need --data2/--data3 or --fixture");
                json j2 = read_json(data2_path), j3 = read_json(data3_path);
                // when certificates are present, require the van Luijk pinch
                auto check = [](const json& j) {
                    if (!j.contains("certify")) return;
                    const json& c = j.at("certify");
                    if (!c.contains("upper_bound") ||
                        c.at("upper_bound").at("parity_adjusted").get<int>() != 2)
                        throw std::invalid_argument("assemble: input record not certified to rank 2");
                };
                check(j2);
                check(j3);
                d2 = k3::pipeline::bundle_from_json_fp(j2.contains("data") ? j2.at("data") : j2);
                d3 = k3::pipeline::bundle_from_json_fp(j3.contains("data") ? j3.at("data") : j3);
            }
            k3::pipeline::AssembleOptions opt;
            opt.height = height;
            auto r = k3::pipeline::cmd_assemble(d2, d3, opt);
            emit(k3::pipeline::assemble_to_json(r), record_path);
            if (r.status == "no-rational-point" || r.status == "representative-undefined") {
                std::cerr << "assemble: " << r.status << "\n";
                return kExitSearch;
            }
            return 0;
        }
        if (cnt->parsed()) {
            auto data = load_bundle_fp(data_path, fixture, prime);
            auto s = k3::geometry::k3_from_fourfold(data);
            k3::pipeline::CountCache cache;
            if (!cache_path.empty()) cache.bind_file(cache_path);
            std::string fp = k3::counting::surface_fingerprint(s);
            std::optional<int64_t> cached;
            if (!cache_path.empty()) cached = cache.lookup(fp, prime, count_n);
            int64_t N;
            if (cached) {
                N = *cached;
            } else {
                N = k3::counting::count_points(s, count_n, {resolve_workers(workers), 0});
                if (!cache_path.empty()) cache.store(fp, prime, count_n, N, 0.0);
            }
            emit(json{{"p", prime}, {"n", count_n}, {"N", N}, {"fingerprint", fp}}, "");
            return 0;
        }
        if (chp->parsed()) {
            json j = read_json(data_path);
            const json& c = j.contains("certify") ? j.at("certify") : j;
            int p = j.contains("p") ? j.at("p").get<int>() : c.at("p").get<int>();
            k3::counting::CountSeries cs;
            cs.p = p;
            for (auto& [k, v] : c.at("counts").items()) cs.counts[std::stoi(k)] = v.get<int64_t>();
            int upto = static_cast<int>(cs.counts.size());
            auto traces = k3::counting::traces_from_counts(cs, upto);
            auto coeffs = k3::counting::newton_coefficients(
                std::span<const int64_t>(traces.data(), std::min<size_t>(traces.size(), 12)));
            json out{{"p", p}, {"traces", traces}, {"coefficients", coeffs}};
            if (coeffs.size() >= 12) {
                auto w = k3::counting::complete_charpoly(std::span<const int64_t>(coeffs.data(), 12), p);
                auto ub = k3::counting::picard_upper_bound(w);
                out["weil"] = json{{"p", w.p}, {"sign", w.sign},
                                   {"c", std::vector<int64_t>(w.c.begin(), w.c.end())}};
                out["upper_bound"] = json{{"raw", ub.raw}, {"parity_adjusted", ub.parity_adjusted}};
            }
            emit(out, "");
            return 0;
        }
        if (brr->parsed()) {
            k3::geometry::QuadricBundle<k3::Int> lift;
            if (fixture) {
                lift = k3::fixtures::obstruction_bundle();
            } else {
                if (data2_path.empty() || data3_path.empty())
                    throw std::invalid_argument("brauer: need --data2/--data3 or --fixture");
                auto d2 = k3::pipeline::bundle_from_json_fp(read_json(data2_path));
                auto d3 = k3::pipeline::bundle_from_json_fp(read_json(data3_path));
                lift = k3::geometry::crt_lift(d2, d3);
            }
            auto conic = k3::geometry::fiber_conic(lift);
            auto comp = k3::geometry::complete_squares(conic);
            json out{{"lift", k3::pipeline::bundle_to_json(lift)},
                     {"algebra", k3::pipeline::algebra_to_json(comp.algebra)}};
            emit(out, "");
            return 0;
        }
        if (ver->parsed()) {
            json j = read_json(record_path);
            auto A = k3::pipeline::algebra_from_json(j.at("algebra"));
            auto rational = k3::pipeline::point_from_json(j.at("verdict").at("rational_point"));
            auto real = k3::pipeline::point_from_json(j.at("verdict").at("real_point"));
            auto rec = k3::brauer::obstruction_verdict(A, rational, real);
            json out = k3::pipeline::verdict_to_json(rec);
            bool same = out == j.at("verdict");
            out["matches_record"] = same;
            emit(out, "");
            return same ? 0 : kExitInconsistent;
        }
    } catch (const k3::counting::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const k3::pipeline::SearchFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearch;
    } catch (const k3::counting::InconsistentCounts& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const k3::brauer::RepresentativeUndefined& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearch;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
