#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include <json.hpp>

#include "k3/brauer.hpp"
#include "k3/counting.hpp"
#include "k3/fixtures.hpp"
#include "k3/lattices.hpp"

namespace k3::pipeline {

using nlohmann::json;

struct SearchFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic seeded generator; uniform draws use rejection sampling so
/// results are identical across platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    uint64_t uniform(uint64_t bound) {
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            uint64_t r = eng_();
            if (r < limit) return r % bound;
        }
    }

  private:
    std::mt19937_64 eng_;
};

struct GenerateResult {
    geometry::QuadricBundle<Fp> data;
    int retries = 0;
};

/// Step 1: random forms over F_p (p in {2,3}), rejected until both the
/// fourfold and its K3 surface are smooth.
GenerateResult cmd_generate(int p, uint64_t seed, int retry_cap = 10000);

/// Count cache keyed by (surface fingerprint, p, n).
class CountCache {
  public:
    struct Entry {
        int64_t N = 0;
        double wall_seconds = 0;
    };
    std::optional<int64_t> lookup(const std::string& fp, int p, int n) const;
    void store(const std::string& fp, int p, int n, int64_t N, double wall_seconds);
    void bind_file(const std::string& path);  // loads now, saves on every store
    json to_json() const;
    void from_json(const json& j);
    size_t size() const { return entries_.size(); }

  private:
    void save() const;
    std::map<std::tuple<std::string, int, int>, Entry> entries_;
    std::string path_;
};

struct CertifyOptions {
    int max_n = 0;  // 0 = default for p (12 for p=2, 10 for p=3; 12 with long_run)
    bool long_run = false;
    int workers = 1;
    uint64_t point_cap = 0;
    CountCache* cache = nullptr;
};

struct CertifyResult {
    geometry::K3Surface<Fp> surface;
    lattices::LatticeCertificate certificate;
    counting::CountSeries counts;
    std::vector<int64_t> traces;
    std::vector<int64_t> coefficients;
    std::optional<counting::WeilPolynomial> weil;
    std::optional<counting::PicardBound> upper_bound;
    std::string status;  // "complete" | "needs-more-counts"
    double wall_seconds = 0;
};

/// Steps 2-3: divisor/conic lower bound, point counts, Newton coefficients,
/// functional-equation completion, Picard upper bound.
CertifyResult cmd_certify(int p, const geometry::QuadricBundle<Fp>& data, const CertifyOptions& opt);

struct AssembleOptions {
    long height = 64;
    long real_height = 8;
};

struct AssembleResult {
    geometry::QuadricBundle<Int> lift;
    geometry::K3Surface<Int> surface;
    geometry::FiberConic<Int> conic;
    geometry::CompletionRecord completion;
    std::vector<brauer::SurfacePoint> rational_points;
    int excluded_points = 0;
    std::optional<brauer::SurfacePoint> chosen_rational;
    std::optional<brauer::SurfacePoint> chosen_real;
    std::optional<brauer::VerdictRecord> verdict;
    std::string status;  // "verdict" | "no-rational-point" | "representative-undefined"
};

/// Step 4: CRT lift, K3 over Q, fiber conic, completed squares, point
/// search, real point selection, local invariants.
AssembleResult cmd_assemble(const geometry::QuadricBundle<Fp>& data2,
                            const geometry::QuadricBundle<Fp>& data3, const AssembleOptions& opt);

// -- JSON (all canonical-string polynomials; objects have sorted keys) --

json bundle_to_json(const geometry::QuadricBundle<Fp>& d);
json bundle_to_json(const geometry::QuadricBundle<Int>& d);
geometry::QuadricBundle<Fp> bundle_from_json_fp(const json& j);
geometry::QuadricBundle<Int> bundle_from_json_int(const json& j);

template <class C>
json surface_to_json(const geometry::K3Surface<C>& s) {
    return json{{"alpha", mpoly::to_string(s.alpha, mpoly::vars_xyz())},
                {"beta", mpoly::to_string(s.beta, mpoly::vars_xyz())}};
}

json certificate_to_json(const lattices::LatticeCertificate& c);
json point_to_json(const brauer::SurfacePoint& p);
brauer::SurfacePoint point_from_json(const json& j);
json ratfunc_to_json(const mpoly::RatFunc& f);
mpoly::RatFunc ratfunc_from_json(const json& j);
json algebra_to_json(const geometry::QuaternionAlgebra& a);
geometry::QuaternionAlgebra algebra_from_json(const json& j);
json verdict_to_json(const brauer::VerdictRecord& v);
json certify_to_json(const CertifyResult& r);
json assemble_to_json(const AssembleResult& r);

/// Full pipeline record for one prime (generate + certify).
json prime_record(int p, const GenerateResult& g, const CertifyResult& c);

/// Strip volatile timing fields for determinism comparisons.
json strip_timings(json j);

}  // namespace k3::pipeline
