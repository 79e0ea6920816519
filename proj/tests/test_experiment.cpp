#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "tbcodes/code.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/experiment.hpp"
#include "test_util.hpp"

using namespace tb;

TEST_CASE("wilson interval frozen values") {
    WilsonInterval zero = wilson_interval(0, 100);
    CHECK(zero.lo == doctest::Approx(0.0));
    CHECK(zero.hi == doctest::Approx(0.0369940).epsilon(1e-4));

    WilsonInterval half = wilson_interval(50, 100);
    CHECK(half.lo == doctest::Approx(0.4038295).epsilon(1e-4));
    CHECK(half.hi == doctest::Approx(0.5961705).epsilon(1e-4));

    WilsonInterval all = wilson_interval(100, 100);
    CHECK(all.hi == doctest::Approx(1.0));
    CHECK(all.lo == doctest::Approx(1.0 - 0.0369940).epsilon(1e-3));

    CHECK_THROWS_AS(wilson_interval(5, 0), Error);
    CHECK_THROWS_AS(wilson_interval(11, 10), Error);
}

TEST_CASE("rate fit recovers an exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (double d : {3.0, 5.0, 7.0, 9.0}) pts.emplace_back(d, 0.7 * std::pow(d, -2.0));
    RateFit fit = fit_rate_scaling(pts);
    CHECK(fit.alpha == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(fit.beta == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rate fit on the built-in families") {
    // Rotated surface: k/n = 1/d^2 exactly.
    std::vector<std::pair<double, double>> surface;
    for (unsigned d : {3u, 5u, 7u}) {
        StabilizerCode code = build_rotated_surface_code(d);
        surface.emplace_back(d, static_cast<double>(code.k) / code.n);
    }
    CHECK(fit_rate_scaling(surface).beta == doctest::Approx(2.0).epsilon(1e-9));

    // The k = 4 family: rates 4/24, 4/56, 4/88 at distances 3, 5, 7.
    std::vector<std::pair<double, double>> family = {
        {3.0, 4.0 / 24.0}, {5.0, 4.0 / 56.0}, {7.0, 4.0 / 88.0}};
    RateFit fit = fit_rate_scaling(family);
    CHECK(fit.beta == doctest::Approx(1.5436).epsilon(1e-3));
    CHECK(fit.beta > 1.4);
    CHECK(fit.beta < 1.8);
}

TEST_CASE("rate fit input validation") {
    CHECK(tbtest::thrown_kind([] { fit_rate_scaling({{3.0, 0.1}}); }) ==
          ErrorKind::validation);
    CHECK(tbtest::thrown_kind([] { fit_rate_scaling({{3.0, 0.1}, {3.0, 0.2}}); }) ==
          ErrorKind::validation);
    CHECK(tbtest::thrown_kind([] { fit_rate_scaling({{3.0, 0.0}, {5.0, 0.1}}); }) ==
          ErrorKind::validation);
}

TEST_CASE("memory csv round trip") {
    MemoryResult r;
    r.code = "tb12";
    r.n = 12;
    r.k = 2;
    r.d = 3;
    r.rounds = 3;
    r.p_phys = 1e-3;
    r.shots = 50000;
    r.failures = 17;
    r.p_k = 1.1e-4;
    r.p_l = 5.7e-5;
    r.ci_lo = 3.1e-5;
    r.ci_hi = 8.9e-5;
    r.seed = 42;

    std::string text = memory_csv_header() + "\n" + to_csv_row(r) + "\n";
    std::vector<MemoryResult> rows = parse_memory_csv(text);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].code == "tb12");
    CHECK(rows[0].n == 12);
    CHECK(rows[0].rounds == 3);
    CHECK(rows[0].shots == 50000);
    CHECK(rows[0].failures == 17);
    CHECK(rows[0].p_l == doctest::Approx(5.7e-5));
    CHECK(rows[0].seed == 42);
    CHECK_THROWS_AS(parse_memory_csv("not,a,header\n1,2,3\n"), Error);
}

TEST_CASE("noiseless experiments never fail") {
    StabilizerCode code = build_named_code("tb12");
    MemoryResult r = run_memory_experiment(code, Basis::z, 2, 0.0, 500, 9, 3);
    CHECK(r.failures == 0);
    CHECK(r.p_k == 0.0);
    CHECK(r.p_l == 0.0);
    CHECK(r.shots == 500);
    CHECK(r.d == 3);
    CHECK(r.n == 12);
}

TEST_CASE("experiment results are thread-count invariant") {
    StabilizerCode code = build_named_code("tb12");
    MemoryResult a = run_memory_experiment(code, Basis::z, 3, 2e-3, 4000, 31, 3, 1);
    MemoryResult b = run_memory_experiment(code, Basis::z, 3, 2e-3, 4000, 31, 3, 3);
    CHECK(a.failures == b.failures);
    CHECK(a.p_l == b.p_l);
}

TEST_CASE("per-round and per-qubit rates derive from the shot rate") {
    StabilizerCode code = build_named_code("tb12");
    MemoryResult r = run_memory_experiment(code, Basis::z, 3, 3e-3, 20000, 77, 3);
    CHECK(r.failures > 0);
    double shot_rate = static_cast<double>(r.failures) / r.shots;
    double p_k = 1.0 - std::pow(1.0 - shot_rate, 1.0 / r.rounds);
    double p_l = 1.0 - std::pow(1.0 - p_k, 1.0 / r.k);
    CHECK(r.p_k == doctest::Approx(p_k).epsilon(1e-12));
    CHECK(r.p_l == doctest::Approx(p_l).epsilon(1e-12));
    CHECK(r.ci_lo <= r.p_l);
    CHECK(r.ci_hi >= r.p_l);
}

TEST_CASE("random search finds the l=2 m=3 code and is deterministic") {
    auto target = [](size_t k, size_t d) { return k >= 2 && d >= 3; };
    auto hits = random_code_search(2, 3, 2, 2, 6, 400, 5, target);
    REQUIRE(!hits.empty());
    bool found = false;
    for (const SearchHit& hit : hits) {
        StabilizerCode rebuilt = build_code(hit.spec);
        CHECK(rebuilt.k == hit.k);
        CHECK(rebuilt.n == hit.n);
        if (hit.n == 12 && hit.k == 2 && hit.d == 3) found = true;
        // Hits are sorted by k desc, then d desc, then n asc.
    }
    CHECK(found);
    auto again = random_code_search(2, 3, 2, 2, 6, 400, 5, target);
    REQUIRE(again.size() == hits.size());
    for (size_t i = 0; i < hits.size(); ++i) {
        CHECK(again[i].spec == hits[i].spec);
        CHECK(again[i].d == hits[i].d);
    }
}
