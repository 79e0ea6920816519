#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "tbcodes/blossom.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/rng.hpp"
#include "test_util.hpp"

using namespace tb;

namespace {

// Minimum matching weight by direct recursion over all pairings.
int64_t exhaustive_min(size_t n, const std::vector<int64_t>& w) {
    std::vector<uint8_t> used(n, 0);
    std::function<int64_t(size_t)> go = [&](size_t done) -> int64_t {
        size_t first = n;
        for (size_t i = 0; i < n; ++i)
            if (!used[i]) {
                first = i;
                break;
            }
        if (first == n) return 0;
        (void)done;
        used[first] = 1;
        int64_t best = INT64_MAX;
        for (size_t j = first + 1; j < n; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            int64_t rest = go(done + 2);
            if (rest != INT64_MAX) best = std::min(best, w[first * n + j] + rest);
            used[j] = 0;
        }
        used[first] = 0;
        return best;
    };
    return go(0);
}

std::vector<int64_t> random_weights(size_t n, RngStream& rng, int64_t max_w) {
    std::vector<int64_t> w(n * n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            int64_t v = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(max_w)));
            w[i * n + j] = v;
            w[j * n + i] = v;
        }
    return w;
}

void check_valid(const MatchingResult& r, size_t n, const std::vector<int64_t>& w) {
    REQUIRE(r.mate.size() == n);
    int64_t total = 0;
    for (size_t v = 0; v < n; ++v) {
        REQUIRE(r.mate[v] >= 0);
        size_t m = static_cast<size_t>(r.mate[v]);
        REQUIRE(m < n);
        CHECK(m != v);
        CHECK(r.mate[m] == static_cast<int32_t>(v));
        if (v < m) total += w[v * n + m];
    }
    CHECK(total == r.total_weight);
}

}  // namespace

TEST_CASE("trivial sizes") {
    std::vector<int64_t> w = {0, 7, 7, 0};
    MatchingResult r = min_weight_perfect_matching(2, w);
    CHECK(r.total_weight == 7);
    check_valid(r, 2, w);
    CHECK(min_weight_perfect_matching(0, {}).total_weight == 0);
}

TEST_CASE("odd node counts are rejected") {
    std::vector<int64_t> w(9, 1);
    CHECK(tbtest::thrown_kind([&] { min_weight_perfect_matching(3, w); }) ==
          ErrorKind::validation);
}

TEST_CASE("matches exhaustive enumeration on random graphs") {
    RngStream rng(31, 0);
    for (size_t n : {4, 6, 8, 10}) {
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<int64_t> w = random_weights(n, rng, 100);
            MatchingResult r = min_weight_perfect_matching(n, w);
            check_valid(r, n, w);
            CHECK(r.total_weight == exhaustive_min(n, w));
        }
    }
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<int64_t> w = random_weights(12, rng, 1000);
        MatchingResult r = min_weight_perfect_matching(12, w);
        check_valid(r, 12, w);
        CHECK(r.total_weight == exhaustive_min(12, w));
    }
}

TEST_CASE("odd cycles force blossom contractions") {
    // Three tight triangles bridged by expensive edges: the optimum must
    // shrink odd sets rather than matching greedily inside triangles.
    size_t n = 6;
    std::vector<int64_t> w(n * n, 50);
    auto set = [&](size_t i, size_t j, int64_t v) {
        w[i * n + j] = v;
        w[j * n + i] = v;
    };
    set(0, 1, 1);
    set(1, 2, 1);
    set(0, 2, 1);  // triangle on {0,1,2}
    set(3, 4, 1);
    set(4, 5, 1);
    set(3, 5, 1);  // triangle on {3,4,5}
    set(2, 3, 4);  // bridge
    MatchingResult r = min_weight_perfect_matching(n, w);
    check_valid(r, n, w);
    CHECK(r.total_weight == exhaustive_min(n, w));
    CHECK(r.total_weight == 1 + 4 + 1);
}

TEST_CASE("zero weights and duplicates are handled") {
    RngStream rng(77, 1);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int64_t> w = random_weights(8, rng, 3);  // many ties
        MatchingResult r = min_weight_perfect_matching(8, w);
        check_valid(r, 8, w);
        CHECK(r.total_weight == exhaustive_min(8, w));
    }
}
