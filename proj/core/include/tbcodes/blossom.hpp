#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tb {

struct MatchingResult {
    std::vector<int32_t> mate;  // mate[v] is v's partner
    int64_t total_weight = 0;   // sum of matched edge weights
};

// Minimum-weight perfect matching on the complete graph over n nodes (n
// even) with a symmetric, nonnegative, row-major n x n weight matrix (the
// diagonal is ignored). Exact Edmonds blossom algorithm, O(n^3) with dual
// variables; deterministic for a fixed input.
MatchingResult min_weight_perfect_matching(size_t n,
                                           const std::vector<int64_t>& weights);

}  // namespace tb
