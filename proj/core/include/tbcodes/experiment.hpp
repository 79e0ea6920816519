#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tbcodes/code.hpp"

namespace tb {

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
WilsonInterval wilson_interval(size_t successes, size_t trials, double z = 1.96);

// One memory-experiment row. p_k is the per-round logical failure rate,
// 1 - (1 - E/N)^(1/rounds); p_l divides that per logical qubit,
// 1 - (1 - p_k)^(1/k). ci_lo/ci_hi transform the Wilson interval on E/N
// through the same maps.
struct MemoryResult {
    std::string code;
    size_t n = 0;
    size_t k = 0;
    size_t d = 0;
    size_t rounds = 0;
    double p_phys = 0.0;
    size_t shots = 0;
    size_t failures = 0;
    double p_k = 0.0;
    double p_l = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    uint64_t seed = 0;
};

// Samples a noisy memory circuit, decodes every shot with exact matching,
// and counts shots where any predicted observable disagrees. d is recorded
// into the result (the caller knows the code distance; it is not recomputed
// here).
MemoryResult run_memory_experiment(const StabilizerCode& code, Basis mem_basis,
                                   size_t rounds, double p, size_t shots,
                                   uint64_t seed, size_t d, int threads = 1);

std::string memory_csv_header();
std::string to_csv_row(const MemoryResult& r);
std::vector<MemoryResult> parse_memory_csv(const std::string& text);

// Least-squares power-law fit R = alpha * d^(-beta) on log-log axes.
// points are (distance, rate) pairs; at least two distinct distances.
struct RateFit {
    double alpha = 0.0;
    double beta = 0.0;
    double residual = 0.0;  // sum of squared log-residuals
};
RateFit fit_rate_scaling(const std::vector<std::pair<double, double>>& points);

struct SearchHit {
    TBCodeSpec spec;
    size_t n = 0;
    size_t k = 0;
    size_t d = 0;
    bool d_exact = false;
};

// Uniform random search over w_a/w_b-term check polynomials on the l x m
// torus with per-term power at most max_power. Each trial draws one
// candidate; duplicates (same reduced translation multiset) are reported
// once. Hits satisfy target(k, d) and come back sorted by k descending,
// then d descending, then n ascending.
std::vector<SearchHit> random_code_search(
    unsigned l, unsigned m, size_t w_a, size_t w_b, unsigned max_power,
    size_t trials, uint64_t seed, const std::function<bool(size_t, size_t)>& target,
    size_t distance_trials = 200);

}  // namespace tb
