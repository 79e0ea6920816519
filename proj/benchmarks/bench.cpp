#include <benchmark/benchmark.h>

#include <vector>

#include "tbcodes/bitmat.hpp"
#include "tbcodes/blossom.hpp"
#include "tbcodes/circuit.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/dem.hpp"
#include "tbcodes/frame_sim.hpp"
#include "tbcodes/matching.hpp"
#include "tbcodes/pauli.hpp"
#include "tbcodes/rng.hpp"
#include "tbcodes/schedule.hpp"

using namespace tb;

namespace {

BitMatrix random_matrix(size_t rows, size_t cols, uint64_t seed) {
    RngStream rng(seed, 0);
    BitMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            if (rng.next() & 1) m.set(i, j, true);
    return m;
}

Circuit memory_circuit(const char* name, size_t rounds, double p) {
    StabilizerCode code = build_named_code(name);
    return build_memory_circuit(code, logical_basis(code), rounds, NoiseModel{p}, Basis::z);
}

void BM_MatmulDense(benchmark::State& state) {
    size_t n = static_cast<size_t>(state.range(0));
    BitMatrix a = random_matrix(n, n, 1);
    BitMatrix b = random_matrix(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}
BENCHMARK(BM_MatmulDense)->Arg(64)->Arg(256);

void BM_Rank(benchmark::State& state) {
    size_t n = static_cast<size_t>(state.range(0));
    BitMatrix m = random_matrix(n, 2 * n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_Rank)->Arg(128)->Arg(512);

void BM_BuildCode(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_named_code("tb88"));
}
BENCHMARK(BM_BuildCode);

void BM_DistanceExact(benchmark::State& state) {
    StabilizerCode code = build_named_code("tb24");
    for (auto _ : state) benchmark::DoNotOptimize(compute_code_distance_exact(code));
}
BENCHMARK(BM_DistanceExact);

void BM_BuildMemoryCircuit(benchmark::State& state) {
    StabilizerCode code = build_named_code("tb56");
    LogicalBasis basis = logical_basis(code);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            build_memory_circuit(code, basis, 5, NoiseModel{1e-3}, Basis::z));
}
BENCHMARK(BM_BuildMemoryCircuit);

void BM_SampleCircuit(benchmark::State& state) {
    Circuit c = memory_circuit("tb12", 3, 1e-3);
    size_t shots = 4096;
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_circuit(c, shots, ++seed));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * shots));
}
BENCHMARK(BM_SampleCircuit);

void BM_ExtractDem(benchmark::State& state) {
    Circuit c = memory_circuit("tb56", 5, 1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(extract_dem(c));
}
BENCHMARK(BM_ExtractDem);

void BM_DecodeShots(benchmark::State& state) {
    Circuit c = memory_circuit("tb12", 3, 3e-3);
    DetectorErrorModel dem = extract_dem(c);
    Decoder decoder(dem, c);
    SampleResult shots = sample_circuit(c, 4096, 11);
    size_t cursor = 0;
    for (auto _ : state) {
        std::vector<uint32_t> fired;
        for (uint32_t d = 0; d < shots.num_detectors; ++d)
            if (shots.detector_bit(cursor, d)) fired.push_back(d);
        benchmark::DoNotOptimize(decoder.decode(fired));
        cursor = (cursor + 1) % shots.shots;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DecodeShots);

void BM_Blossom(benchmark::State& state) {
    size_t n = static_cast<size_t>(state.range(0));
    RngStream rng(9, 4);
    std::vector<int64_t> w(n * n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            int64_t v = static_cast<int64_t>(rng.next_below(1 << 20));
            w[i * n + j] = v;
            w[j * n + i] = v;
        }
    for (auto _ : state) benchmark::DoNotOptimize(min_weight_perfect_matching(n, w));
}
BENCHMARK(BM_Blossom)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
