#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "tbcodes/circuit.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/dem.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/frame_sim.hpp"
#include "tbcodes/matching.hpp"
#include "tbcodes/schedule.hpp"
#include "test_util.hpp"

using namespace tb;

namespace {

DetectorErrorModel manual_dem(size_t detectors, size_t observables,
                              std::vector<FaultMechanism> mechanisms) {
    DetectorErrorModel dem;
    dem.num_detectors = detectors;
    dem.num_observables = observables;
    dem.mechanisms = std::move(mechanisms);
    return dem;
}

}  // namespace

TEST_CASE("code capacity model structure for tb12") {
    StabilizerCode code = build_named_code("tb12");
    DetectorErrorModel dem = code_capacity_dem(code, Basis::z, 0.05);
    CHECK(dem.num_detectors == 6);
    CHECK(dem.num_observables == 2);
    REQUIRE(dem.mechanisms.size() == 12);
    for (size_t q = 0; q < 12; ++q) {
        const FaultMechanism& m = dem.mechanisms[q];
        CHECK(m.p == doctest::Approx(0.05));
        // Detectors are the Z checks containing qubit q.
        std::vector<uint32_t> expected;
        for (size_t r = 0; r < 6; ++r)
            if (code.h_z.get(r, q)) expected.push_back(static_cast<uint32_t>(r));
        CHECK(m.detectors == expected);
        CHECK(expected.size() == 2);
    }
}

TEST_CASE("exact matching agrees with the coset-leader oracle on every syndrome") {
    StabilizerCode code = build_named_code("tb12");
    for (Basis basis : {Basis::z, Basis::x}) {
        double p = 0.01;
        DetectorErrorModel dem = code_capacity_dem(code, basis, p);
        std::vector<Basis> det_basis(6, basis);
        auto graphs = build_graphs(dem, det_basis, basis);
        const MatchingGraph& g = basis == Basis::z ? graphs.second : graphs.first;
        REQUIRE(g.num_nodes() == 6);
        double unit = std::log((1 - p) / p);

        for (uint32_t s = 0; s < 64; ++s) {
            std::vector<uint8_t> bits(6);
            std::vector<uint8_t> syndrome(6, 0);
            for (size_t i = 0; i < 6; ++i) {
                bits[i] = (s >> i) & 1;
                REQUIRE(g.node_of_detector[i] >= 0);
                syndrome[static_cast<size_t>(g.node_of_detector[i])] = bits[i];
            }

            bool brute_ok = true;
            CosetLeader leader;
            try {
                leader = brute_force_decode(code, bits, basis);
            } catch (const Error& e) {
                REQUIRE(e.kind() == ErrorKind::infeasible);
                brute_ok = false;
            }
            bool mwpm_ok = true;
            DecodeResult result;
            try {
                result = mwpm_decode(g, syndrome);
            } catch (const Error& e) {
                REQUIRE(e.kind() == ErrorKind::infeasible);
                mwpm_ok = false;
            }
            INFO("syndrome " << s << " basis " << to_string(basis));
            CHECK(brute_ok == mwpm_ok);
            if (brute_ok) {
                long matched = std::lround(result.weight / unit);
                CHECK(static_cast<size_t>(matched) == leader.weight);
            }
        }
    }
}

TEST_CASE("weight-one errors decode to themselves") {
    StabilizerCode code = build_named_code("tb12");
    double p = 0.01;
    DetectorErrorModel dem = code_capacity_dem(code, Basis::z, p);
    std::vector<Basis> det_basis(6, Basis::z);
    auto graphs = build_graphs(dem, det_basis, Basis::z);
    const MatchingGraph& g = graphs.second;
    // The model's observable masks come from the library's own logical
    // representatives, so the expected flip is read off the same basis.
    LogicalBasis lib = logical_basis(code);

    for (size_t q = 0; q < 12; ++q) {
        std::vector<uint8_t> bits(6, 0);
        for (size_t r = 0; r < 6; ++r)
            if (code.h_z.get(r, q)) bits[r] = 1;
        std::vector<uint8_t> syndrome(6, 0);
        for (size_t i = 0; i < 6; ++i)
            syndrome[static_cast<size_t>(g.node_of_detector[i])] = bits[i];

        DecodeResult result = mwpm_decode(g, syndrome);
        CosetLeader leader = brute_force_decode(code, bits, Basis::z);
        CHECK(leader.pattern == uint64_t{1} << q);
        CHECK(leader.weight == 1);
        uint64_t expected_obs = 0;
        for (size_t i = 0; i < lib.pairs.size(); ++i)
            if (lib.pairs[i].second.z_bit(q)) expected_obs |= uint64_t{1} << i;
        CHECK(result.observables == expected_obs);
    }
}

TEST_CASE("hypergraph mechanisms are rejected") {
    auto dem = manual_dem(3, 0, {{0.1, {0, 1, 2}, 0}});
    std::vector<Basis> det_basis(3, Basis::z);
    CHECK(tbtest::thrown_kind([&] { build_graphs(dem, det_basis, Basis::z); }) ==
          ErrorKind::hypergraph);
}

TEST_CASE("observable flips must touch the memory basis") {
    auto dem = manual_dem(1, 1, {{0.1, {0}, 1}});
    std::vector<Basis> det_basis = {Basis::x};
    CHECK(tbtest::thrown_kind([&] { build_graphs(dem, det_basis, Basis::z); }) ==
          ErrorKind::contract);
}

TEST_CASE("mechanism probabilities above one half are rejected") {
    auto dem = manual_dem(2, 0, {{0.6, {0, 1}, 0}});
    std::vector<Basis> det_basis(2, Basis::z);
    CHECK(tbtest::thrown_kind([&] { build_graphs(dem, det_basis, Basis::z); }) ==
          ErrorKind::contract);
}

TEST_CASE("parallel edges merge or keep the heavier mask") {
    std::vector<Basis> det_basis(2, Basis::z);

    // Same mask: probabilities combine as an XOR of independent flips.
    auto merged = build_graphs(manual_dem(2, 0, {{0.1, {0, 1}, 0}, {0.2, {0, 1}, 0}}),
                               det_basis, Basis::z);
    REQUIRE(merged.second.edges.size() == 1);
    CHECK(merged.second.edges[0].p == doctest::Approx(0.1 * 0.8 + 0.9 * 0.2));

    // Different masks: the more probable mechanism wins.
    auto kept = build_graphs(manual_dem(2, 1, {{0.1, {0, 1}, 1}, {0.2, {0, 1}, 0}}),
                             det_basis, Basis::z);
    REQUIRE(kept.second.edges.size() == 1);
    CHECK(kept.second.edges[0].p == doctest::Approx(0.2));
    CHECK(kept.second.edges[0].observables == 0);
}

TEST_CASE("unmatchable syndromes raise infeasible") {
    auto dem = manual_dem(2, 0, {{0.1, {0, 1}, 0}});
    std::vector<Basis> det_basis(2, Basis::z);
    auto graphs = build_graphs(dem, det_basis, Basis::z);
    std::vector<uint8_t> lone = {1, 0};
    CHECK(tbtest::thrown_kind([&] { mwpm_decode(graphs.second, lone); }) ==
          ErrorKind::infeasible);
}

TEST_CASE("full decoder pipeline keeps the failure rate small") {
    StabilizerCode code = build_named_code("tb12");
    Circuit c = build_memory_circuit(code, logical_basis(code), 3, NoiseModel{0.003}, Basis::z);
    DetectorErrorModel dem = extract_dem(c);
    Decoder decoder(dem, c);

    SampleResult shots = sample_circuit(c, 2000, 17);
    size_t failures = 0;
    for (size_t s = 0; s < shots.shots; ++s) {
        std::vector<uint32_t> fired;
        for (uint32_t d = 0; d < shots.num_detectors; ++d)
            if (shots.detector_bit(s, d)) fired.push_back(d);
        uint64_t truth = 0;
        for (size_t k = 0; k < shots.num_observables; ++k)
            if (shots.observable_bit(s, k)) truth |= uint64_t{1} << k;
        if (decoder.decode(fired).observables != truth) ++failures;
    }
    // At p = 0.003 the failure rate sits near 1e-3; 2000 shots stay far
    // below fifty failures unless decoding is broken.
    CHECK(failures < 50);
}
