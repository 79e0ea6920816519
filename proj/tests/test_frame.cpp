#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "tbcodes/circuit.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/frame_sim.hpp"
#include "tbcodes/schedule.hpp"
#include "tbcodes/tableau_sim.hpp"
#include "test_util.hpp"

using namespace tb;

namespace {

Circuit tb12_memory(size_t rounds, double p) {
    StabilizerCode code = build_named_code("tb12");
    return build_memory_circuit(code, logical_basis(code), rounds, NoiseModel{p}, Basis::z);
}

size_t plane_popcount(const SampleResult& r, size_t plane, bool observable) {
    const uint64_t* words = observable ? r.observable_plane(plane) : r.detector_plane(plane);
    size_t count = 0;
    for (size_t w = 0; w < r.words_per_plane(); ++w)
        count += static_cast<size_t>(__builtin_popcountll(words[w]));
    return count;
}

}  // namespace

TEST_CASE("noiseless sampling is silent") {
    Circuit c = tb12_memory(2, 0.0);
    SampleResult r = sample_circuit(c, 1000, 99);
    CHECK(r.shots == 1000);
    CHECK(r.num_detectors == c.num_detectors);
    CHECK(r.num_observables == c.num_observables);
    for (size_t d = 0; d < r.num_detectors; ++d) CHECK(plane_popcount(r, d, false) == 0);
    for (size_t k = 0; k < r.num_observables; ++k) CHECK(plane_popcount(r, k, true) == 0);
}

TEST_CASE("sampling is independent of the thread count") {
    Circuit c = tb12_memory(3, 0.002);
    SampleResult a = sample_circuit(c, 300, 7, 1);
    SampleResult b = sample_circuit(c, 300, 7, 4);
    CHECK(a.detectors == b.detectors);
    CHECK(a.observables == b.observables);
}

TEST_CASE("certain flips always fire their detector") {
    Circuit c = parse_circuit("# qubits: 1\nR 0\nX_ERROR(1) 0\nM 0\nDETECTOR rec[-1]\n");
    SampleResult r = sample_circuit(c, 128, 5);
    CHECK(plane_popcount(r, 0, false) == 128);
}

TEST_CASE("depolarizing marginals match their closed forms") {
    // DEPOLARIZE1(p) flips a Z measurement with probability 2p/3.
    Circuit c1 = parse_circuit("# qubits: 1\nR 0\nDEPOLARIZE1(0.75) 0\nM 0\nDETECTOR rec[-1]\n");
    size_t shots = 20000;
    SampleResult r1 = sample_circuit(c1, shots, 11);
    double f1 = static_cast<double>(plane_popcount(r1, 0, false)) / shots;
    double expect1 = 0.5;
    double sigma1 = std::sqrt(expect1 * (1 - expect1) / shots);
    CHECK(std::abs(f1 - expect1) < 5 * sigma1);

    // DEPOLARIZE2(p): 8 of 15 components carry an X on a given qubit.
    Circuit c2 = parse_circuit(
        "# qubits: 2\nR 0 1\nDEPOLARIZE2(0.6) 0 1\nM 0 1\n"
        "DETECTOR rec[-2]\nDETECTOR rec[-1]\n");
    SampleResult r2 = sample_circuit(c2, shots, 13);
    for (size_t d = 0; d < 2; ++d) {
        double f = static_cast<double>(plane_popcount(r2, d, false)) / shots;
        double expect = 0.6 * 8 / 15;
        double sigma = std::sqrt(expect * (1 - expect) / shots);
        CHECK(std::abs(f - expect) < 5 * sigma);
    }
}

TEST_CASE("nondeterministic reference circuits are rejected") {
    Circuit c = parse_circuit("# qubits: 1\nH 0\nM 0\nDETECTOR rec[-1]\n");
    CHECK(tbtest::thrown_kind([&] { sample_circuit(c, 64, 1); }) == ErrorKind::contract);
}

TEST_CASE("fault sites enumerate every noise component") {
    Circuit c = parse_circuit(
        "# qubits: 2\nR 0 1\nDEPOLARIZE1(0.1) 0\nDEPOLARIZE2(0.2) 0 1\n"
        "X_ERROR(0.3) 0 1\nM 0 1\nDETECTOR rec[-2]\nDETECTOR rec[-1]\n");
    std::vector<double> probs;
    std::vector<FaultSite> sites = enumerate_fault_sites(c, &probs);
    REQUIRE(sites.size() == 3 + 15 + 2);
    REQUIRE(probs.size() == sites.size());
    double expected_mass = 3 * (0.1 / 3) + 15 * (0.2 / 15) + 2 * 0.3;
    double mass = 0;
    for (double p : probs) mass += p;
    CHECK(mass == doctest::Approx(expected_mass));
}

TEST_CASE("propagated fault effects match tableau insertion") {
    Circuit c = tb12_memory(2, 0.001);
    std::vector<FaultSite> sites = enumerate_fault_sites(c);
    REQUIRE(!sites.empty());

    size_t stride = sites.size() / 40 + 1;
    std::vector<FaultSite> chosen;
    for (size_t i = 0; i < sites.size(); i += stride) chosen.push_back(sites[i]);
    std::vector<FaultEffect> effects = propagate_faults(c, chosen);
    REQUIRE(effects.size() == chosen.size());

    for (size_t i = 0; i < chosen.size(); ++i) {
        const FaultSite& site = chosen[i];
        const Instruction& noise = c.instructions[site.instr];
        Circuit modified = c;

        // Realize the fault as explicit Pauli gates just after its source.
        std::vector<Instruction> inject;
        auto push = [&](InstrKind kind, uint32_t q) {
            Instruction g;
            g.kind = kind;
            g.targets = {q};
            inject.push_back(g);
        };
        auto push_pauli = [&](bool x, bool z, uint32_t q) {
            if (x && z)
                push(InstrKind::gate_y, q);
            else if (x)
                push(InstrKind::gate_x, q);
            else if (z)
                push(InstrKind::gate_z, q);
        };
        if (noise.kind == InstrKind::depolarize2) {
            // slot indexes the target pair, not the flat target list
            uint32_t qa = noise.targets[2 * site.slot];
            uint32_t qb = noise.targets[2 * site.slot + 1];
            push_pauli(site.pauli & 1, site.pauli & 2, qa);
            push_pauli(site.pauli & 4, site.pauli & 8, qb);
        } else {
            uint32_t q = noise.targets[site.slot];
            push_pauli(site.pauli & 1, site.pauli & 2, q);
        }
        modified.instructions.insert(modified.instructions.begin() + site.instr + 1,
                                     inject.begin(), inject.end());

        TableauAnalysis analysis = analyze_circuit(modified);
        std::vector<uint32_t> fired;
        for (uint32_t d = 0; d < modified.num_detectors; ++d)
            if (analysis.detector_values[d]) fired.push_back(d);
        uint64_t obs = 0;
        for (size_t b = 0; b < modified.num_observables; ++b)
            if (analysis.observable_values[b]) obs |= uint64_t{1} << b;

        INFO("site " << i << " instr " << site.instr << " slot " << site.slot
                     << " pauli " << int(site.pauli));
        CHECK(effects[i].detectors == fired);
        CHECK(effects[i].observables == obs);
    }
}

TEST_CASE("b8 packing round trips") {
    Circuit c = tb12_memory(2, 0.01);
    SampleResult r = sample_circuit(c, 200, 21);
    std::vector<uint8_t> bytes = r.pack_b8();
    size_t bytes_per_shot = (r.num_detectors + r.num_observables + 7) / 8;
    CHECK(bytes.size() == 200 * bytes_per_shot);

    SampleResult back = unpack_b8(bytes, 200, r.num_detectors, r.num_observables);
    for (size_t s = 0; s < 200; ++s) {
        for (size_t d = 0; d < r.num_detectors; ++d)
            CHECK(back.detector_bit(s, d) == r.detector_bit(s, d));
        for (size_t k = 0; k < r.num_observables; ++k)
            CHECK(back.observable_bit(s, k) == r.observable_bit(s, k));
    }
    CHECK(tbtest::thrown_kind([&] {
              unpack_b8(bytes, 199, r.num_detectors, r.num_observables);
          }) == ErrorKind::parse);
}

TEST_CASE("elementary fault probabilities respect the pauli encoding") {
    // One-qubit sites use 1 = X, 2 = Z, 3 = Y.
    Circuit c = parse_circuit("# qubits: 1\nR 0\nDEPOLARIZE1(0.3) 0\nM 0\nDETECTOR rec[-1]\n");
    std::vector<FaultSite> sites = enumerate_fault_sites(c);
    REQUIRE(sites.size() == 3);
    std::vector<FaultEffect> effects = propagate_faults(c, sites);
    for (size_t i = 0; i < sites.size(); ++i) {
        bool has_x = sites[i].pauli & 1;
        bool fires = !effects[i].detectors.empty();
        CHECK(fires == has_x);  // only the X component flips a Z readout
    }
}
