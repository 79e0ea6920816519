#include <doctest.h>

#include <algorithm>

#include "tbcodes/circuit.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/dem.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/schedule.hpp"
#include "test_util.hpp"

using namespace tb;

TEST_CASE("identical signatures merge with XOR combination") {
    Circuit c = parse_circuit(
        "# qubits: 1\nR 0\nX_ERROR(0.25) 0\nX_ERROR(0.25) 0\nM 0\nDETECTOR rec[-1]\n");
    DetectorErrorModel dem = extract_dem(c);
    REQUIRE(dem.mechanisms.size() == 1);
    CHECK(dem.mechanisms[0].p == doctest::Approx(0.25 * 0.75 + 0.75 * 0.25));
    CHECK(dem.mechanisms[0].detectors == std::vector<uint32_t>{0});
}

TEST_CASE("faults with no effect are dropped") {
    Circuit c = parse_circuit("# qubits: 1\nR 0\nZ_ERROR(0.4) 0\nM 0\nDETECTOR rec[-1]\n");
    DetectorErrorModel dem = extract_dem(c);
    CHECK(dem.mechanisms.empty());
}

TEST_CASE("observable flips are recorded in the mask") {
    Circuit c = parse_circuit(
        "# qubits: 1\nR 0\nX_ERROR(0.125) 0\nM 0\nDETECTOR rec[-1]\n"
        "OBSERVABLE_INCLUDE(0) rec[-1]\n");
    DetectorErrorModel dem = extract_dem(c);
    REQUIRE(dem.mechanisms.size() == 1);
    CHECK(dem.mechanisms[0].observables == 1);
}

TEST_CASE("serialize and parse form a fixed point") {
    StabilizerCode code = build_named_code("tb12");
    Circuit c = build_memory_circuit(code, logical_basis(code), 2, NoiseModel{0.001}, Basis::z);
    DetectorErrorModel dem = extract_dem(c);
    CHECK(!dem.mechanisms.empty());
    std::string text = serialize(dem);
    DetectorErrorModel back = parse_dem(text);
    CHECK(back.num_detectors == dem.num_detectors);
    CHECK(back.num_observables == dem.num_observables);
    CHECK(back.mechanisms.size() == dem.mechanisms.size());
    CHECK(serialize(back) == text);
}

TEST_CASE("dem parser rejects malformed input") {
    CHECK(tbtest::thrown_kind([] {
              parse_dem("# detectors: 2\n# observables: 1\nerror(1.5) D0\n");
          }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] {
              parse_dem("# detectors: 2\n# observables: 1\nerror(0.1) D7\n");
          }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] {
              parse_dem("# detectors: 2\n# observables: 1\nerror(0.1) Q0\n");
          }) == ErrorKind::parse);
}

TEST_CASE("memory circuit models are graphlike per basis") {
    StabilizerCode code = build_named_code("tb12");
    Circuit c = build_memory_circuit(code, logical_basis(code), 3, NoiseModel{0.001}, Basis::z);
    DetectorErrorModel dem = extract_dem(c);
    std::vector<Basis> det_basis = classify_detectors(c);
    for (const FaultMechanism& m : dem.mechanisms) {
        size_t x_count = 0, z_count = 0;
        for (uint32_t d : m.detectors) {
            if (det_basis[d] == Basis::x)
                ++x_count;
            else
                ++z_count;
        }
        CHECK(x_count <= 2);
        CHECK(z_count <= 2);
        CHECK(std::is_sorted(m.detectors.begin(), m.detectors.end()));
        // Observable flips only ride mechanisms that touch the memory basis.
        if (m.observables != 0) CHECK(z_count >= 1);
    }
}

TEST_CASE("observable cap is enforced") {
    // Index 64 exceeds the 64-observable mask, whether the parser or the
    // extractor is the one to notice.
    CHECK_THROWS_AS(
        extract_dem(parse_circuit("# qubits: 1\nR 0\nM 0\nOBSERVABLE_INCLUDE(64) rec[-1]\n")),
        Error);
}
