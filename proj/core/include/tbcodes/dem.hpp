#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbcodes/circuit.hpp"

namespace tb {

// One independent error mechanism: with probability p it flips the listed
// detectors and the observables in the mask.
struct FaultMechanism {
    double p = 0.0;
    std::vector<uint32_t> detectors;  // sorted ascending
    uint64_t observables = 0;
};

struct DetectorErrorModel {
    size_t num_detectors = 0;
    size_t num_observables = 0;
    std::vector<FaultMechanism> mechanisms;
};

// Propagates every elementary fault of the circuit noise channels and merges
// the ones with identical detector/observable signatures (XOR of independent
// flips: p = p1(1-p2) + p2(1-p1)). Components that flip nothing are dropped.
// Requires at most 64 observables.
DetectorErrorModel extract_dem(const Circuit& circuit);

// Text form, one "error(p) D3 D7 L0" line per mechanism.
// serialize(parse_dem(s)) is a fixed point.
std::string serialize(const DetectorErrorModel& dem);
DetectorErrorModel parse_dem(const std::string& text);

}  // namespace tb
