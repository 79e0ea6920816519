#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tbcodes/circuit.hpp"

namespace tb {

// Batched Pauli-frame samples. Bits are stored plane-major: one contiguous
// run of ceil(shots/64) words per detector, then the same for observables,
// so per-plane population counts are single popcount sweeps.
struct SampleResult {
    size_t shots = 0;
    size_t num_detectors = 0;
    size_t num_observables = 0;
    std::vector<uint64_t> detectors;
    std::vector<uint64_t> observables;

    size_t words_per_plane() const { return (shots + 63) / 64; }
    bool detector_bit(size_t shot, size_t d) const;
    bool observable_bit(size_t shot, size_t k) const;
    const uint64_t* detector_plane(size_t d) const {
        return detectors.data() + d * words_per_plane();
    }
    const uint64_t* observable_plane(size_t k) const {
        return observables.data() + k * words_per_plane();
    }

    // Per-shot records, detectors first then observables, each shot padded
    // to a whole number of bytes. Bit i of a byte is bit index (i mod 8).
    std::vector<uint8_t> pack_b8() const;
};

SampleResult unpack_b8(const std::vector<uint8_t>& bytes, size_t shots,
                       size_t num_detectors, size_t num_observables);

// Monte Carlo sampler over the Pauli frame, 64 shots per word. Requires a
// circuit whose detectors and observables are all deterministic under the
// noiseless reference (contract error otherwise). The RNG stream is keyed
// by 64-shot word index, so results are independent of `threads`.
SampleResult sample_circuit(const Circuit& c, size_t shots, uint64_t seed,
                            int threads = 1);

// One elementary fault: a single Pauli component of the noise instruction at
// `instr`. For one-qubit noise `slot` indexes the target and `pauli` is
// 1=X, 2=Z, 3=Y; for two-qubit noise `slot` indexes the target pair
// (qubits targets[2*slot], targets[2*slot+1]) and the bits of `pauli` are
// (X on a, Z on a, X on b, Z on b), nonzero.
struct FaultSite {
    size_t instr = 0;
    uint32_t slot = 0;
    uint8_t pauli = 0;
};

struct FaultEffect {
    std::vector<uint32_t> detectors;  // sorted ascending
    uint64_t observables = 0;
};

// All elementary faults of every noise instruction, with their marginal
// probabilities (p/3 per DEPOLARIZE1 component, p/15 per DEPOLARIZE2
// component, p for X_ERROR / Z_ERROR).
std::vector<FaultSite> enumerate_fault_sites(const Circuit& c,
                                             std::vector<double>* probs = nullptr);

// Deterministic propagation of each fault in isolation through the noiseless
// circuit; effects[i] lists the detectors and observables flipped by
// sites[i]. Runs 64 faults per pass.
std::vector<FaultEffect> propagate_faults(const Circuit& c,
                                          const std::vector<FaultSite>& sites);

}  // namespace tb
