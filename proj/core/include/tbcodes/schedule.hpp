#pragma once

#include <array>
#include <vector>

#include "tbcodes/circuit.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/pauli.hpp"

namespace tb {

// Entangling-layer assignment for one syndrome-extraction cycle: for each
// check and each of the four layers, the data qubit it touches (-1 idle).
struct Schedule {
    std::vector<std::array<int, 4>> x_layers;  // per X check
    std::vector<std::array<int, 4>> z_layers;  // per Z check
};

// Deterministic valid schedule. For two-term-by-two-term codes the Z checks
// interleave left/right neighbours as (B1, A1, A2, B2) and the X checks
// mirror it as (B2, A1, A2, B1), which makes every X/Z overlap even. Codes
// built by build_rotated_surface_code use their stored geometric orders.
Schedule make_schedule(const StabilizerCode& code);

// Structurally valid ordering known to break every overlapping X/Z check
// pair; exercises the validator's failure path.
Schedule make_unbracketed_schedule(const StabilizerCode& code);

// A schedule passes when two-cycle memory circuits in both bases have
// all-deterministic, all-zero detectors and when a single-qubit flip on any
// data qubit shows up in exactly the checks containing that qubit.
bool validate_schedule(const StabilizerCode& code, const Schedule& schedule);

// Syndrome-extraction memory experiment. Data qubits come first, then X aux,
// then Z aux. Each cycle: aux reset, H on X aux, four entangling layers,
// H, aux measurement. Detectors compare consecutive rounds (memory-basis
// checks anchor round one); the final transversal data measurement closes
// the memory-basis checks and feeds the logical observables. The logical
// basis may be empty, in which case no observables are emitted.
Circuit build_memory_circuit(const StabilizerCode& code, const LogicalBasis& basis,
                             const Schedule& schedule, size_t rounds, NoiseModel noise,
                             Basis mem_basis);

// Convenience overload using make_schedule(code).
Circuit build_memory_circuit(const StabilizerCode& code, const LogicalBasis& basis,
                             size_t rounds, NoiseModel noise, Basis mem_basis);

}  // namespace tb
