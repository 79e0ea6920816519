#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbcodes/pauli.hpp"

namespace tb {

enum class GateKind {
    x, y, z, h, s, s_dag, sqrt_x, sqrt_x_dag,
    c_xyz,        // C: X -> Y -> Z -> X
    c_xyz_prime,  // C': the inverse cycle X -> Z -> Y -> X
    cz, cnot,
};

bool gate_is_two_qubit(GateKind kind);
std::string gate_name(GateKind kind);

struct Gate {
    GateKind kind;
    uint32_t q0 = 0;
    uint32_t q1 = 0;  // two-qubit gates only
};

using CliffordSequence = std::vector<Gate>;

// Text format: one gate per line, 1-based qubit indices, '#' comments.
// Single-qubit gate lines may list several targets ("H 1 3"). Two-qubit
// lines take exactly two ("CZ 1 2"). "C'" is accepted for C_PRIME and
// "CX" for CNOT.
CliffordSequence parse_gate_sequence(const std::string& text);
CliffordSequence parse_gate_sequence_file(const std::string& path);
std::string format_gate_sequence(const CliffordSequence& seq);

// Image of p under conjugation by the sequence applied in circuit order:
// U_k ... U_1 p U_1^dag ... U_k^dag, with the exact sign.
PauliOp conjugate(const PauliOp& p, const CliffordSequence& seq);

struct GateClaim {
    enum class Kind { h, s, cnot };
    Kind kind;
    size_t target0 = 0;  // logical qubit, 0-based
    size_t target1 = 0;  // cnot only
};

// Text forms: "H:1", "S:2", "CNOT:1:2" (1-based logical indices).
GateClaim parse_gate_claim(const std::string& text);

struct GateReport {
    // True when every stabilizer generator maps into the stabilizer group
    // and every logical image stays in the centralizer.
    bool preserves_stabilizers = false;
    // Row i holds the logical coordinates of the image of basis element i,
    // elements ordered X_L1, Z_L1, X_L2, Z_L2, ...
    BitMatrix induced;
    bool matches_claim = false;
    // Sign carried by each basis image; -1 entries need a Pauli frame fix.
    std::vector<int> logical_signs;
    // Signs picked up by the stabilizer generator images.
    std::vector<int> stabilizer_signs;
    bool ok() const { return preserves_stabilizers && matches_claim; }
};

// Expected symplectic action of the claim on logical coordinates.
BitMatrix claim_action(const GateClaim& claim, size_t k);

GateReport verify_logical_gate(const StabilizerCode& code, const LogicalBasis& basis,
                               const CliffordSequence& seq, const GateClaim& claim);

}  // namespace tb
