#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbcodes/code.hpp"

namespace tb {

enum class InstrKind {
    reset_z,      // R
    reset_x,      // RX
    gate_h,       // H
    gate_cx,      // CX (control, target pairs)
    gate_cz,      // CZ (pairs)
    gate_x,       // X
    gate_y,       // Y
    gate_z,       // Z
    measure_z,    // M
    measure_x,    // MX
    tick,         // TICK
    depolarize1,  // DEPOLARIZE1(p)
    depolarize2,  // DEPOLARIZE2(p) (pairs)
    x_error,      // X_ERROR(p)
    z_error,      // Z_ERROR(p)
    detector,           // targets are absolute measurement-record indices
    observable_include, // arg is the observable index; targets are records
};

bool instr_is_noise(InstrKind kind);
bool instr_is_two_qubit(InstrKind kind);
bool instr_is_measurement(InstrKind kind);
bool instr_is_reset(InstrKind kind);

struct Instruction {
    InstrKind kind;
    std::vector<uint32_t> targets;
    double arg = 0.0;  // probability, or observable index
};

struct NoiseModel {
    double p = 0.0;
};

// Flat instruction list plus the layout metadata needed to classify
// detectors by measurement basis. Detector targets are stored as absolute
// record indices; the text form uses rec[-k] lookback.
struct Circuit {
    uint32_t num_qubits = 0;
    std::vector<Instruction> instructions;
    uint32_t num_measurements = 0;
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;

    // Qubit layout: data 0..num_data-1, X aux next, Z aux last. All zero
    // when the circuit was not built by build_memory_circuit.
    uint32_t num_data = 0;
    uint32_t num_x_aux = 0;
    uint32_t num_z_aux = 0;
    std::optional<Basis> memory_basis;

    void append(Instruction instr);

    bool has_layout() const { return num_data > 0; }
    bool qubit_is_x_aux(uint32_t q) const {
        return q >= num_data && q < num_data + num_x_aux;
    }
    bool qubit_is_z_aux(uint32_t q) const {
        return q >= num_data + num_x_aux && q < num_data + num_x_aux + num_z_aux;
    }
};

// Qubit measured by each record index, in record order.
std::vector<uint32_t> record_qubits(const Circuit& circuit);

// Basis of each detector, decided by the aux qubits its records measure.
// Requires layout metadata and single-basis detectors.
std::vector<Basis> classify_detectors(const Circuit& circuit);

// Round-trip text form. serialize(parse_circuit(s)) is a fixed point.
std::string serialize(const Circuit& circuit);
Circuit parse_circuit(const std::string& text);

}  // namespace tb
