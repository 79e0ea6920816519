#pragma once

#include <cstdint>
#include <vector>

#include "tbcodes/circuit.hpp"

namespace tb {

// Stabilizer-state simulator: 2n rows of destabilizers then stabilizers,
// each a signed Pauli. Measurement outcomes that the state leaves free are
// forced to 0 and flagged random; that convention defines the reference
// trajectory the frame sampler perturbs.
class TableauSimulator {
  public:
    explicit TableauSimulator(size_t num_qubits);
    size_t num_qubits() const { return n_; }

    void apply_h(size_t q);
    void apply_s(size_t q);
    void apply_cx(size_t c, size_t t);
    void apply_cz(size_t a, size_t b);
    void apply_x(size_t q);
    void apply_y(size_t q);
    void apply_z(size_t q);

    struct Outcome {
        bool value = false;
        bool random = false;
        // Symplectic row [x | z] of the stabilizer consumed by a random
        // collapse; empty when the outcome was determined.
        std::vector<uint64_t> collapse;
    };

    Outcome measure_z(size_t q);
    Outcome measure_x(size_t q);
    Outcome reset_z(size_t q);  // measure, then flip into |0>
    Outcome reset_x(size_t q);

  private:
    size_t n_;
    size_t words_;                 // words per half-row
    std::vector<uint64_t> xs_, zs_;  // (2n+1) rows; last row is scratch
    std::vector<uint8_t> signs_;

    uint64_t* x_row(size_t r) { return xs_.data() + r * words_; }
    uint64_t* z_row(size_t r) { return zs_.data() + r * words_; }
    bool x_bit(size_t r, size_t q) const { return (xs_[r * words_ + (q >> 6)] >> (q & 63)) & 1; }
    bool z_bit(size_t r, size_t q) const { return (zs_[r * words_ + (q >> 6)] >> (q & 63)) & 1; }
    void rowsum(size_t h, size_t i);
    std::vector<uint64_t> symplectic_row(size_t r) const;
};

struct TableauAnalysis {
    std::vector<uint8_t> measurement_values;
    std::vector<uint8_t> measurement_random;
    std::vector<uint8_t> detector_values;
    std::vector<uint8_t> detector_deterministic;
    std::vector<uint8_t> observable_values;
    std::vector<uint8_t> observable_deterministic;

    bool detectors_deterministic() const;
    bool all_detectors_zero() const;
};

// Runs the circuit (noise channels contribute nothing) and decides, exactly,
// which detectors and observables are independent of every random collapse.
TableauAnalysis analyze_circuit(const Circuit& circuit);

}  // namespace tb
