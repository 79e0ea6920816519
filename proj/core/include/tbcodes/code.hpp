#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbcodes/bitmat.hpp"

namespace tb {

enum class Basis { x, z };
const char* to_string(Basis basis);

// Generators of the translation group acting on the l x m torus of left (or
// right) qubits: x shifts the first coordinate, y the second, z both.
enum class Axis { x, y, z };
const char* to_string(Axis axis);

struct Monomial {
    Axis axis = Axis::x;
    unsigned power = 0;
    bool operator==(const Monomial&) const = default;
};

// Reduced torus translation (i, j): S_l^i (x) S_m^j.
struct ExponentPair {
    unsigned i = 0;
    unsigned j = 0;
    bool operator==(const ExponentPair&) const = default;
    bool operator<(const ExponentPair& o) const { return i != o.i ? i < o.i : j < o.j; }
};

// Two-term-polynomial description of a trivariate bicycle code: check
// polynomials A and B over the group algebra F2[Z_l x Z_m].
struct TBCodeSpec {
    unsigned l = 1;
    unsigned m = 1;
    std::vector<Monomial> a_terms;
    std::vector<Monomial> b_terms;

    ExponentPair canonical(const Monomial& t) const;
    // Throws validation errors: l or m zero, empty polynomial, or two terms
    // of one polynomial reducing to the same torus translation.
    void validate() const;

    std::string to_json() const;
    static TBCodeSpec from_json(const std::string& text);
    static TBCodeSpec from_json_file(const std::string& path);

    bool operator==(const TBCodeSpec&) const = default;
};

struct StabilizerCode {
    std::string name;
    size_t n = 0;
    BitMatrix h_x;  // checks as rows: [A | B] for TB codes
    BitMatrix h_z;  // [B^T | A^T] for TB codes
    size_t k = 0;

    // TB-specific fields; absent for surface codes and hand-built codes.
    std::optional<TBCodeSpec> spec;
    std::optional<BitMatrix> a_block;
    std::optional<BitMatrix> b_block;

    // Surface-specific fields.
    std::optional<unsigned> surface_distance;
    // Per check, data qubit touched in each of the 4 entangling layers
    // (-1 = idle), fixed by plaquette geometry.
    std::vector<std::array<int, 4>> surface_x_order;
    std::vector<std::array<int, 4>> surface_z_order;

    size_t num_checks() const { return h_x.rows() + h_z.rows(); }
};

// The lm x lm block for polynomial A ('a') or B ('b') of the spec.
BitMatrix build_matrix(const TBCodeSpec& spec, char which);

StabilizerCode build_code(const TBCodeSpec& spec);

// Logical qubit count. TB codes use 2 * dim(ker A  ^  ker B) cross-checked
// against n - rank(h_x) - rank(h_z); other codes use the rank formula alone.
size_t compute_k(const StabilizerCode& code);

constexpr uint64_t kDefaultEnumerationCap = uint64_t{1} << 26;

// Exact minimum weight of a logical operator of the given Pauli type
// (basis z: vectors in ns(h_x) \ rowspace(h_z); basis x: the transpose roles)
// by Gray-code enumeration of the full nullspace. Throws a capacity error if
// 2^dim exceeds cap.
size_t compute_distance_exact(const StabilizerCode& code, Basis basis,
                              uint64_t cap = kDefaultEnumerationCap);

// Exact code distance: minimum over both bases. Same capacity contract.
size_t compute_code_distance_exact(const StabilizerCode& code,
                                   uint64_t cap = kDefaultEnumerationCap);

struct DistanceEstimate {
    size_t distance = 0;
    bool exact = false;
};

// Randomized information-set upper bound on the code distance; routes to the
// exhaustive path (exact result) whenever it fits under cap. Every returned
// value is the weight of a verified logical operator.
DistanceEstimate estimate_distance(const StabilizerCode& code, size_t trials, uint64_t seed,
                                   uint64_t cap = kDefaultEnumerationCap);

struct PartitionReport {
    unsigned l = 0;
    size_t left_components = 0;
    size_t right_components = 0;
    // True iff both incidence graphs split into exactly l connected components.
    bool splits_into_l_blocks = false;
    std::vector<std::vector<size_t>> left_qubit_components;
    std::vector<std::vector<size_t>> right_qubit_components;
};

// Connectivity of (Z checks <-> left qubits) and (X checks <-> right qubits).
PartitionReport check_left_right_partition(const StabilizerCode& code);

// Standard rotated surface code: d^2 data qubits, (d^2-1)/2 checks per basis,
// weight-4 bulk and weight-2 boundary checks. Requires odd d >= 3.
StabilizerCode build_rotated_surface_code(unsigned d);

struct Overhead {
    size_t data_qubits = 0;
    size_t total_qubits = 0;  // data plus one auxiliary per check
};

Overhead qubit_overhead(const StabilizerCode& code);

// Named constructions: tb12, tb24, tb56, tb88, surface3, surface5, surface7
// (surface<d> accepted for any odd d >= 3).
StabilizerCode build_named_code(const std::string& name);
std::vector<std::string> builtin_code_names();

}  // namespace tb
