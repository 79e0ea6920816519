#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tbcodes/bitmat.hpp"
#include "tbcodes/code.hpp"

namespace tb {

// Hermitian Pauli operator on n qubits: sign * product of single-qubit
// X/Y/Z factors, stored as a symplectic row [x | z]. Y_q is encoded as
// x_q = z_q = 1.
struct PauliOp {
    size_t n = 0;
    BitMatrix xz;  // 1 x 2n
    int sign = +1;

    PauliOp() = default;
    explicit PauliOp(size_t n_) : n(n_), xz(1, 2 * n_) {}
    PauliOp(size_t n_, BitMatrix row, int sign_ = +1);

    static PauliOp from_supports(size_t n, const std::vector<size_t>& x_support,
                                 const std::vector<size_t>& z_support, int sign = +1);

    bool x_bit(size_t q) const { return xz.get(0, q); }
    bool z_bit(size_t q) const { return xz.get(0, n + q); }
    void set_x(size_t q, bool v) { xz.set(0, q, v); }
    void set_z(size_t q, bool v) { xz.set(0, n + q, v); }

    // Number of qubits acted on non-trivially.
    size_t weight() const;
    bool is_identity() const { return xz.weight() == 0; }
    bool commutes_with(const PauliOp& other) const;

    // 1-based human-readable form, e.g. "+X1 Y3 Z7" ("+I" for identity).
    std::string to_string() const;
};

// Symplectic product: 0 if the operators commute, 1 otherwise.
int symplectic_product(const PauliOp& a, const PauliOp& b);
int symplectic_product_rows(const uint64_t* a, const uint64_t* b, size_t n);

// Phase-exact accumulator for products of Pauli operators. Internally tracks
// i^e X^x Z^z; finish() requires the result to be Hermitian.
class PauliProduct {
  public:
    explicit PauliProduct(size_t n);
    void multiply(const PauliOp& p);
    PauliOp finish() const;

  private:
    size_t n_;
    BitMatrix x_, z_;  // 1 x n each
    unsigned phase_ = 0;  // exponent of i, mod 4
};

// Symplectic rows of the stabilizer generators: [h | 0] per X check,
// [0 | h] per Z check.
BitMatrix stabilizer_symplectic_rows(const StabilizerCode& code);

// Basis of the group of Paulis commuting with every stabilizer generator
// (dimension n + k), as +1-signed operators.
std::vector<PauliOp> centralizer_basis(const StabilizerCode& code);

struct LogicalBasis {
    // (X_Li, Z_Li) pairs: anticommuting within a pair, commuting across.
    std::vector<std::pair<PauliOp, PauliOp>> pairs;
    size_t size() const { return pairs.size(); }
};

// Deterministic symplectic Gram-Schmidt over the centralizer modulo the
// stabilizer group. For CSS codes the returned representatives are pure
// X-type / pure Z-type.
LogicalBasis logical_basis(const StabilizerCode& code);

// Checks pair count, commutation with all stabilizers, the standard
// symplectic pairing, and that no representative is itself a stabilizer.
bool verify_logical_basis(const StabilizerCode& code, const LogicalBasis& basis);

}  // namespace tb
