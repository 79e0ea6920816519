#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "tbcodes/bitmat.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/pauli.hpp"

namespace tbtest {

inline std::string data_path(const std::string& rel) {
    return std::string(TBCODES_DATA_DIR) + "/" + rel;
}

// Runs f, which must throw tb::Error, and returns the kind it threw.
inline tb::ErrorKind thrown_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const tb::Error& e) {
        return e.kind();
    }
    throw std::runtime_error("expected a tb::Error, none was thrown");
}

// Frozen 6x12 check matrices of the l=2, m=3, A=x+y^2, B=x^2+z^4 code,
// written out by hand from the block definition. Unit and acceptance tests
// compare the constructor's output against these rather than recomputing.
inline tb::BitMatrix tb12_h_z() {
    return tb::BitMatrix::from_string(
        "101000010100;110000001010;011000100001;"
        "000101100010;000110010001;000011001100");
}

inline tb::BitMatrix tb12_h_x() {
    return tb::BitMatrix::from_string(
        "001100110000;100010011000;010001101000;"
        "100001000110;010100000011;001010000101");
}

// Reference logical representatives for the same code, frozen as 1-based
// supports: X_L1 = X1 X2 X3, Z_L1 = Z1..Z6, X_L2 = X1 X2 X4 X5 X7 X10,
// Z_L2 = Z1 Z3 Z5 Z6 Z7. They form a symplectic basis independent of the
// one logical_basis() happens to pick.
inline tb::LogicalBasis tb12_reference_logicals() {
    tb::LogicalBasis basis;
    tb::PauliOp x1 = tb::PauliOp::from_supports(12, {0, 1, 2}, {});
    tb::PauliOp z1 = tb::PauliOp::from_supports(12, {}, {0, 1, 2, 3, 4, 5});
    tb::PauliOp x2 = tb::PauliOp::from_supports(12, {0, 1, 3, 4, 6, 9}, {});
    tb::PauliOp z2 = tb::PauliOp::from_supports(12, {}, {0, 2, 4, 5, 6});
    basis.pairs = {{x1, z1}, {x2, z2}};
    return basis;
}

}  // namespace tbtest
