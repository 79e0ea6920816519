#include <doctest.h>

#include "tbcodes/code.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/pauli.hpp"
#include "test_util.hpp"

using namespace tb;

TEST_CASE("symplectic products detect anticommutation") {
    PauliOp x0 = PauliOp::from_supports(3, {0}, {});
    PauliOp z0 = PauliOp::from_supports(3, {}, {0});
    PauliOp z1 = PauliOp::from_supports(3, {}, {1});
    PauliOp y0 = PauliOp::from_supports(3, {0}, {0});
    CHECK(symplectic_product(x0, z0) == 1);
    CHECK(symplectic_product(x0, z1) == 0);
    CHECK(symplectic_product(x0, y0) == 1);
    CHECK(symplectic_product(y0, z0) == 1);
    CHECK(x0.commutes_with(z1));
    CHECK(!x0.commutes_with(z0));
}

TEST_CASE("PauliOp formatting") {
    PauliOp p = PauliOp::from_supports(8, {0, 2}, {2, 6});
    CHECK(p.to_string() == "+X1 Y3 Z7");
    CHECK(p.weight() == 3);
    PauliOp id(4);
    CHECK(id.is_identity());
    CHECK(id.to_string() == "+I");
    PauliOp m = PauliOp::from_supports(2, {1}, {}, -1);
    CHECK(m.to_string() == "-X2");
}

TEST_CASE("PauliProduct tracks exact signs") {
    // (X1 X2)(Z1 Z2) = (XZ) x (XZ) = (-iY)(-iY) sign -> -Y1 Y2.
    PauliProduct prod(2);
    prod.multiply(PauliOp::from_supports(2, {0, 1}, {}));
    prod.multiply(PauliOp::from_supports(2, {}, {0, 1}));
    PauliOp r = prod.finish();
    CHECK(r.sign == -1);
    CHECK(r.x_bit(0));
    CHECK(r.z_bit(0));
    CHECK(r.x_bit(1));
    CHECK(r.z_bit(1));

    // Y Y = I with sign +1.
    PauliProduct sq(1);
    sq.multiply(PauliOp::from_supports(1, {0}, {0}));
    sq.multiply(PauliOp::from_supports(1, {0}, {0}));
    PauliOp i = sq.finish();
    CHECK(i.is_identity());
    CHECK(i.sign == +1);

    // X Z alone is anti-Hermitian (phase -i); finish must refuse.
    PauliProduct bad(1);
    bad.multiply(PauliOp::from_supports(1, {0}, {}));
    bad.multiply(PauliOp::from_supports(1, {}, {0}));
    CHECK_THROWS_AS(bad.finish(), Error);
}

TEST_CASE("centralizer has dimension n + k") {
    StabilizerCode code = build_named_code("tb12");
    std::vector<PauliOp> cent = centralizer_basis(code);
    CHECK(cent.size() == code.n + code.k);

    BitMatrix stab = stabilizer_symplectic_rows(code);
    CHECK(stab.rows() == code.num_checks());
    for (const PauliOp& p : cent) {
        for (size_t i = 0; i < stab.rows(); ++i) {
            BitMatrix row(1, 2 * code.n);
            row.xor_row_from(0, stab, i);
            PauliOp s(code.n, row);
            CHECK(symplectic_product(p, s) == 0);
        }
    }
}

TEST_CASE("logical_basis verifies for every built-in code") {
    for (const std::string& name : builtin_code_names()) {
        StabilizerCode code = build_named_code(name);
        LogicalBasis basis = logical_basis(code);
        CHECK(basis.size() == code.k);
        CHECK(verify_logical_basis(code, basis));
        // CSS construction: representatives are pure X / pure Z type.
        for (const auto& [x_op, z_op] : basis.pairs) {
            for (size_t q = 0; q < code.n; ++q) {
                CHECK(!x_op.z_bit(q));
                CHECK(!z_op.x_bit(q));
            }
        }
    }
}

TEST_CASE("frozen tb12 logical representatives verify") {
    StabilizerCode code = build_named_code("tb12");
    LogicalBasis reference = tbtest::tb12_reference_logicals();
    CHECK(verify_logical_basis(code, reference));
}

TEST_CASE("verify_logical_basis rejects broken bases") {
    StabilizerCode code = build_named_code("tb12");
    LogicalBasis basis = tbtest::tb12_reference_logicals();

    LogicalBasis wrong_count = basis;
    wrong_count.pairs.pop_back();
    CHECK(!verify_logical_basis(code, wrong_count));

    // A stabilizer is not a logical representative.
    LogicalBasis stab_row = basis;
    stab_row.pairs[0].second =
        PauliOp::from_supports(12, {}, {0, 2, 7, 9});  // first Z check
    CHECK(!verify_logical_basis(code, stab_row));

    // Breaking the symplectic pairing must fail too.
    LogicalBasis unpaired = basis;
    unpaired.pairs[0].first = basis.pairs[1].first;
    CHECK(!verify_logical_basis(code, unpaired));
}

TEST_CASE("alternative X_L1 representative is stabilizer-equivalent") {
    StabilizerCode code = build_named_code("tb12");
    // X1 X2 X3 and X4 X5 X6 differ by a product of X checks.
    BitMatrix diff = BitMatrix::row_vector(12, {0, 1, 2, 3, 4, 5});
    CHECK(in_rowspace(diff, code.h_x));
    CHECK(!in_rowspace(BitMatrix::row_vector(12, {0, 1, 2}), code.h_x));
}
