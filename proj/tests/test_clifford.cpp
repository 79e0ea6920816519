#include <doctest.h>

#include <string>

#include "tbcodes/clifford.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/error.hpp"
#include "test_util.hpp"

using namespace tb;

namespace {

PauliOp x1(size_t n = 1) { return PauliOp::from_supports(n, {0}, {}); }
PauliOp y1(size_t n = 1) { return PauliOp::from_supports(n, {0}, {0}); }
PauliOp z1(size_t n = 1) { return PauliOp::from_supports(n, {}, {0}); }

PauliOp apply1(GateKind kind, const PauliOp& p) {
    return conjugate(p, {Gate{kind, 0, 0}});
}

bool same_op(const PauliOp& a, const PauliOp& b) {
    return a.xz == b.xz && a.sign == b.sign;
}

PauliOp negated(PauliOp p) {
    p.sign = -p.sign;
    return p;
}

}  // namespace

TEST_CASE("gate text round trip") {
    std::string text = "H 1 3\n# aux rotation\nCZ 2 4\nC' 5\nSQRT_X_DAG 2\nCNOT 1 2\n";
    CliffordSequence seq = parse_gate_sequence(text);
    REQUIRE(seq.size() == 6);
    CHECK(seq[0].kind == GateKind::h);
    CHECK(seq[0].q0 == 0);
    CHECK(seq[1].kind == GateKind::h);
    CHECK(seq[1].q0 == 2);
    CHECK(seq[2].kind == GateKind::cz);
    CHECK(seq[2].q0 == 1);
    CHECK(seq[2].q1 == 3);
    CHECK(seq[3].kind == GateKind::c_xyz_prime);
    CHECK(seq[5].kind == GateKind::cnot);
    CliffordSequence again = parse_gate_sequence(format_gate_sequence(seq));
    CHECK(format_gate_sequence(again) == format_gate_sequence(seq));
}

TEST_CASE("gate parsing reports the offending line") {
    auto message_of = [](const std::string& text) {
        try {
            parse_gate_sequence(text);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of("H 1\nCZ 2\n").find("line 2") != std::string::npos);
    CHECK(tbtest::thrown_kind([] { parse_gate_sequence("FOO 1\n"); }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] { parse_gate_sequence("H 0\n"); }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] { parse_gate_sequence("CZ 1 1\n"); }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] { parse_gate_sequence_file("/no/such/file"); }) ==
          ErrorKind::io);
}

TEST_CASE("single-qubit conjugation table") {
    // H: X <-> Z, Y -> -Y.
    CHECK(same_op(apply1(GateKind::h, x1()), z1()));
    CHECK(same_op(apply1(GateKind::h, z1()), x1()));
    CHECK(same_op(apply1(GateKind::h, y1()), negated(y1())));
    // S: X -> Y, Y -> -X, Z fixed.
    CHECK(same_op(apply1(GateKind::s, x1()), y1()));
    CHECK(same_op(apply1(GateKind::s, y1()), negated(x1())));
    CHECK(same_op(apply1(GateKind::s, z1()), z1()));
    // S_DAG inverts S.
    CHECK(same_op(apply1(GateKind::s_dag, x1()), negated(y1())));
    CHECK(same_op(apply1(GateKind::s_dag, y1()), x1()));
    // SQRT_X: Z -> -Y, Y -> Z, X fixed.
    CHECK(same_op(apply1(GateKind::sqrt_x, z1()), negated(y1())));
    CHECK(same_op(apply1(GateKind::sqrt_x, y1()), z1()));
    CHECK(same_op(apply1(GateKind::sqrt_x, x1()), x1()));
    CHECK(same_op(apply1(GateKind::sqrt_x_dag, z1()), y1()));
    CHECK(same_op(apply1(GateKind::sqrt_x_dag, y1()), negated(z1())));
}

TEST_CASE("C cycles X to Y to Z with positive signs") {
    CHECK(same_op(apply1(GateKind::c_xyz, x1()), y1()));
    CHECK(same_op(apply1(GateKind::c_xyz, y1()), z1()));
    CHECK(same_op(apply1(GateKind::c_xyz, z1()), x1()));
}

TEST_CASE("C_PRIME is the inverse cycle") {
    CHECK(same_op(apply1(GateKind::c_xyz_prime, x1()), z1()));
    CHECK(same_op(apply1(GateKind::c_xyz_prime, z1()), y1()));
    CHECK(same_op(apply1(GateKind::c_xyz_prime, y1()), x1()));
    for (PauliOp p : {x1(), y1(), z1()}) {
        CliffordSequence both = {Gate{GateKind::c_xyz, 0, 0}, Gate{GateKind::c_xyz_prime, 0, 0}};
        CHECK(same_op(conjugate(p, both), p));
    }
}

TEST_CASE("composite identities") {
    for (PauliOp p : {x1(), y1(), z1()}) {
        CHECK(same_op(conjugate(p, {Gate{GateKind::s, 0, 0}, Gate{GateKind::s, 0, 0}}),
                      apply1(GateKind::z, p)));
        CHECK(same_op(conjugate(p, {Gate{GateKind::sqrt_x, 0, 0}, Gate{GateKind::sqrt_x, 0, 0}}),
                      apply1(GateKind::x, p)));
        CHECK(same_op(conjugate(p, {Gate{GateKind::h, 0, 0}, Gate{GateKind::h, 0, 0}}), p));
        CHECK(same_op(conjugate(p, {Gate{GateKind::c_xyz, 0, 0}, Gate{GateKind::c_xyz, 0, 0},
                                    Gate{GateKind::c_xyz, 0, 0}}),
                      p));
    }
}

TEST_CASE("two-qubit conjugation spreads support") {
    PauliOp xa = PauliOp::from_supports(2, {0}, {});
    PauliOp za = PauliOp::from_supports(2, {}, {0});
    PauliOp xb = PauliOp::from_supports(2, {1}, {});
    PauliOp zb = PauliOp::from_supports(2, {}, {1});

    CliffordSequence cz = {Gate{GateKind::cz, 0, 1}};
    CHECK(same_op(conjugate(xa, cz), PauliOp::from_supports(2, {0}, {1})));
    CHECK(same_op(conjugate(xb, cz), PauliOp::from_supports(2, {1}, {0})));
    CHECK(same_op(conjugate(za, cz), za));
    CHECK(same_op(conjugate(zb, cz), zb));

    CliffordSequence cx = {Gate{GateKind::cnot, 0, 1}};
    CHECK(same_op(conjugate(xa, cx), PauliOp::from_supports(2, {0, 1}, {})));
    CHECK(same_op(conjugate(zb, cx), PauliOp::from_supports(2, {}, {0, 1})));
    CHECK(same_op(conjugate(za, cx), za));
    CHECK(same_op(conjugate(xb, cx), xb));
}

TEST_CASE("claims parse and expand to symplectic actions") {
    GateClaim h1 = parse_gate_claim("H:1");
    CHECK(h1.kind == GateClaim::Kind::h);
    CHECK(h1.target0 == 0);
    GateClaim cnot = parse_gate_claim("CNOT:2:1");
    CHECK(cnot.kind == GateClaim::Kind::cnot);
    CHECK(cnot.target0 == 1);
    CHECK(cnot.target1 == 0);
    CHECK(tbtest::thrown_kind([] { parse_gate_claim("H"); }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] { parse_gate_claim("Q:1"); }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] { parse_gate_claim("CNOT:1"); }) == ErrorKind::parse);
    CHECK(tbtest::thrown_kind([] { parse_gate_claim("H:0"); }) == ErrorKind::parse);

    // H on L1 of a k=2 code swaps the first coordinate pair and fixes L2.
    BitMatrix action = claim_action(h1, 2);
    CHECK(action == BitMatrix::from_string("0100;1000;0010;0001"));
    // S on L1: X_L1 -> Y_L1 = X_L1 Z_L1; Z_L1 fixed.
    CHECK(claim_action(parse_gate_claim("S:1"), 2) ==
          BitMatrix::from_string("1100;0100;0010;0001"));
}

TEST_CASE("empty sequence induces the identity") {
    StabilizerCode code = build_named_code("tb12");
    LogicalBasis basis = tbtest::tb12_reference_logicals();
    GateReport report = verify_logical_gate(code, basis, {}, parse_gate_claim("H:1"));
    CHECK(report.preserves_stabilizers);
    CHECK(!report.matches_claim);
    CHECK(report.induced == BitMatrix::identity(4));
}

TEST_CASE("shipped gate sequences implement their claims") {
    StabilizerCode code = build_named_code("tb12");
    LogicalBasis basis = tbtest::tb12_reference_logicals();
    struct Row {
        const char* file;
        const char* claim;
    };
    for (Row row : {Row{"gates/h_l1.txt", "H:1"}, Row{"gates/s_l2.txt", "S:2"},
                    Row{"gates/s_l1.txt", "S:1"}, Row{"gates/h_l2.txt", "H:2"},
                    Row{"gates/cnot_l2_l1.txt", "CNOT:2:1"}}) {
        CliffordSequence seq = parse_gate_sequence_file(tbtest::data_path(row.file));
        GateReport report = verify_logical_gate(code, basis, seq, parse_gate_claim(row.claim));
        INFO(row.file);
        CHECK(report.preserves_stabilizers);
        CHECK(report.matches_claim);
        CHECK(report.ok());
    }
}

TEST_CASE("a wrong claim is flagged without a stabilizer violation") {
    StabilizerCode code = build_named_code("tb12");
    LogicalBasis basis = tbtest::tb12_reference_logicals();
    CliffordSequence seq = parse_gate_sequence_file(tbtest::data_path("gates/s_l2.txt"));
    GateReport report = verify_logical_gate(code, basis, seq, parse_gate_claim("S:1"));
    CHECK(report.preserves_stabilizers);
    CHECK(!report.matches_claim);
}
