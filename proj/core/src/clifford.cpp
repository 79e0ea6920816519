#include "tbcodes/clifford.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "tbcodes/error.hpp"

namespace tb {

namespace {

// Image of a single Hermitian Pauli under conjugation: bits plus sign.
struct Image {
    bool x, z;
    int sign;
};

struct SingleQubitAction {
    Image on_x, on_z;
};

SingleQubitAction single_qubit_action(GateKind kind) {
    switch (kind) {
        case GateKind::x:          return {{1, 0, +1}, {0, 1, -1}};
        case GateKind::y:          return {{1, 0, -1}, {0, 1, -1}};
        case GateKind::z:          return {{1, 0, -1}, {0, 1, +1}};
        case GateKind::h:          return {{0, 1, +1}, {1, 0, +1}};
        case GateKind::s:          return {{1, 1, +1}, {0, 1, +1}};
        case GateKind::s_dag:      return {{1, 1, -1}, {0, 1, +1}};
        case GateKind::sqrt_x:     return {{1, 0, +1}, {1, 1, -1}};
        case GateKind::sqrt_x_dag: return {{1, 0, +1}, {1, 1, +1}};
        case GateKind::c_xyz:      return {{1, 1, +1}, {1, 0, +1}};
        case GateKind::c_xyz_prime:return {{0, 1, +1}, {1, 1, +1}};
        default:
            fail(ErrorKind::shape, "not a single-qubit gate");
    }
}

// i^e X^x Z^z normal form entry for a table cell.
struct Cell1 {
    bool x, z;
    unsigned e;  // mod 4
};

unsigned image_phase(const Image& im) {
    return (((im.x && im.z) ? 1u : 0u) + (im.sign < 0 ? 2u : 0u)) % 4;
}

std::array<Cell1, 4> build_table1(GateKind kind) {
    SingleQubitAction act = single_qubit_action(kind);
    unsigned ex = image_phase(act.on_x);
    unsigned ez = image_phase(act.on_z);
    std::array<Cell1, 4> t{};
    t[0] = {false, false, 0};
    t[1] = {act.on_x.x, act.on_x.z, ex};                     // input X
    t[2] = {act.on_z.x, act.on_z.z, ez};                     // input Z
    // Input XZ: image(X) * image(Z), reordered into X-then-Z form.
    unsigned cross = (act.on_x.z && act.on_z.x) ? 2u : 0u;
    t[3] = {static_cast<bool>(act.on_x.x ^ act.on_z.x),
            static_cast<bool>(act.on_x.z ^ act.on_z.z), (ex + ez + cross) % 4};
    return t;
}

// Two-qubit cell: output bits (xa, za, xb, zb) plus phase increment.
struct Cell2 {
    unsigned xa : 1, za : 1, xb : 1, zb : 1;
    unsigned e;
};

struct Pauli2 {
    unsigned xa, za, xb, zb;
};

std::array<Cell2, 16> build_table2(GateKind kind) {
    // Images of X_a, Z_a, X_b, Z_b, all +1-signed and Y-free.
    Pauli2 ix_a, iz_a, ix_b, iz_b;
    if (kind == GateKind::cz) {
        ix_a = {1, 0, 0, 1};
        iz_a = {0, 1, 0, 0};
        ix_b = {0, 1, 1, 0};
        iz_b = {0, 0, 0, 1};
    } else if (kind == GateKind::cnot) {
        ix_a = {1, 0, 1, 0};
        iz_a = {0, 1, 0, 0};
        ix_b = {0, 0, 1, 0};
        iz_b = {0, 1, 0, 1};
    } else {
        fail(ErrorKind::shape, "not a two-qubit gate");
    }
    std::array<Cell2, 16> t{};
    for (unsigned in = 0; in < 16; ++in) {
        unsigned xa = in & 1, za = (in >> 1) & 1, xb = (in >> 2) & 1, zb = (in >> 3) & 1;
        // Local factor in normal form: X_a^xa X_b^xb Z_a^za Z_b^zb.
        unsigned ax = 0, az = 0, bx = 0, bz = 0, e = 0;
        auto mul = [&](const Pauli2& f) {
            // (i^e X Z)(X_f Z_f): commute Z block past X_f.
            unsigned anti = (az & f.xa) ^ (bz & f.xb);
            e = (e + 2 * anti) % 4;
            ax ^= f.xa;
            az ^= f.za;
            bx ^= f.xb;
            bz ^= f.zb;
        };
        if (xa) mul(ix_a);
        if (xb) mul(ix_b);
        if (za) mul(iz_a);
        if (zb) mul(iz_b);
        t[in] = {ax, az, bx, bz, e};
    }
    return t;
}

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

bool gate_is_two_qubit(GateKind kind) {
    return kind == GateKind::cz || kind == GateKind::cnot;
}

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::x: return "X";
        case GateKind::y: return "Y";
        case GateKind::z: return "Z";
        case GateKind::h: return "H";
        case GateKind::s: return "S";
        case GateKind::s_dag: return "S_DAG";
        case GateKind::sqrt_x: return "SQRT_X";
        case GateKind::sqrt_x_dag: return "SQRT_X_DAG";
        case GateKind::c_xyz: return "C";
        case GateKind::c_xyz_prime: return "C_PRIME";
        case GateKind::cz: return "CZ";
        case GateKind::cnot: return "CNOT";
    }
    fail(ErrorKind::shape, "unknown gate kind");
}

CliffordSequence parse_gate_sequence(const std::string& text) {
    CliffordSequence seq;
    std::istringstream lines(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream toks(line);
        std::string name;
        if (!(toks >> name)) continue;
        name = upper(name);
        GateKind kind;
        if (name == "X") kind = GateKind::x;
        else if (name == "Y") kind = GateKind::y;
        else if (name == "Z") kind = GateKind::z;
        else if (name == "H") kind = GateKind::h;
        else if (name == "S") kind = GateKind::s;
        else if (name == "S_DAG") kind = GateKind::s_dag;
        else if (name == "SQRT_X") kind = GateKind::sqrt_x;
        else if (name == "SQRT_X_DAG") kind = GateKind::sqrt_x_dag;
        else if (name == "C") kind = GateKind::c_xyz;
        else if (name == "C_PRIME" || name == "C'") kind = GateKind::c_xyz_prime;
        else if (name == "CZ") kind = GateKind::cz;
        else if (name == "CNOT" || name == "CX") kind = GateKind::cnot;
        else fail(ErrorKind::parse,
                  "unsupported gate '" + name + "' at line " + std::to_string(line_no));
        std::vector<long> args;
        long v;
        while (toks >> v) args.push_back(v);
        if (!toks.eof()) {
            fail(ErrorKind::parse, "bad qubit index at line " + std::to_string(line_no));
        }
        for (long a : args) {
            require(a >= 1, ErrorKind::parse,
                    "qubit indices are 1-based (line " + std::to_string(line_no) + ")");
        }
        if (gate_is_two_qubit(kind)) {
            require(args.size() == 2, ErrorKind::parse,
                    gate_name(kind) + " takes exactly two qubits (line " +
                        std::to_string(line_no) + ")");
            require(args[0] != args[1], ErrorKind::parse,
                    "two-qubit gate targets must differ (line " + std::to_string(line_no) + ")");
            seq.push_back({kind, static_cast<uint32_t>(args[0] - 1),
                           static_cast<uint32_t>(args[1] - 1)});
        } else {
            require(!args.empty(), ErrorKind::parse,
                    gate_name(kind) + " needs at least one qubit (line " +
                        std::to_string(line_no) + ")");
            for (long a : args) seq.push_back({kind, static_cast<uint32_t>(a - 1), 0});
        }
    }
    return seq;
}

CliffordSequence parse_gate_sequence_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::io, "cannot open gate file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_gate_sequence(buf.str());
}

std::string format_gate_sequence(const CliffordSequence& seq) {
    std::string out;
    for (const Gate& g : seq) {
        out += gate_name(g.kind);
        out += ' ';
        out += std::to_string(g.q0 + 1);
        if (gate_is_two_qubit(g.kind)) {
            out += ' ';
            out += std::to_string(g.q1 + 1);
        }
        out += '\n';
    }
    return out;
}

PauliOp conjugate(const PauliOp& p, const CliffordSequence& seq) {
    size_t n = p.n;
    std::vector<uint8_t> x(n), z(n);
    unsigned e = 0;
    for (size_t q = 0; q < n; ++q) {
        x[q] = p.x_bit(q);
        z[q] = p.z_bit(q);
        if (x[q] && z[q]) e = (e + 1) % 4;
    }
    if (p.sign < 0) e = (e + 2) % 4;

    for (const Gate& g : seq) {
        require(g.q0 < n && (!gate_is_two_qubit(g.kind) || g.q1 < n), ErrorKind::validation,
                "gate qubit index out of range");
        if (gate_is_two_qubit(g.kind)) {
            static const std::array<Cell2, 16> cz_table = build_table2(GateKind::cz);
            static const std::array<Cell2, 16> cx_table = build_table2(GateKind::cnot);
            const auto& table = g.kind == GateKind::cz ? cz_table : cx_table;
            unsigned a = g.q0, b = g.q1;
            unsigned in = x[a] | (z[a] << 1) | (x[b] << 2) | (z[b] << 3);
            const Cell2& c = table[in];
            x[a] = c.xa;
            z[a] = c.za;
            x[b] = c.xb;
            z[b] = c.zb;
            e = (e + c.e) % 4;
        } else {
            const Cell1* table;
            switch (g.kind) {
                case GateKind::x: { static const auto t = build_table1(GateKind::x); table = t.data(); break; }
                case GateKind::y: { static const auto t = build_table1(GateKind::y); table = t.data(); break; }
                case GateKind::z: { static const auto t = build_table1(GateKind::z); table = t.data(); break; }
                case GateKind::h: { static const auto t = build_table1(GateKind::h); table = t.data(); break; }
                case GateKind::s: { static const auto t = build_table1(GateKind::s); table = t.data(); break; }
                case GateKind::s_dag: { static const auto t = build_table1(GateKind::s_dag); table = t.data(); break; }
                case GateKind::sqrt_x: { static const auto t = build_table1(GateKind::sqrt_x); table = t.data(); break; }
                case GateKind::sqrt_x_dag: { static const auto t = build_table1(GateKind::sqrt_x_dag); table = t.data(); break; }
                case GateKind::c_xyz: { static const auto t = build_table1(GateKind::c_xyz); table = t.data(); break; }
                case GateKind::c_xyz_prime: { static const auto t = build_table1(GateKind::c_xyz_prime); table = t.data(); break; }
                default: fail(ErrorKind::shape, "unexpected gate kind");
            }
            unsigned q = g.q0;
            const Cell1& c = table[x[q] | (z[q] << 1)];
            x[q] = c.x;
            z[q] = c.z;
            e = (e + c.e) % 4;
        }
    }

    PauliOp out(n);
    unsigned y_count = 0;
    for (size_t q = 0; q < n; ++q) {
        out.set_x(q, x[q]);
        out.set_z(q, z[q]);
        if (x[q] && z[q]) ++y_count;
    }
    unsigned rel = (e + 4 - (y_count % 4)) % 4;
    require(rel == 0 || rel == 2, ErrorKind::contract, "conjugated Pauli is not Hermitian");
    out.sign = rel == 0 ? +1 : -1;
    return out;
}

GateClaim parse_gate_claim(const std::string& text) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    auto target = [&](const std::string& s) -> size_t {
        try {
            size_t used = 0;
            long v = std::stol(s, &used);
            require(used == s.size() && v >= 1, ErrorKind::parse,
                    "gate claim targets are 1-based integers");
            return static_cast<size_t>(v - 1);
        } catch (const Error&) {
            throw;
        } catch (...) {
            fail(ErrorKind::parse, "bad gate claim target: '" + s + "'");
        }
    };
    std::string name = upper(parts[0]);
    GateClaim claim{};
    if (name == "H" || name == "S") {
        require(parts.size() == 2, ErrorKind::parse, "expected " + name + ":<qubit>");
        claim.kind = name == "H" ? GateClaim::Kind::h : GateClaim::Kind::s;
        claim.target0 = target(parts[1]);
    } else if (name == "CNOT" || name == "CX") {
        require(parts.size() == 3, ErrorKind::parse, "expected CNOT:<control>:<target>");
        claim.kind = GateClaim::Kind::cnot;
        claim.target0 = target(parts[1]);
        claim.target1 = target(parts[2]);
        require(claim.target0 != claim.target1, ErrorKind::parse,
                "CNOT control and target must differ");
    } else {
        fail(ErrorKind::parse, "unsupported gate claim: '" + parts[0] + "'");
    }
    return claim;
}

BitMatrix claim_action(const GateClaim& claim, size_t k) {
    require(claim.target0 < k && (claim.kind != GateClaim::Kind::cnot || claim.target1 < k),
            ErrorKind::validation, "gate claim target exceeds logical qubit count");
    BitMatrix m = BitMatrix::identity(2 * k);
    size_t t = claim.target0;
    switch (claim.kind) {
        case GateClaim::Kind::h:
            m.set(2 * t, 2 * t, false);
            m.set(2 * t, 2 * t + 1, true);
            m.set(2 * t + 1, 2 * t + 1, false);
            m.set(2 * t + 1, 2 * t, true);
            break;
        case GateClaim::Kind::s:
            m.set(2 * t, 2 * t + 1, true);
            break;
        case GateClaim::Kind::cnot: {
            size_t c = claim.target0, tt = claim.target1;
            m.set(2 * c, 2 * tt, true);      // X_Lc -> X_Lc X_Lt
            m.set(2 * tt + 1, 2 * c + 1, true);  // Z_Lt -> Z_Lc Z_Lt
            break;
        }
    }
    return m;
}

GateReport verify_logical_gate(const StabilizerCode& code, const LogicalBasis& basis,
                               const CliffordSequence& seq, const GateClaim& claim) {
    size_t n = code.n;
    size_t k = basis.size();
    require(k == code.k, ErrorKind::validation, "logical basis size disagrees with k");
    for (const Gate& g : seq) {
        require(g.q0 < n && (!gate_is_two_qubit(g.kind) || g.q1 < n), ErrorKind::validation,
                "gate sequence addresses a qubit outside the code block");
    }

    BitMatrix stab = stabilizer_symplectic_rows(code);
    EchelonBasis span(stab);

    GateReport report;
    report.preserves_stabilizers = true;
    for (size_t r = 0; r < stab.rows(); ++r) {
        PauliOp gen(n, stab.submatrix_rows({r}));
        PauliOp img = conjugate(gen, seq);
        if (!span.contains(img.xz.row(0))) report.preserves_stabilizers = false;
        report.stabilizer_signs.push_back(img.sign);
    }

    auto flat = [&](size_t i) -> const PauliOp& {
        const auto& pr = basis.pairs[i / 2];
        return (i % 2 == 0) ? pr.first : pr.second;
    };
    report.induced = BitMatrix(2 * k, 2 * k);
    for (size_t i = 0; i < 2 * k; ++i) {
        PauliOp img = conjugate(flat(i), seq);
        BitMatrix residual = img.xz;
        for (size_t j = 0; j < k; ++j) {
            bool coef_x = symplectic_product(img, flat(2 * j + 1)) != 0;
            bool coef_z = symplectic_product(img, flat(2 * j)) != 0;
            report.induced.set(i, 2 * j, coef_x);
            report.induced.set(i, 2 * j + 1, coef_z);
            if (coef_x) residual.xor_row_from(0, flat(2 * j).xz, 0);
            if (coef_z) residual.xor_row_from(0, flat(2 * j + 1).xz, 0);
        }
        if (!span.contains(residual.row(0))) report.preserves_stabilizers = false;
        report.logical_signs.push_back(img.sign);
    }
    report.matches_claim = report.induced == claim_action(claim, k);
    return report;
}

}  // namespace tb
