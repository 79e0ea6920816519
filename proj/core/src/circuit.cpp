#include "tbcodes/circuit.hpp"

#include <charconv>
#include <sstream>

#include "tbcodes/error.hpp"

namespace tb {

bool instr_is_noise(InstrKind kind) {
    return kind == InstrKind::depolarize1 || kind == InstrKind::depolarize2 ||
           kind == InstrKind::x_error || kind == InstrKind::z_error;
}

bool instr_is_two_qubit(InstrKind kind) {
    return kind == InstrKind::gate_cx || kind == InstrKind::gate_cz ||
           kind == InstrKind::depolarize2;
}

bool instr_is_measurement(InstrKind kind) {
    return kind == InstrKind::measure_z || kind == InstrKind::measure_x;
}

bool instr_is_reset(InstrKind kind) {
    return kind == InstrKind::reset_z || kind == InstrKind::reset_x;
}

void Circuit::append(Instruction instr) {
    InstrKind kind = instr.kind;
    bool records = kind == InstrKind::detector || kind == InstrKind::observable_include;
    if (!records && kind != InstrKind::tick) {
        require(!instr.targets.empty(), ErrorKind::shape, "instruction needs targets");
        for (uint32_t q : instr.targets) {
            require(q < num_qubits, ErrorKind::shape, "qubit index out of range");
        }
        if (instr_is_two_qubit(kind)) {
            require(instr.targets.size() % 2 == 0, ErrorKind::shape,
                    "two-qubit instruction needs an even target count");
            for (size_t i = 0; i < instr.targets.size(); i += 2) {
                require(instr.targets[i] != instr.targets[i + 1], ErrorKind::shape,
                        "two-qubit pair targets must differ");
            }
        }
    }
    if (instr_is_noise(kind)) {
        require(instr.arg >= 0.0 && instr.arg <= 1.0, ErrorKind::validation,
                "noise probability must lie in [0, 1]");
    }
    if (records) {
        for (uint32_t r : instr.targets) {
            require(r < num_measurements, ErrorKind::shape,
                    "record index refers to a future measurement");
        }
    }
    if (instr_is_measurement(kind)) num_measurements += instr.targets.size();
    if (kind == InstrKind::detector) num_detectors += 1;
    if (kind == InstrKind::observable_include) {
        uint32_t idx = static_cast<uint32_t>(instr.arg);
        require(static_cast<double>(idx) == instr.arg, ErrorKind::shape,
                "observable index must be a non-negative integer");
        if (idx + 1 > num_observables) num_observables = idx + 1;
    }
    instructions.push_back(std::move(instr));
}

std::vector<uint32_t> record_qubits(const Circuit& circuit) {
    std::vector<uint32_t> out;
    out.reserve(circuit.num_measurements);
    for (const Instruction& instr : circuit.instructions) {
        if (instr_is_measurement(instr.kind)) {
            out.insert(out.end(), instr.targets.begin(), instr.targets.end());
        }
    }
    return out;
}

std::vector<Basis> classify_detectors(const Circuit& circuit) {
    require(circuit.has_layout(), ErrorKind::contract,
            "detector classification needs circuit layout metadata");
    std::vector<uint32_t> recq = record_qubits(circuit);
    std::vector<Basis> out;
    out.reserve(circuit.num_detectors);
    for (const Instruction& instr : circuit.instructions) {
        if (instr.kind != InstrKind::detector) continue;
        bool saw_x = false, saw_z = false;
        for (uint32_t r : instr.targets) {
            uint32_t q = recq[r];
            if (circuit.qubit_is_x_aux(q)) saw_x = true;
            if (circuit.qubit_is_z_aux(q)) saw_z = true;
        }
        require(saw_x != saw_z, ErrorKind::contract,
                "detector does not reference exactly one auxiliary basis");
        out.push_back(saw_x ? Basis::x : Basis::z);
    }
    return out;
}

namespace {

const char* instr_name(InstrKind kind) {
    switch (kind) {
        case InstrKind::reset_z: return "R";
        case InstrKind::reset_x: return "RX";
        case InstrKind::gate_h: return "H";
        case InstrKind::gate_cx: return "CX";
        case InstrKind::gate_cz: return "CZ";
        case InstrKind::gate_x: return "X";
        case InstrKind::gate_y: return "Y";
        case InstrKind::gate_z: return "Z";
        case InstrKind::measure_z: return "M";
        case InstrKind::measure_x: return "MX";
        case InstrKind::tick: return "TICK";
        case InstrKind::depolarize1: return "DEPOLARIZE1";
        case InstrKind::depolarize2: return "DEPOLARIZE2";
        case InstrKind::x_error: return "X_ERROR";
        case InstrKind::z_error: return "Z_ERROR";
        case InstrKind::detector: return "DETECTOR";
        case InstrKind::observable_include: return "OBSERVABLE_INCLUDE";
    }
    fail(ErrorKind::shape, "unknown instruction kind");
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string serialize(const Circuit& circuit) {
    std::string out;
    out += "# qubits: " + std::to_string(circuit.num_qubits) + "\n";
    if (circuit.has_layout()) {
        out += "# layout: data=" + std::to_string(circuit.num_data) +
               " x_aux=" + std::to_string(circuit.num_x_aux) +
               " z_aux=" + std::to_string(circuit.num_z_aux);
        if (circuit.memory_basis) {
            out += std::string(" basis=") + (*circuit.memory_basis == Basis::z ? "Z" : "X");
        }
        out += "\n";
    }
    uint32_t seen = 0;
    for (const Instruction& instr : circuit.instructions) {
        out += instr_name(instr.kind);
        if (instr_is_noise(instr.kind)) {
            out += "(" + format_double(instr.arg) + ")";
        } else if (instr.kind == InstrKind::observable_include) {
            out += "(" + std::to_string(static_cast<uint32_t>(instr.arg)) + ")";
        }
        bool records = instr.kind == InstrKind::detector ||
                       instr.kind == InstrKind::observable_include;
        for (uint32_t t : instr.targets) {
            out += ' ';
            if (records) {
                out += "rec[-" + std::to_string(seen - t) + "]";
            } else {
                out += std::to_string(t);
            }
        }
        if (instr_is_measurement(instr.kind)) seen += instr.targets.size();
        out += '\n';
    }
    return out;
}

Circuit parse_circuit(const std::string& text) {
    Circuit circuit;
    // Pass 1: qubit count from the header, or from the largest qubit target.
    std::istringstream scan(text);
    std::string line;
    bool have_qubits = false;
    while (std::getline(scan, line)) {
        if (line.rfind("# qubits:", 0) == 0) {
            circuit.num_qubits = static_cast<uint32_t>(std::stoul(line.substr(9)));
            have_qubits = true;
            break;
        }
    }

    std::vector<Instruction> pending;
    std::istringstream lines(text);
    size_t line_no = 0;
    uint32_t max_qubit = 0;
    bool saw_target = false;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.rfind("# layout:", 0) == 0) {
            std::istringstream toks(line.substr(9));
            std::string tok;
            while (toks >> tok) {
                auto eq = tok.find('=');
                require(eq != std::string::npos, ErrorKind::parse,
                        "bad layout token at line " + std::to_string(line_no));
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "data") circuit.num_data = static_cast<uint32_t>(std::stoul(val));
                else if (key == "x_aux") circuit.num_x_aux = static_cast<uint32_t>(std::stoul(val));
                else if (key == "z_aux") circuit.num_z_aux = static_cast<uint32_t>(std::stoul(val));
                else if (key == "basis") {
                    require(val == "Z" || val == "X", ErrorKind::parse, "bad layout basis");
                    circuit.memory_basis = val == "Z" ? Basis::z : Basis::x;
                } else {
                    fail(ErrorKind::parse, "unknown layout key: " + key);
                }
            }
            continue;
        }
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream toks(line);
        std::string head;
        if (!(toks >> head)) continue;

        std::string name = head;
        double arg = 0.0;
        bool has_arg = false;
        if (auto paren = head.find('('); paren != std::string::npos) {
            require(head.back() == ')', ErrorKind::parse,
                    "unterminated argument at line " + std::to_string(line_no));
            name = head.substr(0, paren);
            std::string inner = head.substr(paren + 1, head.size() - paren - 2);
            const char* first = inner.data();
            const char* last = inner.data() + inner.size();
            auto res = std::from_chars(first, last, arg);
            require(res.ec == std::errc() && res.ptr == last, ErrorKind::parse,
                    "bad numeric argument at line " + std::to_string(line_no));
            has_arg = true;
        }

        InstrKind kind;
        if (name == "R") kind = InstrKind::reset_z;
        else if (name == "RX") kind = InstrKind::reset_x;
        else if (name == "H") kind = InstrKind::gate_h;
        else if (name == "CX" || name == "CNOT") kind = InstrKind::gate_cx;
        else if (name == "CZ") kind = InstrKind::gate_cz;
        else if (name == "X") kind = InstrKind::gate_x;
        else if (name == "Y") kind = InstrKind::gate_y;
        else if (name == "Z") kind = InstrKind::gate_z;
        else if (name == "M") kind = InstrKind::measure_z;
        else if (name == "MX") kind = InstrKind::measure_x;
        else if (name == "TICK") kind = InstrKind::tick;
        else if (name == "DEPOLARIZE1") kind = InstrKind::depolarize1;
        else if (name == "DEPOLARIZE2") kind = InstrKind::depolarize2;
        else if (name == "X_ERROR") kind = InstrKind::x_error;
        else if (name == "Z_ERROR") kind = InstrKind::z_error;
        else if (name == "DETECTOR") kind = InstrKind::detector;
        else if (name == "OBSERVABLE_INCLUDE") kind = InstrKind::observable_include;
        else fail(ErrorKind::parse,
                  "unknown instruction '" + name + "' at line " + std::to_string(line_no));

        require(has_arg == (instr_is_noise(kind) || kind == InstrKind::observable_include),
                ErrorKind::parse, "unexpected argument at line " + std::to_string(line_no));

        Instruction instr{kind, {}, arg};
        std::string tok;
        bool records = kind == InstrKind::detector || kind == InstrKind::observable_include;
        uint32_t seen = 0;
        for (const Instruction& p : pending) {
            if (instr_is_measurement(p.kind)) seen += p.targets.size();
        }
        while (toks >> tok) {
            if (records) {
                require(tok.rfind("rec[-", 0) == 0 && tok.back() == ']', ErrorKind::parse,
                        "expected rec[-k] at line " + std::to_string(line_no));
                uint32_t back = static_cast<uint32_t>(std::stoul(tok.substr(5)));
                require(back >= 1 && back <= seen, ErrorKind::parse,
                        "record lookback out of range at line " + std::to_string(line_no));
                instr.targets.push_back(seen - back);
            } else {
                uint32_t q = 0;
                const char* first = tok.data();
                const char* last = tok.data() + tok.size();
                auto res = std::from_chars(first, last, q);
                require(res.ec == std::errc() && res.ptr == last, ErrorKind::parse,
                        "bad qubit index at line " + std::to_string(line_no));
                instr.targets.push_back(q);
                max_qubit = std::max(max_qubit, q);
                saw_target = true;
            }
        }
        pending.push_back(std::move(instr));
    }

    if (!have_qubits) circuit.num_qubits = saw_target ? max_qubit + 1 : 0;
    require(!saw_target || max_qubit < circuit.num_qubits, ErrorKind::parse,
            "qubit index exceeds declared qubit count");
    for (Instruction& instr : pending) circuit.append(std::move(instr));
    return circuit;
}

}  // namespace tb
