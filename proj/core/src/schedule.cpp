#include "tbcodes/schedule.hpp"

#include <algorithm>

#include "tbcodes/error.hpp"
#include "tbcodes/tableau_sim.hpp"

namespace tb {

namespace {

struct TermGeometry {
    unsigned l, m;
    ExponentPair a1, a2, b1, b2;
};

TermGeometry term_geometry(const StabilizerCode& code) {
    require(code.spec.has_value(), ErrorKind::scheduling,
            "schedule construction needs the code's polynomial terms");
    const TBCodeSpec& spec = *code.spec;
    require(spec.a_terms.size() == 2 && spec.b_terms.size() == 2, ErrorKind::scheduling,
            "schedule construction requires two terms per polynomial");
    return {spec.l, spec.m,
            spec.canonical(spec.a_terms[0]), spec.canonical(spec.a_terms[1]),
            spec.canonical(spec.b_terms[0]), spec.canonical(spec.b_terms[1])};
}

int translate(const TermGeometry& g, size_t q, const ExponentPair& e, bool forward) {
    unsigned a = static_cast<unsigned>(q) / g.m;
    unsigned b = static_cast<unsigned>(q) % g.m;
    unsigned ai = forward ? (a + e.i) % g.l : (a + g.l - e.i % g.l) % g.l;
    unsigned bj = forward ? (b + e.j) % g.m : (b + g.m - e.j % g.m) % g.m;
    return static_cast<int>(ai * g.m + bj);
}

void check_schedule_shape(const StabilizerCode& code, const Schedule& schedule) {
    require(schedule.x_layers.size() == code.h_x.rows() &&
                schedule.z_layers.size() == code.h_z.rows(),
            ErrorKind::validation, "schedule check count disagrees with the code");
    auto check_side = [&](const std::vector<std::array<int, 4>>& layers, const BitMatrix& h) {
        for (size_t c = 0; c < layers.size(); ++c) {
            std::vector<size_t> touched;
            for (int q : layers[c]) {
                if (q < 0) continue;
                require(static_cast<size_t>(q) < code.n, ErrorKind::validation,
                        "schedule addresses a qubit outside the code block");
                touched.push_back(static_cast<size_t>(q));
            }
            std::sort(touched.begin(), touched.end());
            require(std::adjacent_find(touched.begin(), touched.end()) == touched.end(),
                    ErrorKind::validation, "schedule touches a qubit twice in one check");
            require(touched == h.row_support(c), ErrorKind::validation,
                    "schedule layers do not cover the check support");
        }
    };
    check_side(schedule.x_layers, code.h_x);
    check_side(schedule.z_layers, code.h_z);
    for (int layer = 0; layer < 4; ++layer) {
        std::vector<uint8_t> used(code.n, 0);
        auto mark = [&](const std::vector<std::array<int, 4>>& layers) {
            for (const auto& slots : layers) {
                int q = slots[layer];
                if (q < 0) continue;
                require(!used[q], ErrorKind::validation,
                        "two checks touch one qubit in the same layer");
                used[q] = 1;
            }
        };
        mark(schedule.x_layers);
        mark(schedule.z_layers);
    }
}

}  // namespace

Schedule make_schedule(const StabilizerCode& code) {
    Schedule s;
    if (!code.surface_x_order.empty()) {
        s.x_layers = code.surface_x_order;
        s.z_layers = code.surface_z_order;
        check_schedule_shape(code, s);
        return s;
    }
    TermGeometry g = term_geometry(code);
    size_t lm = static_cast<size_t>(g.l) * g.m;
    int right = static_cast<int>(lm);
    s.z_layers.resize(lm);
    s.x_layers.resize(lm);
    for (size_t i = 0; i < lm; ++i) {
        s.z_layers[i] = {translate(g, i, g.b1, false),
                         right + translate(g, i, g.a1, false),
                         right + translate(g, i, g.a2, false),
                         translate(g, i, g.b2, false)};
    }
    for (size_t r = 0; r < lm; ++r) {
        s.x_layers[r] = {right + translate(g, r, g.b2, true),
                         translate(g, r, g.a1, true),
                         translate(g, r, g.a2, true),
                         right + translate(g, r, g.b1, true)};
    }
    check_schedule_shape(code, s);
    return s;
}

Schedule make_unbracketed_schedule(const StabilizerCode& code) {
    TermGeometry g = term_geometry(code);
    size_t lm = static_cast<size_t>(g.l) * g.m;
    int right = static_cast<int>(lm);
    Schedule s;
    s.z_layers.resize(lm);
    s.x_layers.resize(lm);
    for (size_t i = 0; i < lm; ++i) {
        s.z_layers[i] = {translate(g, i, g.b1, false),
                         translate(g, i, g.b2, false),
                         right + translate(g, i, g.a1, false),
                         right + translate(g, i, g.a2, false)};
    }
    for (size_t r = 0; r < lm; ++r) {
        s.x_layers[r] = {right + translate(g, r, g.b2, true),
                         right + translate(g, r, g.b1, true),
                         translate(g, r, g.a1, true),
                         translate(g, r, g.a2, true)};
    }
    check_schedule_shape(code, s);
    return s;
}

Circuit build_memory_circuit(const StabilizerCode& code, const LogicalBasis& basis,
                             const Schedule& schedule, size_t rounds, NoiseModel noise,
                             Basis mem_basis) {
    require(rounds >= 1, ErrorKind::validation, "memory experiment needs at least one round");
    require(basis.pairs.empty() || basis.size() == code.k, ErrorKind::validation,
            "logical basis size disagrees with k");
    require(noise.p >= 0.0 && noise.p < 1.0, ErrorKind::validation,
            "noise strength must lie in [0, 1)");
    check_schedule_shape(code, schedule);

    uint32_t n = static_cast<uint32_t>(code.n);
    uint32_t cx = static_cast<uint32_t>(code.h_x.rows());
    uint32_t cz = static_cast<uint32_t>(code.h_z.rows());
    double p = noise.p;

    Circuit c;
    c.num_qubits = n + cx + cz;
    c.num_data = n;
    c.num_x_aux = cx;
    c.num_z_aux = cz;
    c.memory_basis = mem_basis;

    std::vector<uint32_t> all_data(n), x_aux(cx), all_aux(cx + cz);
    for (uint32_t q = 0; q < n; ++q) all_data[q] = q;
    for (uint32_t r = 0; r < cx; ++r) x_aux[r] = n + r;
    for (uint32_t a = 0; a < cx + cz; ++a) all_aux[a] = n + a;

    auto noise1 = [&](const std::vector<uint32_t>& targets) {
        if (p > 0) c.append({InstrKind::depolarize1, targets, p});
    };

    c.append({mem_basis == Basis::z ? InstrKind::reset_z : InstrKind::reset_x, all_data});
    noise1(all_data);

    for (size_t t = 1; t <= rounds; ++t) {
        c.append({InstrKind::reset_z, all_aux});
        noise1(all_aux);
        c.append({InstrKind::tick, {}});
        c.append({InstrKind::gate_h, x_aux});
        noise1(x_aux);
        c.append({InstrKind::tick, {}});
        for (int layer = 0; layer < 4; ++layer) {
            std::vector<uint32_t> pairs;
            for (uint32_t r = 0; r < cx; ++r) {
                int q = schedule.x_layers[r][layer];
                if (q >= 0) {
                    pairs.push_back(n + r);
                    pairs.push_back(static_cast<uint32_t>(q));
                }
            }
            for (uint32_t i = 0; i < cz; ++i) {
                int q = schedule.z_layers[i][layer];
                if (q >= 0) {
                    pairs.push_back(static_cast<uint32_t>(q));
                    pairs.push_back(n + cx + i);
                }
            }
            if (!pairs.empty()) {
                c.append({InstrKind::gate_cx, pairs});
                if (p > 0) c.append({InstrKind::depolarize2, pairs, p});
            }
            c.append({InstrKind::tick, {}});
        }
        c.append({InstrKind::gate_h, x_aux});
        noise1(x_aux);
        c.append({InstrKind::tick, {}});
        if (p > 0) c.append({InstrKind::x_error, all_aux, p});
        c.append({InstrKind::measure_z, all_aux});

        uint32_t base = static_cast<uint32_t>((t - 1) * (cx + cz));
        if (t == 1) {
            if (mem_basis == Basis::z) {
                for (uint32_t i = 0; i < cz; ++i) {
                    c.append({InstrKind::detector, {base + cx + i}});
                }
            } else {
                for (uint32_t r = 0; r < cx; ++r) {
                    c.append({InstrKind::detector, {base + r}});
                }
            }
        } else {
            uint32_t prev = base - (cx + cz);
            for (uint32_t r = 0; r < cx; ++r) {
                c.append({InstrKind::detector, {prev + r, base + r}});
            }
            for (uint32_t i = 0; i < cz; ++i) {
                c.append({InstrKind::detector, {prev + cx + i, base + cx + i}});
            }
        }
    }

    if (p > 0) {
        c.append({mem_basis == Basis::z ? InstrKind::x_error : InstrKind::z_error, all_data, p});
    }
    c.append({mem_basis == Basis::z ? InstrKind::measure_z : InstrKind::measure_x, all_data});

    uint32_t data_base = static_cast<uint32_t>(rounds * (cx + cz));
    uint32_t last = data_base - (cx + cz);
    const BitMatrix& h_mem = mem_basis == Basis::z ? code.h_z : code.h_x;
    uint32_t aux_off = mem_basis == Basis::z ? cx : 0;
    for (uint32_t i = 0; i < h_mem.rows(); ++i) {
        std::vector<uint32_t> targets{last + aux_off + i};
        for (size_t q : h_mem.row_support(i)) {
            targets.push_back(data_base + static_cast<uint32_t>(q));
        }
        c.append({InstrKind::detector, targets});
    }

    for (size_t idx = 0; idx < basis.pairs.size(); ++idx) {
        const PauliOp& op =
            mem_basis == Basis::z ? basis.pairs[idx].second : basis.pairs[idx].first;
        require(op.n == code.n, ErrorKind::validation,
                "logical operator qubit count disagrees with the code");
        std::vector<uint32_t> targets;
        for (size_t q = 0; q < code.n; ++q) {
            bool off_basis = mem_basis == Basis::z ? op.x_bit(q) : op.z_bit(q);
            require(!off_basis, ErrorKind::validation,
                    "logical representative is not measurable by the transversal readout");
            bool on = mem_basis == Basis::z ? op.z_bit(q) : op.x_bit(q);
            if (on) targets.push_back(data_base + static_cast<uint32_t>(q));
        }
        c.append({InstrKind::observable_include, targets, static_cast<double>(idx)});
    }
    return c;
}

Circuit build_memory_circuit(const StabilizerCode& code, const LogicalBasis& basis,
                             size_t rounds, NoiseModel noise, Basis mem_basis) {
    return build_memory_circuit(code, basis, make_schedule(code), rounds, noise, mem_basis);
}

bool validate_schedule(const StabilizerCode& code, const Schedule& schedule) {
    check_schedule_shape(code, schedule);
    for (Basis mem : {Basis::z, Basis::x}) {
        Circuit base = build_memory_circuit(code, LogicalBasis{}, schedule, 2, NoiseModel{}, mem);
        if (!analyze_circuit(base).all_detectors_zero()) return false;

        const BitMatrix& h_mem = mem == Basis::z ? code.h_z : code.h_x;
        uint32_t mem_checks = static_cast<uint32_t>(h_mem.rows());
        for (uint32_t q = 0; q < code.n; ++q) {
            // Inject the anticommuting single-qubit flip right after the data
            // reset; round-one detectors must report that qubit's column.
            Circuit probe;
            probe.num_qubits = base.num_qubits;
            probe.num_data = base.num_data;
            probe.num_x_aux = base.num_x_aux;
            probe.num_z_aux = base.num_z_aux;
            probe.memory_basis = base.memory_basis;
            probe.append(base.instructions[0]);
            probe.append({mem == Basis::z ? InstrKind::gate_x : InstrKind::gate_z, {q}});
            for (size_t i = 1; i < base.instructions.size(); ++i) {
                probe.append(base.instructions[i]);
            }
            TableauAnalysis a = analyze_circuit(probe);
            if (!a.detectors_deterministic()) return false;
            for (size_t d = 0; d < a.detector_values.size(); ++d) {
                bool expected = d < mem_checks && h_mem.get(d, q);
                if (a.detector_values[d] != static_cast<uint8_t>(expected)) return false;
            }
        }
    }
    return true;
}

}  // namespace tb
