#include "tbcodes/tableau_sim.hpp"

#include <algorithm>
#include <bit>

#include "tbcodes/error.hpp"

namespace tb {

TableauSimulator::TableauSimulator(size_t num_qubits)
    : n_(num_qubits), words_((num_qubits + 63) / 64) {
    require(n_ > 0, ErrorKind::shape, "simulator needs at least one qubit");
    xs_.assign((2 * n_ + 1) * words_, 0);
    zs_.assign((2 * n_ + 1) * words_, 0);
    signs_.assign(2 * n_ + 1, 0);
    for (size_t i = 0; i < n_; ++i) {
        x_row(i)[i >> 6] |= 1ull << (i & 63);          // destabilizer X_i
        z_row(n_ + i)[i >> 6] |= 1ull << (i & 63);     // stabilizer Z_i
    }
}

void TableauSimulator::apply_h(size_t q) {
    size_t w = q >> 6;
    uint64_t bit = 1ull << (q & 63);
    for (size_t r = 0; r < 2 * n_; ++r) {
        uint64_t& x = x_row(r)[w];
        uint64_t& z = z_row(r)[w];
        signs_[r] ^= ((x & z) >> (q & 63)) & 1;
        uint64_t diff = (x ^ z) & bit;
        x ^= diff;
        z ^= diff;
    }
}

void TableauSimulator::apply_s(size_t q) {
    size_t w = q >> 6;
    uint64_t bit = 1ull << (q & 63);
    for (size_t r = 0; r < 2 * n_; ++r) {
        uint64_t x = x_row(r)[w];
        uint64_t& z = z_row(r)[w];
        signs_[r] ^= ((x & z) >> (q & 63)) & 1;
        z ^= x & bit;
    }
}

void TableauSimulator::apply_cx(size_t c, size_t t) {
    size_t wc = c >> 6, wt = t >> 6;
    uint64_t bc = 1ull << (c & 63), bt = 1ull << (t & 63);
    for (size_t r = 0; r < 2 * n_; ++r) {
        uint64_t xc = (x_row(r)[wc] & bc) != 0;
        uint64_t zc = (z_row(r)[wc] & bc) != 0;
        uint64_t xt = (x_row(r)[wt] & bt) != 0;
        uint64_t zt = (z_row(r)[wt] & bt) != 0;
        signs_[r] ^= static_cast<uint8_t>(xc & zt & (xt ^ zc ^ 1));
        if (xc) x_row(r)[wt] ^= bt;
        if (zt) z_row(r)[wc] ^= bc;
    }
}

void TableauSimulator::apply_cz(size_t a, size_t b) {
    apply_h(b);
    apply_cx(a, b);
    apply_h(b);
}

void TableauSimulator::apply_x(size_t q) {
    for (size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= z_bit(r, q);
}

void TableauSimulator::apply_z(size_t q) {
    for (size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= x_bit(r, q);
}

void TableauSimulator::apply_y(size_t q) {
    for (size_t r = 0; r < 2 * n_; ++r) signs_[r] ^= x_bit(r, q) ^ z_bit(r, q);
}

void TableauSimulator::rowsum(size_t h, size_t i) {
    // Phase bookkeeping from the standard tableau update: the exponent of i
    // in (row i) * (row h), accumulated per qubit, stays in {0, 2} mod 4.
    int64_t sum = 2 * signs_[h] + 2 * signs_[i];
    const uint64_t* xi = x_row(i);
    const uint64_t* zi = z_row(i);
    uint64_t* xh = x_row(h);
    uint64_t* zh = z_row(h);
    for (size_t w = 0; w < words_; ++w) {
        uint64_t plus = (xi[w] & zi[w] & zh[w] & ~xh[w]) |
                        (xi[w] & ~zi[w] & xh[w] & zh[w]) |
                        (~xi[w] & zi[w] & xh[w] & ~zh[w]);
        uint64_t minus = (xi[w] & zi[w] & xh[w] & ~zh[w]) |
                         (xi[w] & ~zi[w] & ~xh[w] & zh[w]) |
                         (~xi[w] & zi[w] & xh[w] & zh[w]);
        sum += std::popcount(plus) - std::popcount(minus);
        xh[w] ^= xi[w];
        zh[w] ^= zi[w];
    }
    int64_t mod = ((sum % 4) + 4) % 4;
    require(mod == 0 || mod == 2, ErrorKind::contract, "tableau rowsum produced phase i");
    signs_[h] = mod == 2;
}

std::vector<uint64_t> TableauSimulator::symplectic_row(size_t r) const {
    std::vector<uint64_t> out((2 * n_ + 63) / 64, 0);
    for (size_t q = 0; q < n_; ++q) {
        if (x_bit(r, q)) out[q >> 6] |= 1ull << (q & 63);
        if (z_bit(r, q)) out[(n_ + q) >> 6] |= 1ull << ((n_ + q) & 63);
    }
    return out;
}

TableauSimulator::Outcome TableauSimulator::measure_z(size_t q) {
    size_t p = 2 * n_;
    for (size_t r = n_; r < 2 * n_; ++r) {
        if (x_bit(r, q)) {
            p = r;
            break;
        }
    }
    if (p < 2 * n_) {
        Outcome out;
        out.random = true;
        out.value = false;  // forced
        out.collapse = symplectic_row(p);
        for (size_t i = 0; i < 2 * n_; ++i) {
            if (i != p && x_bit(i, q)) rowsum(i, p);
        }
        std::copy(x_row(p), x_row(p) + words_, x_row(p - n_));
        std::copy(z_row(p), z_row(p) + words_, z_row(p - n_));
        signs_[p - n_] = signs_[p];
        std::fill(x_row(p), x_row(p) + words_, 0);
        std::fill(z_row(p), z_row(p) + words_, 0);
        z_row(p)[q >> 6] = 1ull << (q & 63);
        signs_[p] = 0;
        return out;
    }
    // Deterministic: accumulate the stabilizer combination fixing Z_q.
    size_t s = 2 * n_;
    std::fill(x_row(s), x_row(s) + words_, 0);
    std::fill(z_row(s), z_row(s) + words_, 0);
    signs_[s] = 0;
    for (size_t i = 0; i < n_; ++i) {
        if (x_bit(i, q)) rowsum(s, i + n_);
    }
    Outcome out;
    out.value = signs_[s];
    return out;
}

TableauSimulator::Outcome TableauSimulator::measure_x(size_t q) {
    apply_h(q);
    Outcome out = measure_z(q);
    apply_h(q);
    if (out.random) {
        // Conjugate the collapse row through the trailing H.
        bool x = (out.collapse[q >> 6] >> (q & 63)) & 1;
        size_t zq = n_ + q;
        bool z = (out.collapse[zq >> 6] >> (zq & 63)) & 1;
        if (x != z) {
            out.collapse[q >> 6] ^= 1ull << (q & 63);
            out.collapse[zq >> 6] ^= 1ull << (zq & 63);
        }
    }
    return out;
}

TableauSimulator::Outcome TableauSimulator::reset_z(size_t q) {
    Outcome out = measure_z(q);
    if (out.value) apply_x(q);
    if (out.random) {
        // Trajectory difference collapses to a frame supported off q.
        out.collapse[q >> 6] &= ~(1ull << (q & 63));
        size_t zq = n_ + q;
        out.collapse[zq >> 6] &= ~(1ull << (zq & 63));
    }
    return out;
}

TableauSimulator::Outcome TableauSimulator::reset_x(size_t q) {
    apply_h(q);
    Outcome out = reset_z(q);
    apply_h(q);
    return out;
}

bool TableauAnalysis::detectors_deterministic() const {
    return std::all_of(detector_deterministic.begin(), detector_deterministic.end(),
                       [](uint8_t v) { return v != 0; });
}

bool TableauAnalysis::all_detectors_zero() const {
    if (!detectors_deterministic()) return false;
    return std::all_of(detector_values.begin(), detector_values.end(),
                       [](uint8_t v) { return v == 0; });
}

namespace {

// One measurement or reset occurrence in execution order.
struct OpSlot {
    InstrKind kind;
    uint32_t qubit;
    int record;  // -1 for resets
    bool random;
    std::vector<uint64_t> collapse;
};

// A source of randomness in the reference run: flipping its outcome maps the
// reference trajectory to the alternative one via a Pauli frame.
struct RandomEvent {
    size_t instr_index;
    size_t target_pos;
    size_t slot_index;
    int record;  // self-flipping record, -1 for resets
    std::vector<uint64_t> frame;
};

}  // namespace

TableauAnalysis analyze_circuit(const Circuit& circuit) {
    require(circuit.num_qubits > 0, ErrorKind::shape, "circuit has no qubits");
    size_t n = circuit.num_qubits;
    TableauSimulator sim(n);

    TableauAnalysis res;
    std::vector<OpSlot> slots;
    std::vector<RandomEvent> events;

    for (size_t idx = 0; idx < circuit.instructions.size(); ++idx) {
        const Instruction& instr = circuit.instructions[idx];
        const auto& t = instr.targets;
        switch (instr.kind) {
            case InstrKind::gate_h:
                for (uint32_t q : t) sim.apply_h(q);
                break;
            case InstrKind::gate_cx:
                for (size_t i = 0; i < t.size(); i += 2) sim.apply_cx(t[i], t[i + 1]);
                break;
            case InstrKind::gate_cz:
                for (size_t i = 0; i < t.size(); i += 2) sim.apply_cz(t[i], t[i + 1]);
                break;
            case InstrKind::gate_x:
                for (uint32_t q : t) sim.apply_x(q);
                break;
            case InstrKind::gate_y:
                for (uint32_t q : t) sim.apply_y(q);
                break;
            case InstrKind::gate_z:
                for (uint32_t q : t) sim.apply_z(q);
                break;
            case InstrKind::reset_z:
            case InstrKind::reset_x:
            case InstrKind::measure_z:
            case InstrKind::measure_x: {
                bool measures = instr_is_measurement(instr.kind);
                for (size_t pos = 0; pos < t.size(); ++pos) {
                    uint32_t q = t[pos];
                    TableauSimulator::Outcome out;
                    if (instr.kind == InstrKind::reset_z) out = sim.reset_z(q);
                    else if (instr.kind == InstrKind::reset_x) out = sim.reset_x(q);
                    else if (instr.kind == InstrKind::measure_z) out = sim.measure_z(q);
                    else out = sim.measure_x(q);
                    int rec = -1;
                    if (measures) {
                        rec = static_cast<int>(res.measurement_values.size());
                        res.measurement_values.push_back(out.value);
                        res.measurement_random.push_back(out.random);
                    }
                    if (out.random) {
                        events.push_back({idx, pos, slots.size(), rec, out.collapse});
                    }
                    slots.push_back({instr.kind, q, rec, out.random, std::move(out.collapse)});
                }
                break;
            }
            default:
                break;  // noise, tick, detector, observable
        }
    }

    // Reference detector and observable values.
    res.detector_values.reserve(circuit.num_detectors);
    res.observable_values.assign(circuit.num_observables, 0);
    for (const Instruction& instr : circuit.instructions) {
        if (instr.kind == InstrKind::detector) {
            uint8_t v = 0;
            for (uint32_t r : instr.targets) v ^= res.measurement_values[r];
            res.detector_values.push_back(v);
        } else if (instr.kind == InstrKind::observable_include) {
            uint8_t v = 0;
            for (uint32_t r : instr.targets) v ^= res.measurement_values[r];
            res.observable_values[static_cast<uint32_t>(instr.arg)] ^= v;
        }
    }
    res.detector_deterministic.assign(circuit.num_detectors, 1);
    res.observable_deterministic.assign(circuit.num_observables, 1);

    // Propagate each random event's frame through the rest of the circuit,
    // holding every other random outcome fixed; record flips expose any
    // detector that depends on the collapse choice.
    size_t half_words = (n + 63) / 64;
    size_t full_words = (2 * n + 63) / 64;
    std::vector<uint64_t> fx(half_words), fz(half_words);
    std::vector<uint8_t> recflip(res.measurement_values.size());
    auto get_bit = [](const std::vector<uint64_t>& v, size_t i) -> bool {
        return (v[i >> 6] >> (i & 63)) & 1;
    };
    auto flip_bit = [](std::vector<uint64_t>& v, size_t i) { v[i >> 6] ^= 1ull << (i & 63); };

    for (const RandomEvent& ev : events) {
        std::fill(fx.begin(), fx.end(), 0);
        std::fill(fz.begin(), fz.end(), 0);
        std::fill(recflip.begin(), recflip.end(), 0);
        for (size_t q = 0; q < n; ++q) {
            if (get_bit(ev.frame, q)) flip_bit(fx, q);
            if (get_bit(ev.frame, n + q)) flip_bit(fz, q);
        }
        if (ev.record >= 0) recflip[ev.record] = 1;
        size_t cursor = ev.slot_index + 1;

        auto absorb_collapse = [&](const std::vector<uint64_t>& collapse) {
            for (size_t w = 0; w < full_words; ++w) {
                uint64_t word = collapse[w];
                while (word) {
                    size_t bit = w * 64 + static_cast<size_t>(std::countr_zero(word));
                    word &= word - 1;
                    if (bit < n) flip_bit(fx, bit);
                    else flip_bit(fz, bit - n);
                }
            }
        };

        for (size_t idx = ev.instr_index; idx < circuit.instructions.size(); ++idx) {
            const Instruction& instr = circuit.instructions[idx];
            const auto& t = instr.targets;
            // Events originate at measure/reset targets, so only those
            // instructions ever resume mid-target-list.
            size_t start = idx == ev.instr_index ? ev.target_pos + 1 : 0;
            switch (instr.kind) {
                case InstrKind::gate_h:
                    for (uint32_t q : t) {
                        bool x = get_bit(fx, q), z = get_bit(fz, q);
                        if (x != z) {
                            flip_bit(fx, q);
                            flip_bit(fz, q);
                        }
                    }
                    break;
                case InstrKind::gate_cx:
                    for (size_t i = 0; i + 1 < t.size(); i += 2) {
                        uint32_t c = t[i], tt = t[i + 1];
                        if (get_bit(fx, c)) flip_bit(fx, tt);
                        if (get_bit(fz, tt)) flip_bit(fz, c);
                    }
                    break;
                case InstrKind::gate_cz:
                    for (size_t i = 0; i + 1 < t.size(); i += 2) {
                        uint32_t a = t[i], b = t[i + 1];
                        if (get_bit(fx, b)) flip_bit(fz, a);
                        if (get_bit(fx, a)) flip_bit(fz, b);
                    }
                    break;
                case InstrKind::reset_z:
                case InstrKind::reset_x:
                case InstrKind::measure_z:
                case InstrKind::measure_x: {
                    for (size_t pos = start; pos < t.size(); ++pos) {
                        const OpSlot& slot = slots[cursor++];
                        uint32_t q = slot.qubit;
                        bool x_basis = slot.kind == InstrKind::measure_x ||
                                       slot.kind == InstrKind::reset_x;
                        bool overlap = x_basis ? get_bit(fz, q) : get_bit(fx, q);
                        if (instr_is_measurement(slot.kind)) {
                            if (slot.random) {
                                if (overlap) absorb_collapse(slot.collapse);
                            } else if (overlap) {
                                recflip[slot.record] ^= 1;
                            }
                        } else {
                            if (slot.random && overlap) absorb_collapse(slot.collapse);
                            if (get_bit(fx, q)) flip_bit(fx, q);
                            if (get_bit(fz, q)) flip_bit(fz, q);
                        }
                    }
                    break;
                }
                default:
                    break;
            }
        }

        size_t det_idx = 0;
        for (const Instruction& instr : circuit.instructions) {
            if (instr.kind == InstrKind::detector) {
                uint8_t v = 0;
                for (uint32_t r : instr.targets) v ^= recflip[r];
                if (v) res.detector_deterministic[det_idx] = 0;
                ++det_idx;
            } else if (instr.kind == InstrKind::observable_include) {
                uint8_t v = 0;
                for (uint32_t r : instr.targets) v ^= recflip[r];
                if (v) res.observable_deterministic[static_cast<uint32_t>(instr.arg)] = 0;
            }
        }
    }
    return res;
}

}  // namespace tb
