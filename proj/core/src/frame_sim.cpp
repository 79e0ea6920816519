#include "tbcodes/frame_sim.hpp"

#include <algorithm>
#include <bit>
#include <thread>
#include <utility>

#include "tbcodes/error.hpp"
#include "tbcodes/rng.hpp"
#include "tbcodes/tableau_sim.hpp"

namespace tb {

bool SampleResult::detector_bit(size_t shot, size_t d) const {
    size_t w = words_per_plane();
    return (detectors[d * w + (shot >> 6)] >> (shot & 63)) & 1;
}

bool SampleResult::observable_bit(size_t shot, size_t k) const {
    size_t w = words_per_plane();
    return (observables[k * w + (shot >> 6)] >> (shot & 63)) & 1;
}

std::vector<uint8_t> SampleResult::pack_b8() const {
    size_t bits = num_detectors + num_observables;
    size_t bytes_per_shot = (bits + 7) / 8;
    std::vector<uint8_t> out(bytes_per_shot * shots, 0);
    for (size_t s = 0; s < shots; ++s) {
        uint8_t* row = out.data() + s * bytes_per_shot;
        for (size_t d = 0; d < num_detectors; ++d)
            if (detector_bit(s, d)) row[d >> 3] |= static_cast<uint8_t>(1u << (d & 7));
        for (size_t k = 0; k < num_observables; ++k) {
            size_t i = num_detectors + k;
            if (observable_bit(s, k)) row[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
        }
    }
    return out;
}

SampleResult unpack_b8(const std::vector<uint8_t>& bytes, size_t shots,
                       size_t num_detectors, size_t num_observables) {
    size_t bits = num_detectors + num_observables;
    size_t bytes_per_shot = (bits + 7) / 8;
    require(bytes.size() == bytes_per_shot * shots, ErrorKind::parse,
            "b8 payload size does not match shots * record width");
    SampleResult res;
    res.shots = shots;
    res.num_detectors = num_detectors;
    res.num_observables = num_observables;
    size_t w = res.words_per_plane();
    res.detectors.assign(num_detectors * w, 0);
    res.observables.assign(num_observables * w, 0);
    for (size_t s = 0; s < shots; ++s) {
        const uint8_t* row = bytes.data() + s * bytes_per_shot;
        uint64_t lane = 1ull << (s & 63);
        for (size_t d = 0; d < num_detectors; ++d)
            if ((row[d >> 3] >> (d & 7)) & 1) res.detectors[d * w + (s >> 6)] |= lane;
        for (size_t k = 0; k < num_observables; ++k) {
            size_t i = num_detectors + k;
            if ((row[i >> 3] >> (i & 7)) & 1) res.observables[k * w + (s >> 6)] |= lane;
        }
    }
    return res;
}

namespace {

// Uniform over {1, 2, 3}: bit 0 flips the X frame, bit 1 the Z frame.
uint8_t draw_pauli1(RngStream& rng) {
    for (;;) {
        uint64_t v = rng.next() & 3;
        if (v != 3) return static_cast<uint8_t>(v + 1);
    }
}

// Uniform over the 15 non-identity two-qubit Paulis, bits (Xa, Za, Xb, Zb).
uint8_t draw_pauli2(RngStream& rng) {
    for (;;) {
        uint64_t v = rng.next() & 15;
        if (v != 0) return static_cast<uint8_t>(v);
    }
}

struct RecordGroups {
    std::vector<std::vector<uint32_t>> detector_records;
    std::vector<std::vector<uint32_t>> observable_records;
};

RecordGroups collect_record_groups(const Circuit& c) {
    RecordGroups g;
    g.detector_records.reserve(c.num_detectors);
    g.observable_records.assign(c.num_observables, {});
    for (const Instruction& ins : c.instructions) {
        if (ins.kind == InstrKind::detector) {
            g.detector_records.push_back(ins.targets);
        } else if (ins.kind == InstrKind::observable_include) {
            auto idx = static_cast<size_t>(ins.arg);
            auto& recs = g.observable_records[idx];
            recs.insert(recs.end(), ins.targets.begin(), ins.targets.end());
        }
    }
    return g;
}

// Runs one 64-lane block of the frame simulation. Record flips land in
// rec[m]; frames start clear and noise channels draw from rng.
void run_frame_block(const Circuit& c, RngStream& rng, uint64_t* fx, uint64_t* fz,
                     uint64_t* rec) {
    std::fill(fx, fx + c.num_qubits, 0);
    std::fill(fz, fz + c.num_qubits, 0);
    size_t m = 0;
    for (const Instruction& ins : c.instructions) {
        switch (ins.kind) {
            case InstrKind::reset_z:
            case InstrKind::reset_x:
                for (uint32_t q : ins.targets) {
                    fx[q] = 0;
                    fz[q] = 0;
                }
                break;
            case InstrKind::measure_z:
                for (uint32_t q : ins.targets) rec[m++] = fx[q];
                break;
            case InstrKind::measure_x:
                for (uint32_t q : ins.targets) rec[m++] = fz[q];
                break;
            case InstrKind::gate_h:
                for (uint32_t q : ins.targets) std::swap(fx[q], fz[q]);
                break;
            case InstrKind::gate_cx:
                for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                    uint32_t ctl = ins.targets[i];
                    uint32_t tgt = ins.targets[i + 1];
                    fx[tgt] ^= fx[ctl];
                    fz[ctl] ^= fz[tgt];
                }
                break;
            case InstrKind::gate_cz:
                for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                    uint32_t a = ins.targets[i];
                    uint32_t b = ins.targets[i + 1];
                    fz[a] ^= fx[b];
                    fz[b] ^= fx[a];
                }
                break;
            case InstrKind::gate_x:
            case InstrKind::gate_y:
            case InstrKind::gate_z:
            case InstrKind::tick:
                break;
            case InstrKind::x_error: {
                uint32_t p32 = probability_to_fixed32(ins.arg);
                for (uint32_t q : ins.targets) fx[q] ^= biased_word(rng, p32);
                break;
            }
            case InstrKind::z_error: {
                uint32_t p32 = probability_to_fixed32(ins.arg);
                for (uint32_t q : ins.targets) fz[q] ^= biased_word(rng, p32);
                break;
            }
            case InstrKind::depolarize1: {
                uint32_t p32 = probability_to_fixed32(ins.arg);
                for (uint32_t q : ins.targets) {
                    uint64_t mask = biased_word(rng, p32);
                    while (mask) {
                        uint64_t bit = mask & (~mask + 1);
                        mask ^= bit;
                        uint8_t pa = draw_pauli1(rng);
                        if (pa & 1) fx[q] ^= bit;
                        if (pa & 2) fz[q] ^= bit;
                    }
                }
                break;
            }
            case InstrKind::depolarize2: {
                uint32_t p32 = probability_to_fixed32(ins.arg);
                for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                    uint32_t a = ins.targets[i];
                    uint32_t b = ins.targets[i + 1];
                    uint64_t mask = biased_word(rng, p32);
                    while (mask) {
                        uint64_t bit = mask & (~mask + 1);
                        mask ^= bit;
                        uint8_t pa = draw_pauli2(rng);
                        if (pa & 1) fx[a] ^= bit;
                        if (pa & 2) fz[a] ^= bit;
                        if (pa & 4) fx[b] ^= bit;
                        if (pa & 8) fz[b] ^= bit;
                    }
                }
                break;
            }
            case InstrKind::detector:
            case InstrKind::observable_include:
                break;
        }
    }
}

}  // namespace

SampleResult sample_circuit(const Circuit& c, size_t shots, uint64_t seed,
                            int threads) {
    require(shots > 0, ErrorKind::validation, "shots must be positive");
    TableauAnalysis ref = analyze_circuit(c);
    require(ref.detectors_deterministic(), ErrorKind::contract,
            "circuit has a non-deterministic detector");
    require(std::all_of(ref.observable_deterministic.begin(),
                        ref.observable_deterministic.end(),
                        [](uint8_t b) { return b != 0; }),
            ErrorKind::contract, "circuit has a non-deterministic observable");

    RecordGroups groups = collect_record_groups(c);
    SampleResult res;
    res.shots = shots;
    res.num_detectors = c.num_detectors;
    res.num_observables = c.num_observables;
    size_t words = res.words_per_plane();
    res.detectors.assign(res.num_detectors * words, 0);
    res.observables.assign(res.num_observables * words, 0);

    auto worker = [&](size_t first, size_t stride) {
        std::vector<uint64_t> fx(c.num_qubits), fz(c.num_qubits);
        std::vector<uint64_t> rec(c.num_measurements);
        for (size_t w = first; w < words; w += stride) {
            RngStream rng(seed, w);
            run_frame_block(c, rng, fx.data(), fz.data(), rec.data());
            for (size_t d = 0; d < res.num_detectors; ++d) {
                uint64_t v = ref.detector_values[d] ? ~0ull : 0ull;
                for (uint32_t r : groups.detector_records[d]) v ^= rec[r];
                res.detectors[d * words + w] = v;
            }
            for (size_t k = 0; k < res.num_observables; ++k) {
                uint64_t v = ref.observable_values[k] ? ~0ull : 0ull;
                for (uint32_t r : groups.observable_records[k]) v ^= rec[r];
                res.observables[k * words + w] = v;
            }
        }
    };

    size_t nthreads = threads < 1 ? 1 : static_cast<size_t>(threads);
    nthreads = std::min(nthreads, words);
    if (nthreads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (size_t t = 0; t < nthreads; ++t)
            pool.emplace_back(worker, t, nthreads);
        for (auto& th : pool) th.join();
    }

    if (shots % 64) {
        uint64_t mask = (1ull << (shots % 64)) - 1;
        for (size_t d = 0; d < res.num_detectors; ++d)
            res.detectors[d * words + words - 1] &= mask;
        for (size_t k = 0; k < res.num_observables; ++k)
            res.observables[k * words + words - 1] &= mask;
    }
    return res;
}

std::vector<FaultSite> enumerate_fault_sites(const Circuit& c,
                                             std::vector<double>* probs) {
    std::vector<FaultSite> sites;
    if (probs) probs->clear();
    for (size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        if (!instr_is_noise(ins.kind)) continue;
        switch (ins.kind) {
            case InstrKind::depolarize1:
                for (uint32_t s = 0; s < ins.targets.size(); ++s)
                    for (uint8_t pa = 1; pa <= 3; ++pa) {
                        sites.push_back({i, s, pa});
                        if (probs) probs->push_back(ins.arg / 3.0);
                    }
                break;
            case InstrKind::depolarize2:
                for (uint32_t s = 0; s < ins.targets.size() / 2; ++s)
                    for (uint8_t pa = 1; pa <= 15; ++pa) {
                        sites.push_back({i, s, pa});
                        if (probs) probs->push_back(ins.arg / 15.0);
                    }
                break;
            case InstrKind::x_error:
                for (uint32_t s = 0; s < ins.targets.size(); ++s) {
                    sites.push_back({i, s, 1});
                    if (probs) probs->push_back(ins.arg);
                }
                break;
            case InstrKind::z_error:
                for (uint32_t s = 0; s < ins.targets.size(); ++s) {
                    sites.push_back({i, s, 2});
                    if (probs) probs->push_back(ins.arg);
                }
                break;
            default:
                break;
        }
    }
    return sites;
}

std::vector<FaultEffect> propagate_faults(const Circuit& c,
                                          const std::vector<FaultSite>& sites) {
    for (const FaultSite& s : sites) {
        require(s.instr < c.instructions.size(), ErrorKind::validation,
                "fault site instruction index out of range");
        const Instruction& ins = c.instructions[s.instr];
        require(instr_is_noise(ins.kind), ErrorKind::validation,
                "fault site does not point at a noise instruction");
        size_t slots = ins.kind == InstrKind::depolarize2 ? ins.targets.size() / 2
                                                          : ins.targets.size();
        require(s.slot < slots, ErrorKind::validation, "fault site slot out of range");
        require(s.pauli != 0 && (ins.kind == InstrKind::depolarize2 ? s.pauli <= 15
                                                                    : s.pauli <= 3),
                ErrorKind::validation, "fault site pauli out of range");
    }

    RecordGroups groups = collect_record_groups(c);
    std::vector<FaultEffect> effects(sites.size());
    std::vector<uint64_t> fx(c.num_qubits), fz(c.num_qubits);
    std::vector<uint64_t> rec(c.num_measurements);

    // Lanes in a batch are sorted by instruction index so one forward walk
    // injects every fault at its own instruction.
    std::vector<size_t> order(sites.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return sites[a].instr < sites[b].instr;
    });

    for (size_t base = 0; base < order.size(); base += 64) {
        size_t lanes = std::min<size_t>(64, order.size() - base);
        std::fill(fx.begin(), fx.end(), 0);
        std::fill(fz.begin(), fz.end(), 0);
        size_t m = 0;
        size_t next_lane = 0;
        for (size_t i = 0; i < c.instructions.size(); ++i) {
            const Instruction& ins = c.instructions[i];
            while (next_lane < lanes) {
                const FaultSite& s = sites[order[base + next_lane]];
                if (s.instr != i) break;
                uint64_t bit = 1ull << next_lane;
                if (ins.kind == InstrKind::depolarize2) {
                    uint32_t a = ins.targets[2 * s.slot];
                    uint32_t b = ins.targets[2 * s.slot + 1];
                    if (s.pauli & 1) fx[a] ^= bit;
                    if (s.pauli & 2) fz[a] ^= bit;
                    if (s.pauli & 4) fx[b] ^= bit;
                    if (s.pauli & 8) fz[b] ^= bit;
                } else {
                    uint32_t q = ins.targets[s.slot];
                    if (s.pauli & 1) fx[q] ^= bit;
                    if (s.pauli & 2) fz[q] ^= bit;
                }
                ++next_lane;
            }
            switch (ins.kind) {
                case InstrKind::reset_z:
                case InstrKind::reset_x:
                    for (uint32_t q : ins.targets) {
                        fx[q] = 0;
                        fz[q] = 0;
                    }
                    break;
                case InstrKind::measure_z:
                    for (uint32_t q : ins.targets) rec[m++] = fx[q];
                    break;
                case InstrKind::measure_x:
                    for (uint32_t q : ins.targets) rec[m++] = fz[q];
                    break;
                case InstrKind::gate_h:
                    for (uint32_t q : ins.targets) std::swap(fx[q], fz[q]);
                    break;
                case InstrKind::gate_cx:
                    for (size_t t = 0; t + 1 < ins.targets.size(); t += 2) {
                        fx[ins.targets[t + 1]] ^= fx[ins.targets[t]];
                        fz[ins.targets[t]] ^= fz[ins.targets[t + 1]];
                    }
                    break;
                case InstrKind::gate_cz:
                    for (size_t t = 0; t + 1 < ins.targets.size(); t += 2) {
                        fz[ins.targets[t]] ^= fx[ins.targets[t + 1]];
                        fz[ins.targets[t + 1]] ^= fx[ins.targets[t]];
                    }
                    break;
                default:
                    break;
            }
        }
        for (size_t d = 0; d < groups.detector_records.size(); ++d) {
            uint64_t v = 0;
            for (uint32_t r : groups.detector_records[d]) v ^= rec[r];
            while (v) {
                size_t lane = static_cast<size_t>(std::countr_zero(v));
                v &= v - 1;
                if (lane < lanes)
                    effects[order[base + lane]].detectors.push_back(
                        static_cast<uint32_t>(d));
            }
        }
        for (size_t k = 0; k < groups.observable_records.size(); ++k) {
            uint64_t v = 0;
            for (uint32_t r : groups.observable_records[k]) v ^= rec[r];
            while (v) {
                size_t lane = static_cast<size_t>(std::countr_zero(v));
                v &= v - 1;
                if (lane < lanes) effects[order[base + lane]].observables |= 1ull << k;
            }
        }
    }
    return effects;
}

}  // namespace tb
