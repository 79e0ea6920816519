#pragma once

#include <cstdint>

namespace tb {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based random stream. A stream is keyed by (seed, stream_id) and
// every draw is a pure function of (key, counter), so independent streams can
// be consumed in any order (or on any thread) with identical results.
class RngStream {
  public:
    RngStream(uint64_t seed, uint64_t stream_id)
        : key_(mix64(mix64(seed) ^ (stream_id * 0xd1342543de82ef95ull))) {}

    uint64_t next() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

    // Uniform in [0, bound). Rejection-free modulo bias is fine for bound
    // values far below 2^64 as used here (bound <= 2^32).
    uint64_t next_below(uint64_t bound) { return next() % bound; }

    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

// Fills one 64-bit word whose bits are independent Bernoulli(p) draws.
// p is quantized to a 32-bit fixed-point fraction; the AND/OR ladder over
// uniform words realizes each binary digit of p exactly.
inline uint64_t biased_word(RngStream& rng, uint32_t p_fixed32) {
    if (p_fixed32 == 0) return 0;
    uint64_t w = 0;
    for (int bit = 0; bit < 32; ++bit) {
        uint64_t r = rng.next();
        if ((p_fixed32 >> bit) & 1u) {
            w |= r;
        } else {
            w &= r;
        }
    }
    return w;
}

inline uint32_t probability_to_fixed32(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return 0xffffffffu;
    double scaled = p * 4294967296.0;
    auto fixed = static_cast<uint64_t>(scaled + 0.5);
    if (fixed > 0xffffffffull) fixed = 0xffffffffull;
    return static_cast<uint32_t>(fixed);
}

}  // namespace tb
