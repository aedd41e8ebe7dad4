#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace rps {

// Derives the seed for the index-th run of a batch (tournament matches,
// repeated attack trials) from one base seed. SplitMix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// The single simulation stream. Bounded draws use rejection sampling on raw
// mt19937_64 outputs, so the sequence never depends on the standard
// library's distribution implementations and is identical on every platform.
//
// Each public call counts as one logical draw; the simulator uses the draw
// counter to trace draws made inside code it does not own (strategies,
// key generation).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() {
        ++draws_;
        return gen_();
    }

    // uniform on [lo, hi], both inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        ++draws_;
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return lo + static_cast<std::int64_t>(bounded(span));
    }

    void fill(std::uint8_t* out, std::size_t n) {
        ++draws_;
        std::size_t i = 0;
        while (i < n) {
            std::uint64_t v = gen_();
            for (int shift = 56; shift >= 0 && i < n; shift -= 8)
                out[i++] = static_cast<std::uint8_t>(v >> shift);
        }
    }

    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t bounded(std::uint64_t span) {
        if (span == 0) return gen_();  // full 64-bit range
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % span;
    }

    std::mt19937_64 gen_;
    std::uint64_t draws_ = 0;
};

}  // namespace rps
