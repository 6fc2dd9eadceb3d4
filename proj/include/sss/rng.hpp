#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sss {

// Deterministic randomness source. mt19937_64 has a standard-mandated output
// sequence, and the sampling helpers below avoid std::uniform_*_distribution
// (whose output is implementation-defined), so a seed pins byte-identical
// behavior across platforms. Not cryptographically strong; fine for an
// artifact whose secrecy claims are only exercised at desk scale.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream keyed by (seed, name). Used to keep unrelated
    // consumers from perturbing each other's draw sequences.
    static Rng derive(std::uint64_t seed, std::string_view stream) {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a over the stream name
        for (unsigned char c : stream) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
        return Rng(seq);
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, bound), bound >= 1. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t residue = UINT64_MAX % bound;
        // Accept everything unless UINT64_MAX+1 is not a multiple of bound,
        // in which case the top partial block of size residue+1 is rejected.
        const std::uint64_t limit = UINT64_MAX - residue;
        std::uint64_t v = engine_();
        while (residue + 1 != bound && v >= limit)
            v = engine_();
        return v % bound;
    }

    // Uniform on [0, 1), 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    explicit Rng(std::seed_seq& seq) : engine_(seq) {}

    std::mt19937_64 engine_;
};

} // namespace sss
