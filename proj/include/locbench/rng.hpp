#pragma once

#include <cstdint>
#include <random>

namespace locbench {

// All seeded randomness goes through mt19937_64 plus the two helpers below,
// so a given seed reproduces the same stream on every platform (the standard
// pins the engine but not the distributions).
using Rng = std::mt19937_64;

inline double uniform_real(Rng& rng, double lo, double hi) {
    // 53 random bits mapped to [0, 1).
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

// Inclusive on both ends. Modulo bias is irrelevant at instance-generation scale.
inline int uniform_int(Rng& rng, int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

}  // namespace locbench
