#pragma once

#include <cstdint>

namespace semwave::rng {

// Counter-based splitmix64. Deterministic across platforms and languages:
// state = seed + (counter+1) * 0x9E3779B97F4A7C15, then two xor-shift-multiply
// rounds. uniform01 maps the top 53 bits onto [0, 1).
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(splitmix64(seed, counter) >> 11) * 0x1.0p-53;
}

} // namespace semwave::rng
