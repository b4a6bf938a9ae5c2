#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace schedlens {

// Draw helpers layered on mt19937_64. The <random> distribution classes are
// implementation-defined, so anything that must reproduce byte-identical
// output files goes through these instead.

inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

// Inclusive on both ends. Modulo bias is negligible at the span sizes used here.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(rng() % span);
}

inline double exponential(std::mt19937_64& rng, double mean) {
    return -mean * std::log1p(-uniform_unit(rng));
}

}  // namespace schedlens
