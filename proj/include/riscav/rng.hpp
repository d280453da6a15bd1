// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace riscav {

// std::mt19937_64 output is pinned by the standard; the conversions below are
// spelled out so draws are identical on every platform and compiler
// (std::uniform_*_distribution is implementation-defined and never used).

// Uniform in [0, bound). Rejection sampling, no modulo bias.
inline std::uint64_t bounded_uint64(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0)
        return 0;
    if ((bound & (bound - 1)) == 0)
        return rng() & (bound - 1); // power of two
    std::uint64_t limit = (UINT64_MAX / bound) * bound;
    std::uint64_t x = rng();
    while (x >= limit)
        x = rng();
    return x % bound;
}

// Uniform in [0, 1) with 53 random bits.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [-half_width, +half_width].
inline double symmetric_double(std::mt19937_64& rng, double half_width) {
    return (2.0 * unit_double(rng) - 1.0) * half_width;
}

} // namespace riscav
