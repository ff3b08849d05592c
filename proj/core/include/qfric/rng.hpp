#pragma once

#include <cstdint>

namespace qfric {

// Standard normal stream. Uniforms come from SplitMix64 in counter mode: draw
// number i (from 0) is mix64(seed + (i + 1) * 0x9E3779B97F4A7C15), mapped to
// (0, 1] as ((x >> 11) + 1) * 2^-53. Normals come in Box-Muller pairs
// r cos(2 pi u2), r sin(2 pi u2) with r = sqrt(-2 ln u1).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept;
    double next_uniform() noexcept;
    double next_normal() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}
