// SPDX-License-Identifier: Apache-2.0
//
// Reproducible per-trial random streams. Stream derivation is
// (seed, trial_index) -> splitmix64(seed ^ golden-ratio mix of index)
// expanded into a xoshiro256++ state, so results are independent of how
// trials are scheduled across threads. Standard normals come from the
// Marsaglia-Tsang 128-layer ziggurat.
#ifndef THZ_RNG_HPP
#define THZ_RNG_HPP

#include <cstdint>

namespace thz::sim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256pp {
public:
    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::uint32_t next32() { return static_cast<std::uint32_t>(next() >> 32); }

    // uniform in (0, 1)
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace thz::sim

#endif
