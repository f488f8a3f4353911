#pragma once

#include <array>
#include <cstdint>

namespace llp {

// Trajectory randomness is fully pinned down so that every run is replayable
// from (master seed, trajectory index) alone:
//
//   1. trajectory_seed(master, k) = splitmix64(master + (k+1) * GAMMA), the
//      canonical splitmix64 stream evaluated at position k+1;
//   2. the per-trajectory generator is xoshiro256++ whose four state words
//      are consecutive splitmix64 outputs from that seed;
//   3. uniforms are (x >> 11) * 2^-53, i.e. the top 53 bits of the output.
//
// Both algorithms are public-domain and reproduce bit-for-bit on any
// platform; none of this goes through <random> distributions, whose output
// is implementation-defined.

constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += kSplitmixGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derived seed for trajectory `index` under `master`; documented mixing
/// function, stable across releases.
inline std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master + index * kSplitmixGamma;
    return splitmix64_next(state);
}

class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
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

    /// Uniform double in [0, 1).
    double u01() { return double(next() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace llp
