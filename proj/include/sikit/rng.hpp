#pragma once

#include <array>
#include <cstdint>

// Seedable, portable RNG with documented algorithms so ensembles reproduce
// bit-for-bit across platforms and languages:
//   - state seeding: splitmix64 (Steele/Lea/Vigna)
//   - stream: xoshiro256** 1.0 (Blackman/Vigna)
//   - doubles: take the top 53 bits, scale by 2^-53 -> [0,1)
// std::mt19937 et al. are avoided on purpose: the standard does not pin down
// distribution implementations, so uniform_real_distribution output differs
// between standard libraries.

namespace sikit {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    // Independent substream for a case/sample index. XORing the index into the
    // seed before the splitmix64 expansion decorrelates streams; this is the
    // documented reproducibility contract (order- and parallelism-independent).
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed ^ (0x9e3779b97f4a7c15ULL + index * 0xd1342543de82ef95ULL));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> s_{};
};

} // namespace sikit
