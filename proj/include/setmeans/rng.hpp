#ifndef SETMEANS_RNG_HPP
#define SETMEANS_RNG_HPP

#include <array>
#include <cstdint>
#include <string_view>

namespace setmeans {

/// splitmix64 step (Steele, Lea, Flood). Used to expand seeds into full
/// generator state and to derive independent per-replicate streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** (Blackman, Vigna). Small, fast, and defined by a handful of
/// integer operations, so runs reproduce bit-for-bit across platforms and
/// languages; reports record the algorithm name next to the seed.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "xoshiro256**";

    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
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

    /// Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace setmeans

#endif
