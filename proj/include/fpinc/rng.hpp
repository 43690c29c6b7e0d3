#pragma once

#include <cstdint>
#include <string_view>

namespace fpinc {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen as the project RNG because it
// is seedable, fast, and trivially portable: the sequence below is fully
// specified by the two constants and the shift-xor finalizer, so any language
// can reproduce a sweep bit for bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by multiply-shift rejection (Lemire); deterministic.
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) return 0;
        while (true) {
            std::uint64_t x = next();
            unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= (0 - n) % n) return static_cast<std::uint64_t>(m >> 64);
        }
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b + 0x9e3779b97f4a7c15ULL));
    return g.next();
}

inline std::uint64_t hash_str(std::string_view s) {
    // FNV-1a, 64 bit.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Per-instance seed derivation used by the sweep harness:
// mix(mix(mix(master, fnv(family)), size), index).
inline std::uint64_t instance_seed(std::uint64_t master, std::string_view family,
                                   std::uint64_t size, std::uint64_t index) {
    return mix_u64(mix_u64(mix_u64(master, hash_str(family)), size), index);
}

} // namespace fpinc
