#pragma once

#include <cstdint>

namespace cspadv {

// splitmix64 step; used for seeding and seed derivation.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL);
    splitmix64(s);
    return splitmix64(s);
}

// xoshiro256** with hand-rolled samplers. std:: distributions are
// implementation-defined; everything here is pinned so identical seeds give
// identical runs on any platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, bound), unbiased (rejection)
    uint64_t below(uint64_t bound) {
        const uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform in [0,1), 53-bit
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bit() { return next() >> 63; }

    int8_t pm1() { return bit() ? int8_t{-1} : int8_t{1}; }

    bool coin(double p) { return unit() < p; }

    uint64_t seed() const { return seed_; }

    // deterministic substream; independent of how much this rng has been used
    Rng child(uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t seed_;
    uint64_t s_[4];
};

}  // namespace cspadv
