#pragma once
// Deterministic random streams. A master seed plus (tag, index) counters expand
// through SplitMix64 into xoshiro256** state, so every Monte Carlo sample owns
// an independent stream and results do not depend on thread scheduling.

#include <cstdint>

namespace lgas {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    /// Derived stream: same (master, tag, index) always yields the same stream.
    static Rng stream(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
        std::uint64_t sm = master;
        std::uint64_t a = splitmix64_next(sm);
        sm = a ^ (tag * 0xd1342543de82ef95ull + 0x632be59bd9b4e019ull);
        std::uint64_t b = splitmix64_next(sm);
        sm = b ^ (index * 0x9e6c63d0876a9a35ull + 1);
        return Rng(splitmix64_next(sm));
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

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace lgas
