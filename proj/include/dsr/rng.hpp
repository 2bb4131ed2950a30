#pragma once

#include <cmath>
#include <cstdint>

namespace dsr {

/// Counter-style seeding: every (seed, key...) tuple maps to an independent,
/// platform-stable stream. Distributions are hand-rolled from uniform bits so
/// that results are bit-identical across standard libraries and worker counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // splitmix64 expansion of the seed into the xoshiro256++ state
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix64(x);
    }

    /// Derive the stream for a (seed, drop, purpose) tuple.
    static Rng stream(std::uint64_t seed, std::uint64_t drop, std::uint64_t purpose) {
        std::uint64_t x = seed;
        std::uint64_t a = splitmix64(x);
        x = a ^ (drop * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
        std::uint64_t b = splitmix64(x);
        x = b ^ (purpose * 0xbf58476d1ce4e5b9ULL + 0x94d049bbULL);
        return Rng(splitmix64(x));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Exp(1) variate (mean exactly 1).
    double exp1() { return -std::log1p(-uniform01()); }

    /// Poisson(mu) via unit-rate arrival counting; exact for any mu, O(mu) draws.
    std::uint64_t poisson(double mu) {
        std::uint64_t k = 0;
        double acc = exp1();
        while (acc < mu) {
            ++k;
            acc += exp1();
        }
        return k;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

}  // namespace dsr
