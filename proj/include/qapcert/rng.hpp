#pragma once

#include <cmath>
#include <cstdint>

namespace qapcert {

/// splitmix64: the full PRNG contract is documented in README.md so that
/// sampled instances are reproducible bit-for-bit from the seed alone.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] inclusive (modulo reduction; the tiny bias
    /// is irrelevant for test-data generation).
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }
};

/// Standard normals via the Box-Muller transform; draws come in pairs and the
/// spare is cached, so consumption order is part of the documented contract.
class GaussianStream {
public:
    explicit GaussianStream(uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = rng_.next_double();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;  // guard the log
        const double u2 = rng_.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    SplitMix64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Derives the stream seed for trial t of a seeded experiment.
inline uint64_t trial_seed(uint64_t base_seed, uint64_t trial) {
    SplitMix64 mix(base_seed ^ (0x9e3779b97f4a7c15ull * (trial + 1)));
    return mix.next_u64();
}

}  // namespace qapcert
