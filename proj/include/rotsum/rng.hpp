#pragma once

// Small self-contained PRNG (SplitMix64). Used instead of <random> engines so
// that sampling is bit-reproducible across standard libraries and so that
// per-sample substreams can be derived as hash(seed, index), making results
// independent of worker count and scheduling.

#include <cstdint>

namespace rotsum {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Substream for one sample of a seeded experiment.
    static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        mix.next();  // decorrelate nearby indices
        return mix;
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on {0, 1, ..., n-1}, n >= 1. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t v = next();
            if (v >= threshold) return v % n;
        }
    }

    // Uniform in [lo, hi] inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform double in (0, 1).
    double uniform01() {
        for (;;) {
            double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace rotsum
