#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fhawkes {

/// Deterministic random stream. Distribution transforms are implemented
/// here rather than via <random> distributions so that a given seed yields
/// the same sequence on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed, 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform draw in the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// Poisson count by inversion of the product of uniforms; fine for the
    /// small means used for offspring counts (underflows above ~700).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = uniform();
        int k = 0;
        while (prod > limit) {
            prod *= uniform();
            ++k;
        }
        return k;
    }

    /// splitmix64-based mixing; derives independent substreams from a root
    /// seed and a stream index (replication number).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        for (int i = 0; i < 2; ++i) {
            x ^= x >> 30;
            x *= 0xbf58476d1ce4e5b9ULL;
            x ^= x >> 27;
            x *= 0x94d049bb133111ebULL;
            x ^= x >> 31;
        }
        return x;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace fhawkes
