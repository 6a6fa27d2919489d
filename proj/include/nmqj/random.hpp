// random.hpp — seeded random stream and the binomial sampler used by the jump process
//
// Reproducibility contract: the generator algorithm is splitmix64 (64-bit
// counter-based, one output per call), uniforms are (x >> 11) * 2^-53, and
// binomial draws use dyadic splitting plus CDF inversion. All of this is
// pinned here, not delegated to <random> distributions, so that identical
// seeds give byte-identical event streams across compilers and standard
// libraries.
#pragma once

#include <cmath>
#include <cstdint>

namespace nmqj {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    static constexpr const char* algorithm() { return "splitmix64"; }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exact Binomial(n, p) draw. One uniform per inversion; n is split in
    // halves until the piece mean n*p is small enough for the inversion walk
    // to stay inside double range. Consumption order is deterministic.
    std::uint64_t binomial(std::uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        const double mean = static_cast<double>(n) * p;
        if (mean > 50.0) {
            const std::uint64_t half = n / 2;
            return binomial(half, p) + binomial(n - half, p);
        }
        return inversion(n, p);
    }

private:
    std::uint64_t inversion(std::uint64_t n, double p) {
        const double q = p / (1.0 - p);
        double f = std::exp(static_cast<double>(n) * std::log1p(-p));  // P(k=0)
        double cdf = f;
        const double u = uniform();
        std::uint64_t k = 0;
        while (u > cdf && k < n) {
            ++k;
            f *= q * static_cast<double>(n - k + 1) / static_cast<double>(k);
            cdf += f;
        }
        return k;
    }

    std::uint64_t state_;
};

}  // namespace nmqj
