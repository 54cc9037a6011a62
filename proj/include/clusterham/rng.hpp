#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace clusterham {

// Seeded random source with hand-rolled distributions.  std::*_distribution
// output is implementation-defined; sampling from raw mt19937_64 words keeps
// transcripts and Monte Carlo runs reproducible across standard libraries.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    double uniform01() {  // [0, 1), 53-bit resolution
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// splitmix64 finalizer; used to derive independent per-stream / per-trial
// seeds from one master seed so parallel and serial runs agree.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t counter = 0) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1) +
                      0xbf58476d1ce4e5b9ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace clusterham
