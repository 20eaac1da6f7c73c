#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (master seed, stream id, counter), so parallel and serial evaluation
// agree bitwise and streams can be consumed in any order.

namespace nvnmr::rng {

// SplitMix64 finalizer (Steele et al.); bijective 64-bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) {
    // two rounds decorrelate the structured (seed, stream, counter) lattice
    return mix64(mix64(seed ^ 0x7F4A7C15E3779B97ULL) + mix64(stream) + counter);
}

/// Uniform double in [0, 1).
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential stream view over the counter space of one (seed, stream) pair.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t next_bits() { return hash3(seed_, stream_, counter_++); }

    double next_uniform01() { return uniform01(next_bits()); }

    /// Uniform in [a, b).
    double next_uniform(double a, double b) {
        return a + (b - a) * next_uniform01();
    }

    /// Standard normal, Box-Muller. Consumes a fixed two draws per pair;
    /// the second value is cached so consumption stays deterministic.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u1 in (0,1] so log() is finite
        const double u1 =
            (static_cast<double>(next_bits() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = next_uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// +1 or -1 with equal probability.
    double next_sign() { return (next_bits() & 1ULL) ? 1.0 : -1.0; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace nvnmr::rng
