#pragma once

#include <cmath>
#include <cstdint>

namespace circlt {

/// SplitMix64 finalizer: bijective 64-bit mix with good avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Keyed counter-based generator (the SplittableRandom construction):
/// output k is mix64(key + (k+1)*gamma). Stateless given (key, k), so any
/// evaluation order — including parallel — produces identical streams.
///
/// Normal draws use Box-Muller on two 53-bit uniforms, an exact method.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    /// Derive a stream key from a master seed and two stream coordinates
    /// (e.g. replica and entry). Chained bijective mixes keep distinct
    /// coordinates on effectively independent streams.
    static CounterRng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        return CounterRng(mix64(mix64(mix64(seed) + a) + b));
    }

    std::uint64_t bits(std::uint64_t k) const {
        return mix64(key_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on the open interval (0, 1): top 53 bits plus half an ulp.
    double uniform01(std::uint64_t k) const {
        return static_cast<double>(bits(k) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    /// Standard normal draw #k. Consumes counters 2k and 2k+1.
    double normal(std::uint64_t k) const {
        const double u1 = uniform01(2 * k);
        const double u2 = uniform01(2 * k + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Index in [0, m) from counter k; modulo bias is ~m/2^64, negligible
    /// for the resampling sizes used here.
    std::uint64_t index(std::uint64_t k, std::uint64_t m) const { return bits(k) % m; }

private:
    std::uint64_t key_;
};

// Stream tags so different consumers of the same master seed never collide.
namespace rng_tag {
inline constexpr std::uint64_t brownian = 0x42524F574E49414EULL;
inline constexpr std::uint64_t limit_process = 0x4C494D4954505243ULL;
inline constexpr std::uint64_t bootstrap = 0x424F4F5453545250ULL;
inline constexpr std::uint64_t scratch = 0x5343524154434820ULL;
}  // namespace rng_tag

}  // namespace circlt
