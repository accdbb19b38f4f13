#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace kpb {

/// Counter-based random numbers: every draw is a pure function of (seed, keys...).
/// Ensembles built this way are identical across grid resolutions and worker counts.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::initializer_list<std::uint64_t> keys) const {
        std::uint64_t h = mix(seed_ ^ 0x6a09e667f3bcc909ULL);
        for (std::uint64_t k : keys) h = mix(h ^ (k + 0x9e3779b97f4a7c15ULL));
        return h;
    }

    /// Uniform in [0, 1).
    double uniform(std::initializer_list<std::uint64_t> keys) const {
        return static_cast<double>(bits(keys) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on two derived streams.
    double normal(std::initializer_list<std::uint64_t> keys) const {
        const std::uint64_t a = bits(keys);
        const double u1 = (static_cast<double>(mix(a ^ 1) >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = static_cast<double>(mix(a ^ 2) >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

/// Maps a signed key (e.g. a mode index) to an unsigned counter key.
inline std::uint64_t key(long long v) { return static_cast<std::uint64_t>(v); }

}  // namespace kpb
