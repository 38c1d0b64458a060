#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vfplan {

/// splitmix64 finalizer; used both as a bit mixer and for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stable per-task seed: hash of (master seed, index a, index b).
/// This formula is part of the reproducibility contract; changing it
/// changes every seeded result downstream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ (a + 0x9E3779B97F4A7C15ULL));
    s = mix64(s ^ (b + 0xC2B2AE3D27D4EB4FULL));
    return s;
}

/// Seeded generator with pinned uniform/normal mappings.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not; the mappings below are spelled out so that a given
/// seed produces bit-identical streams on every platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1): top 53 bits of the engine output.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]: never returns 0, safe under log().
    double uniform01_open() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Fisher-Yates partial shuffle: permutes indices [0, n) so the first k
    /// entries are a uniform random k-subset in random order.
    template <typename Vec>
    void partial_shuffle(Vec& idx, std::size_t k) {
        const std::size_t n = idx.size();
        if (n == 0) return;
        for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform01() * static_cast<double>(n - i));
            const std::size_t jj = j < n ? j : n - 1;
            std::swap(idx[i], idx[jj]);
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace vfplan
