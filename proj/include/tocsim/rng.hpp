#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace tocsim {

// SplitMix64 finalizer. Used both as the stream generator and to derive
// substream seeds, so results never depend on execution order or worker count.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds (purpose, a, b, c) tags into a master seed. Every independent random
// stream in the toolkit is keyed this way.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ mix64(purpose));
    s = mix64(s ^ mix64(a));
    s = mix64(s ^ mix64(b));
    s = mix64(s ^ mix64(c));
    return s;
}

/// Deterministic counter-based random stream (SplitMix64).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal pair (Box-Muller). Consumes exactly two uniforms.
    std::pair<double, double> next_gaussian_pair() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        // 1 - u1 lies in (0, 1], so the log is finite.
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Uniform integer in [0, n). Rejection sampling, n > 0.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Stream purposes. Keeping the tags in one place guarantees two different
// parts of an experiment can never collide on the same substream.
namespace purpose {
inline constexpr std::uint64_t prior_sampling = 1;
inline constexpr std::uint64_t classify = 2;
inline constexpr std::uint64_t capture_basin = 3;
inline constexpr std::uint64_t te_start = 4;
inline constexpr std::uint64_t te_rollout = 5;
inline constexpr std::uint64_t te_shuffle = 6;
inline constexpr std::uint64_t simulate = 7;
}  // namespace purpose

}  // namespace tocsim
