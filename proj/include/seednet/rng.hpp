#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

// Deterministic random number generation.
//
// Every stochastic component of the library draws from an explicitly seeded
// stream so that results are reproducible bit-for-bit across runs, platforms,
// and worker counts. The scheme is fixed and documented here:
//
//   mix64(x)                    one SplitMix64 output step (Steele/Lea/Flood
//                               reference constants)
//   stream_key(k, d, i)         mix64(mix64(mix64(k) ^ d) ^ i)
//   Stream(seed)                xoshiro256++ seeded by four successive
//                               SplitMix64 outputs starting from `seed`
//   uniform01()                 (next() >> 11) * 2^-53, in [0, 1)
//   below(n)                    (next() * n) >> 64 (128-bit multiply-shift)
//   normal()                    Box-Muller basic form: consumes exactly two
//                               uniforms u1, u2 and returns
//                               sqrt(-2 ln(1 - u1)) * cos(2*pi*u2)
//   truncated_normal_positive   mean + sd * normal(), redrawn until > 0
//
// Substream domains keep independent uses of the same master seed from
// colliding (thresholds vs. strategy draws vs. outcome sampling).

namespace seednet::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// One SplitMix64 output step applied to `x`.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stream-key domains. Values are part of the reproducibility contract.
enum class Domain : std::uint64_t {
    thresholds = 1,
    strategy = 2,
    sampling = 3,
    synth = 4,
    generic = 5,
};

/// Derives the seed of substream `index` within `domain` from a master key.
constexpr std::uint64_t stream_key(std::uint64_t master, Domain domain,
                                   std::uint64_t index) noexcept {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(domain));
    h = mix64(h ^ index);
    return h;
}

/// xoshiro256++ (Blackman & Vigna), seeded via SplitMix64.
class Stream {
public:
    explicit Stream(std::uint64_t seed) noexcept {
        std::uint64_t s = seed;
        for (auto& word : state_) word = mix64(s += kGolden);
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Standard normal deviate; consumes exactly two uniforms per call.
    double normal() noexcept {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log1p(-u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Normal(mean, sd) redrawn until strictly positive. sd = 0 returns mean.
    double truncated_normal_positive(double mean, double sd) noexcept {
        if (sd == 0.0) return mean;
        for (;;) {
            const double x = mean + sd * normal();
            if (x > 0.0) return x;
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

/// First `k` positions of a Fisher-Yates shuffle of [0, n), in draw order.
inline std::vector<int> sample_without_replacement(int n, int k, Stream& stream) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k > n) k = n;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(stream.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

} // namespace seednet::rng
