#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace irg {

// Counter-based pseudorandom machinery. Every random quantity in the library is
// a pure function of a 64-bit key and a counter, so any value can be addressed
// directly and results do not depend on evaluation order or thread count.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives an independent key from a parent key and a label.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) noexcept
{
    return mix64(mix64(parent ^ 0xD1B54A32D192ED03ULL) + (label + 1) * kGolden);
}

constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label,
                                   std::uint64_t index) noexcept
{
    return derive_key(derive_key(parent, label), index);
}

// Maps 64 random bits to the open interval (0,1) on the grid (i + 1/2) 2^-52.
// The largest value is 1 - 2^-53, which is representable; a 53-bit grid would
// round its top point up to 1.
constexpr double to_unit_open(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Stream labels used when deriving keys. Kept in one place so that no two
// consumers share a stream by accident.
namespace stream {
inline constexpr std::uint64_t kCount = 1;
inline constexpr std::uint64_t kPoint = 2;
inline constexpr std::uint64_t kMark = 3;
inline constexpr std::uint64_t kLowMark = 4;
inline constexpr std::uint64_t kReplication = 5;
inline constexpr std::uint64_t kIntegration = 6;
inline constexpr std::uint64_t kBootstrap = 7;
inline constexpr std::uint64_t kProbe = 8;
} // namespace stream

// A sequential view onto a keyed counter stream. Cheap to copy; each concurrent
// task owns its own instance.
class RandomState {
public:
    using result_type = std::uint64_t;

    constexpr explicit RandomState(std::uint64_t key, std::uint64_t counter = 0) noexcept
        : key_(mix64(key)), counter_(counter)
    {
    }

    constexpr std::uint64_t next_u64() noexcept
    {
        return mix64(key_ + (++counter_) * kGolden);
    }

    // Uniform on (0,1).
    constexpr double uniform() noexcept { return to_unit_open(next_u64()); }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Uniform integer on {0, ..., bound-1}; bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Box-Muller; consumes two uniforms per call.
    double normal() noexcept
    {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double exponential() noexcept { return -std::log(uniform()); }

    // URBG interface so the state can feed standard algorithms when needed.
    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept
    {
        return std::numeric_limits<std::uint64_t>::max();
    }
    constexpr std::uint64_t operator()() noexcept { return next_u64(); }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

// Exact Poisson variate: inversion by sequential search for small means and
// Hormann's transformed rejection with squeeze (PTRS) above.
std::uint64_t sample_poisson(RandomState& rng, double mean);

inline constexpr double kPoissonInversionLimit = 30.0;

} // namespace irg
