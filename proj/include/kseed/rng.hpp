#pragma once

// Counter-based keyed randomness. Every draw is a pure function of
// (master seed, stream, key), so baseline and accelerated variants consume
// identical randomness no matter what order they touch the points in. That
// property is what turns the paired equivalence checks into exact tests.

#include <cmath>
#include <cstdint>

namespace kseed {

namespace detail {

// SplitMix64 finalizer (Stafford mix 13). Full avalanche per stage.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

// Maps a 64-bit word to (0, 1]; never returns 0, so -log stays finite.
inline double uniform_unit_from_bits(std::uint64_t bits) noexcept {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Inverse-CDF draw from Exponential(1): u = 1 -> 0, u = e^-1 -> 1.
inline double exponential_from_uniform(double u) noexcept { return -std::log(u); }

class RngStream {
public:
    enum class Stream : std::uint64_t {
        InitialDraw = 1,  // weighted first-candidate draw (k-means||)
        Lambda = 2,       // per-point Exponential(1) race keys
        Bernoulli = 3,    // per-(round, point) candidate coin flips
        IndexBuild = 4,   // vantage-point choices for per-round tree builds
        Reference = 5,    // CDF-inversion reference sampler (bench only)
    };

    explicit RngStream(std::uint64_t master_seed) : master_(master_seed) {}

    std::uint64_t master_seed() const noexcept { return master_; }

    std::uint64_t bits(Stream s, std::uint64_t a = 0, std::uint64_t b = 0) const noexcept {
        using detail::kGolden;
        using detail::mix64;
        std::uint64_t z = mix64(master_ + kGolden * static_cast<std::uint64_t>(s));
        z = mix64(z + kGolden * a);
        return mix64(z + kGolden * b);
    }

    // Uniform on (0, 1].
    double uniform(Stream s, std::uint64_t a = 0, std::uint64_t b = 0) const noexcept {
        return uniform_unit_from_bits(bits(s, a, b));
    }

    // lambda_i ~ Exponential(1), fixed for the lifetime of a run.
    double exponential(std::uint64_t i) const noexcept {
        return exponential_from_uniform(uniform(Stream::Lambda, i));
    }

    std::uint64_t derive_seed(Stream s, std::uint64_t a = 0, std::uint64_t b = 0) const noexcept {
        return bits(s, a, b);
    }

private:
    std::uint64_t master_;
};

// Tiny sequential PRNG for internal structural choices (vantage points).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    // Uniform integer in [0, bound); bound > 0. Modulo bias is irrelevant for
    // vantage selection.
    std::size_t next_below(std::size_t bound) noexcept {
        return static_cast<std::size_t>(next() % bound);
    }

private:
    std::uint64_t state_;
};

}  // namespace kseed
