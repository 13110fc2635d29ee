#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace clutter {

/// Finalizer of the SplitMix64 generator; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream key from (seed, stream tag, index).
/// Every random draw in the library is addressed this way, so any azimuth bin
/// can be regenerated without replaying the bins before it.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) noexcept
{
    std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ULL);
    k = mix64(k ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    return mix64(k ^ (index * 0x8cb92ba72f3d8dd7ULL + 0x2545f4914f6cdd1dULL));
}

/// SplitMix64 random stream. Satisfies UniformRandomBitGenerator, and adds the
/// few continuous variates the model needs with platform-independent output.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t key) noexcept : state_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1), safe for log().
    double uniform_open() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Two independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() noexcept
    {
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal() noexcept
    {
        const auto [a, b] = normal_pair();
        return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
    }

private:
    std::uint64_t state_;
};

/// Stream tags used by the seed derivation plan.
namespace stream_tag {
inline constexpr std::uint64_t profile = 1;
inline constexpr std::uint64_t profile_bin = 2;
inline constexpr std::uint64_t fluctuation = 3;
} // namespace stream_tag

} // namespace clutter
