#include "clutter/temporal.hpp"

#include "clutter/error.hpp"
#include "clutter/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace clutter {

FluctuationSeries sample_fluctuation(double k_db, double psi_rad, int n_steps, std::uint64_t seed, double dt_s)
{
    if (n_steps < 1)
        throw InvalidInput("n_steps must be >= 1, got " + std::to_string(n_steps));
    if (!(dt_s > 0.0) || !std::isfinite(dt_s))
        throw InvalidInput("dt must be > 0");
    if (std::isnan(k_db) || !std::isfinite(psi_rad))
        throw InvalidInput("k_db and psi must be numbers");

    FluctuationSeries out;
    out.dt_s = dt_s;
    out.samples.resize(static_cast<std::size_t>(n_steps));

    const std::complex<double> specular = std::polar(1.0, psi_rad);
    if (k_db >= k_db_cap) {
        for (auto& s : out.samples)
            s = specular;
        return out;
    }

    RandomStream rng(seed);
    if (k_db <= -k_db_cap) {
        for (auto& s : out.samples)
            s = rng.complex_normal();
        return out;
    }

    const double k = std::pow(10.0, k_db / 10.0);
    const std::complex<double> los = std::sqrt(k / (k + 1.0)) * specular;
    const double diffuse = std::sqrt(1.0 / (k + 1.0));
    for (auto& s : out.samples)
        s = los + diffuse * rng.complex_normal();
    return out;
}

KFactorEstimate k_moment_estimate(std::span<const double> powers)
{
    if (powers.size() < 8)
        throw InvalidInput("K estimation needs >= 8 samples, got " + std::to_string(powers.size()));

    double sum = 0.0;
    for (double p : powers) {
        if (!std::isfinite(p) || p < 0.0)
            throw InvalidInput("power samples must be finite and nonnegative");
        sum += p;
    }
    const double n = static_cast<double>(powers.size());
    const double mean = sum / n;
    if (!(mean > 0.0))
        throw InvalidInput("power series has nonpositive mean");

    double var = 0.0;
    for (double p : powers)
        var += (p - mean) * (p - mean);
    var /= n;

    constexpr double inf = std::numeric_limits<double>::infinity();
    // The mean of equal values can be off by an ulp, so test equality directly.
    const auto [lo, hi] = std::minmax_element(powers.begin(), powers.end());
    if (*lo == *hi || var == 0.0)
        return {KFactorEstimate::Kind::Constant, inf};

    const double ratio = var / (mean * mean);
    if (ratio >= 1.0)
        return {KFactorEstimate::Kind::Rayleigh, -inf};

    // 1 - gamma = ratio / (1 + gamma), which stays accurate as ratio -> 0.
    const double gamma = std::sqrt(1.0 - ratio);
    return {KFactorEstimate::Kind::Finite, 10.0 * std::log10(gamma * (1.0 + gamma) / ratio)};
}

} // namespace clutter
