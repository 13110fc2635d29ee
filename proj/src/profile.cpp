#include "clutter/profile.hpp"

#include "clutter/error.hpp"
#include "clutter/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace clutter {

std::string_view to_string(Environment env) noexcept
{
    switch (env) {
    case Environment::Microcellular8m:
        return "microcellular_8m";
    case Environment::StreetLevel1m:
        return "street_level_1m";
    }
    return "unknown";
}

std::optional<Environment> environment_from_string(std::string_view name) noexcept
{
    if (name == "microcellular_8m")
        return Environment::Microcellular8m;
    if (name == "street_level_1m")
        return Environment::StreetLevel1m;
    return std::nullopt;
}

void ProfileParams::validate() const
{
    for (double v : {sigma_p_db, mu_p_db, sigma_k_db, mu_k_db, rho_pk})
        if (!std::isfinite(v))
            throw InvalidInput("profile parameters must be finite");
    if (sigma_p_db < 0.0)
        throw InvalidInput("sigma_p must be >= 0, got " + std::to_string(sigma_p_db));
    if (sigma_k_db < 0.0)
        throw InvalidInput("sigma_k must be >= 0, got " + std::to_string(sigma_k_db));
    if (rho_pk < -1.0 || rho_pk > 1.0)
        throw InvalidInput("rho_pk must lie in [-1, 1], got " + std::to_string(rho_pk));
}

ProfileParams table1_preset(Environment env) noexcept
{
    switch (env) {
    case Environment::Microcellular8m:
        return {5.3, -3.2, 6.1, 9.3, 0.73};
    case Environment::StreetLevel1m:
        return {4.0, -1.9, 4.8, 5.6, 0.47};
    }
    return {};
}

double mu_p_from_sigma(double sigma_p_db)
{
    if (!(sigma_p_db >= 0.0) || !std::isfinite(sigma_p_db))
        throw InvalidInput("sigma_p must be finite and >= 0, got " + std::to_string(sigma_p_db));
    const double s = 0.1 * sigma_p_db * std::numbers::ln10;
    return -10.0 * std::numbers::log10e * s * s / 2.0;
}

ProfileDraw sample_profile_bin(const ProfileParams& params, std::uint64_t seed, std::uint64_t index)
{
    // Principal square root of [[1, rho], [rho, 1]] (eigenvalues 1 +- rho).
    const double up = std::sqrt(1.0 + params.rho_pk);
    const double dn = std::sqrt(1.0 - params.rho_pk);
    const double diag = 0.5 * (up + dn);
    const double off = 0.5 * (up - dn);

    RandomStream rng(derive_seed(seed, stream_tag::profile_bin, index));
    const auto [xi_p, xi_k] = rng.normal_pair();
    double psi = 2.0 * std::numbers::pi * rng.uniform();
    if (psi >= 2.0 * std::numbers::pi)
        psi = 0.0;

    return {params.mu_p_db + params.sigma_p_db * (diag * xi_p + off * xi_k),
            params.mu_k_db + params.sigma_k_db * (off * xi_p + diag * xi_k), psi};
}

AzimuthProfile sample_profile(const ProfileParams& params, int n_bins, double bin_width_deg, std::uint64_t seed,
                              double azimuth_start_deg)
{
    params.validate();
    if (n_bins < 1)
        throw InvalidInput("n_bins must be >= 1, got " + std::to_string(n_bins));
    if (!(bin_width_deg > 0.0) || !std::isfinite(bin_width_deg))
        throw InvalidInput("bin_width must be > 0");
    if (!std::isfinite(azimuth_start_deg))
        throw InvalidInput("azimuth_start must be finite");

    AzimuthProfile out;
    const auto n = static_cast<std::size_t>(n_bins);
    out.azimuth_deg.resize(n);
    out.p_db.resize(n);
    out.k_db.resize(n);
    out.psi_rad.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ProfileDraw d = sample_profile_bin(params, seed, i);
        out.azimuth_deg[i] = azimuth_start_deg + static_cast<double>(i) * bin_width_deg;
        out.p_db[i] = d.p_db;
        out.k_db[i] = d.k_db;
        out.psi_rad[i] = d.psi_rad;
    }
    return out;
}

} // namespace clutter
