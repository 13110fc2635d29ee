#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace clutter {

/// Lognormal statistics (dB) of the azimuth power deviation P and the temporal
/// K-factor, plus their correlation coefficient.
struct ProfileParams {
    double sigma_p_db = 0.0;
    double mu_p_db = 0.0;
    double sigma_k_db = 0.0;
    double mu_k_db = 0.0;
    double rho_pk = 0.0;

    /// Throws InvalidInput on negative spreads, |rho| > 1 or non-finite values.
    void validate() const;
    bool operator==(const ProfileParams&) const = default;
};

enum class Environment { Microcellular8m, StreetLevel1m };

std::string_view to_string(Environment env) noexcept;
std::optional<Environment> environment_from_string(std::string_view name) noexcept;

/// Measured statistics for the two published deployment heights.
ProfileParams table1_preset(Environment env) noexcept;

/// Mean (dB) that makes E[10^(X/10)] = 1 for X ~ Normal(mu, sigma) in dB:
/// -(10 log10 e) (0.1 sigma ln 10)^2 / 2.
double mu_p_from_sigma(double sigma_p_db);

/// Per-direction static draws over a uniform azimuth lattice.
struct AzimuthProfile {
    std::vector<double> azimuth_deg;
    std::vector<double> p_db;
    std::vector<double> k_db;
    std::vector<double> psi_rad; // in [0, 2 pi)

    std::size_t size() const noexcept { return azimuth_deg.size(); }
};

/// One azimuth bin's draw.
struct ProfileDraw {
    double p_db;
    double k_db;
    double psi_rad;
};

/// Draw for bin `index` alone. Identical to element `index` of sample_profile()
/// for the same seed.
ProfileDraw sample_profile_bin(const ProfileParams& params, std::uint64_t seed, std::uint64_t index);

/// Correlated lognormal (P, K_dB) and a uniform static phase for each bin.
/// Bins are i.i.d.; each draws from its own stream derived from (seed, bin),
/// so the result does not depend on generation order.
AzimuthProfile sample_profile(const ProfileParams& params, int n_bins, double bin_width_deg, std::uint64_t seed,
                              double azimuth_start_deg = 0.0);

} // namespace clutter
