#pragma once

#include "clutter/matrix.hpp"
#include "clutter/synthesis.hpp"
#include "clutter/temporal.hpp"

#include <optional>
#include <span>
#include <vector>

namespace clutter {

/// Smallest grid roundtrip() accepts.
inline constexpr std::size_t roundtrip_min_azimuth = 30;
inline constexpr std::size_t roundtrip_min_time = 100;

/// Fewest samples a CDF distance is computed from.
inline constexpr std::size_t cdf_min_samples = 50;

/// Arithmetic mean over every cell (time and azimuth average).
double mean_power(const PowerMatrix& powers);

/// Per-bin time average divided by the grand mean; averages to 1 over bins.
std::vector<double> relative_azimuth_power(const PowerMatrix& powers);

/// Row `bin` divided by its own time average; averages to 1 over time.
std::vector<double> temporal_fluctuation(const PowerMatrix& powers, std::size_t bin);

/// Normalized autocorrelation at lags 0..max_lag. Both factors are centred on
/// the mean of the whole series; each lag averages the N - lag overlapping pairs.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

/// Maximum over a probability sweep in [p_lo, p_hi] of the horizontal distance
/// (dB) between the empirical quantile function and Normal(mu, sigma).
/// Empirical quantiles use Hazen plotting positions (i + 0.5) / n.
double cdf_quantile_distance_db(std::span<const double> samples_db, double mu_db, double sigma_db,
                                double p_lo = 0.01, double p_hi = 0.99);

/// Pearson correlation. Throws DegenerateError when either input is constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Sample mean and (n - 1) standard deviation.
struct MomentFit {
    double mean = 0.0;
    double stddev = 0.0;
};
MomentFit moment_fit(std::span<const double> values);

/// Quantile-domain distance (dB) between a normalized power series and the
/// unit-mean Rician power distribution with the given K, over [0.01, 0.99].
double rician_quantile_distance_db(std::span<const double> powers, const KFactorEstimate& k);

struct RoundtripOptions {
    double dt_s = 0.6;
    /// Bin whose fluctuation autocorrelation is reported; defaults to the middle bin.
    std::optional<std::size_t> autocorr_bin;
    std::size_t max_lag = 10;
    /// Per-bin Rician distribution check; costs one quantile sweep per bin.
    bool rician_check = true;
    double rician_tolerance_db = 1.3;
};

struct AutocorrPoint {
    double lag_s;
    double coefficient;
};

/// Model statistics recovered from a power grid. Optional fields are empty when
/// the grid is too degenerate to define them.
struct EstimationReport {
    std::size_t n_azimuth = 0;
    std::size_t n_time = 0;

    double mean_power_ratio = 0.0;
    std::vector<double> p_rel_db;
    double mu_p_hat = 0.0;
    double sigma_p_hat = 0.0;

    std::vector<KFactorEstimate> k_per_bin;
    std::size_t n_k_finite = 0;
    std::size_t n_k_rayleigh = 0;
    std::size_t n_k_constant = 0;
    std::optional<double> mu_k_hat;
    std::optional<double> sigma_k_hat;

    std::optional<double> rho_pk_hat;

    std::size_t autocorr_bin = 0;
    std::vector<AutocorrPoint> autocorr;

    std::optional<double> cdf_distance_p;
    std::optional<double> cdf_distance_k;

    /// Share of bins whose fluctuation lies within rician_tolerance_db of the
    /// Rician law with the bin's estimated K.
    std::optional<double> rician_fit_fraction;
};

/// Runs the whole analysis chain on an azimuth x time power grid.
EstimationReport roundtrip(const PowerMatrix& powers, const RoundtripOptions& options = {});
EstimationReport roundtrip(const ChannelGrid& grid, RoundtripOptions options = {});

} // namespace clutter
