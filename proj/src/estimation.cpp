#include "clutter/estimation.hpp"

#include "clutter/error.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace clutter {

namespace {

void check_powers(const PowerMatrix& powers)
{
    if (powers.empty())
        throw InvalidInput("power grid is empty");
    for (double p : powers.data())
        if (!std::isfinite(p) || p < 0.0)
            throw InvalidInput("power grid values must be finite and nonnegative");
}

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Linear interpolation of sorted samples at Hazen plotting positions.
double empirical_quantile(const std::vector<double>& sorted, double p)
{
    const double n = static_cast<double>(sorted.size());
    const double pos = p * n - 0.5;
    if (pos <= 0.0)
        return sorted.front();
    if (pos >= n - 1.0)
        return sorted.back();
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

template <typename ModelQuantile>
double quantile_distance(std::vector<double> sorted, double p_lo, double p_hi, std::size_t n_probs,
                         ModelQuantile&& model)
{
    std::sort(sorted.begin(), sorted.end());
    double worst = 0.0;
    for (std::size_t i = 0; i <= n_probs; ++i) {
        const double p = p_lo + (p_hi - p_lo) * static_cast<double>(i) / static_cast<double>(n_probs);
        worst = std::max(worst, std::abs(empirical_quantile(sorted, p) - model(p)));
    }
    return worst;
}

// Re-raises a member-operation failure with the offending bin named.
template <typename Fn>
auto with_bin_context(std::size_t bin, Fn&& fn)
{
    const std::string where = "bin " + std::to_string(bin) + ": ";
    try {
        return fn();
    } catch (const DegenerateError& e) {
        throw DegenerateError(where + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput(where + e.what());
    }
}

} // namespace

double mean_power(const PowerMatrix& powers)
{
    check_powers(powers);
    return mean_of(powers.data());
}

std::vector<double> relative_azimuth_power(const PowerMatrix& powers)
{
    check_powers(powers);
    std::vector<double> rel(powers.rows());
    for (std::size_t r = 0; r < powers.rows(); ++r)
        rel[r] = mean_of(powers.row(r));
    // Rows share one length, so the mean of row means is the grand mean.
    const double grand = mean_of(rel);
    if (!(grand > 0.0))
        throw InvalidInput("power grid has zero mean");
    for (double& v : rel)
        v /= grand;
    return rel;
}

std::vector<double> temporal_fluctuation(const PowerMatrix& powers, std::size_t bin)
{
    check_powers(powers);
    if (bin >= powers.rows())
        throw InvalidInput("bin " + std::to_string(bin) + " outside grid of " + std::to_string(powers.rows()) + " bins");
    const auto row = powers.row(bin);
    const double mean = mean_of(row);
    if (!(mean > 0.0))
        throw InvalidInput("time-averaged power is zero");
    std::vector<double> out(row.begin(), row.end());
    for (double& v : out)
        v /= mean;
    return out;
}

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag)
{
    if (series.size() <= max_lag + 8)
        throw InvalidInput("autocorrelation needs more than max_lag + 8 = " + std::to_string(max_lag + 8) +
                           " samples, got " + std::to_string(series.size()));
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*lo == *hi)
        throw DegenerateError("series has zero variance");
    const double mean = mean_of(series);
    const std::size_t n = series.size();

    std::vector<double> out(max_lag + 1);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double cross = 0.0;
        double head = 0.0;
        double tail = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) {
            const double a = series[t] - mean;
            const double b = series[t + lag] - mean;
            cross += a * b;
            head += a * a;
            tail += b * b;
        }
        if (head == 0.0 || tail == 0.0)
            throw DegenerateError("series has zero variance");
        out[lag] = lag == 0 ? 1.0 : cross / std::sqrt(head * tail);
    }
    return out;
}

double cdf_quantile_distance_db(std::span<const double> samples_db, double mu_db, double sigma_db, double p_lo,
                                double p_hi)
{
    if (samples_db.size() < cdf_min_samples)
        throw InvalidInput("CDF distance needs >= " + std::to_string(cdf_min_samples) + " samples, got " +
                           std::to_string(samples_db.size()));
    if (!(0.0 < p_lo && p_lo < p_hi && p_hi < 1.0))
        throw InvalidInput("probability range must satisfy 0 < p_lo < p_hi < 1");
    if (!(sigma_db >= 0.0) || !std::isfinite(mu_db) || !std::isfinite(sigma_db))
        throw InvalidInput("model normal needs finite mu and sigma >= 0");
    for (double s : samples_db)
        if (!std::isfinite(s))
            throw InvalidInput("CDF samples must be finite");

    const auto n_probs = static_cast<std::size_t>(std::ceil((p_hi - p_lo) / 1e-3));
    std::vector<double> sorted(samples_db.begin(), samples_db.end());
    if (sigma_db == 0.0)
        return quantile_distance(std::move(sorted), p_lo, p_hi, n_probs, [&](double) { return mu_db; });
    const boost::math::normal_distribution<double> model(mu_db, sigma_db);
    return quantile_distance(std::move(sorted), p_lo, p_hi, n_probs,
                             [&](double p) { return boost::math::quantile(model, p); });
}

double pearson_correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw InvalidInput("correlation inputs differ in length");
    if (x.size() < 3)
        throw InvalidInput("correlation needs >= 3 pairs");
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateError("correlation undefined for a constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MomentFit moment_fit(std::span<const double> values)
{
    if (values.size() < 2)
        throw InvalidInput("moment fit needs >= 2 values");
    const double mean = mean_of(values);
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

double rician_quantile_distance_db(std::span<const double> powers, const KFactorEstimate& k)
{
    if (powers.size() < cdf_min_samples)
        throw InvalidInput("Rician check needs >= " + std::to_string(cdf_min_samples) + " samples");
    if (k.kind == KFactorEstimate::Kind::Constant)
        throw InvalidInput("Rician check undefined for a constant series");

    const double mean = mean_of(powers);
    if (!(mean > 0.0))
        throw InvalidInput("power series has zero mean");
    std::vector<double> db(powers.size());
    std::transform(powers.begin(), powers.end(), db.begin(), [&](double p) { return power_to_db(p / mean); });

    // 2 (K + 1) P is noncentral chi-square with 2 degrees of freedom and
    // noncentrality 2K when P is unit-mean Rician power.
    // Beyond the cap the law is the K = inf point mass at 1.
    if (k.finite() && k.k_db >= k_db_cap)
        return quantile_distance(std::move(db), 0.01, 0.99, 98, [](double) { return 0.0; });
    const double kf = k.finite() ? std::pow(10.0, k.k_db / 10.0) : 0.0;
    const boost::math::non_central_chi_squared_distribution<double> law(2.0, 2.0 * kf);
    return quantile_distance(std::move(db), 0.01, 0.99, 98, [&](double p) {
        return power_to_db(boost::math::quantile(law, p) / (2.0 * (kf + 1.0)));
    });
}

EstimationReport roundtrip(const PowerMatrix& powers, const RoundtripOptions& options)
{
    if (powers.rows() < roundtrip_min_azimuth)
        throw InvalidInput("grid has " + std::to_string(powers.rows()) + " azimuth bins; roundtrip needs >= " +
                           std::to_string(roundtrip_min_azimuth));
    if (powers.cols() < roundtrip_min_time)
        throw InvalidInput("grid has " + std::to_string(powers.cols()) + " time steps; roundtrip needs >= " +
                           std::to_string(roundtrip_min_time));
    if (!(options.dt_s > 0.0))
        throw InvalidInput("dt must be > 0");

    EstimationReport rep;
    rep.n_azimuth = powers.rows();
    rep.n_time = powers.cols();
    rep.mean_power_ratio = mean_power(powers);

    const std::vector<double> rel = relative_azimuth_power(powers);
    rep.p_rel_db.resize(rel.size());
    std::transform(rel.begin(), rel.end(), rep.p_rel_db.begin(), [](double r) { return power_to_db(r); });
    const MomentFit p_fit = moment_fit(rep.p_rel_db);
    rep.mu_p_hat = p_fit.mean;
    rep.sigma_p_hat = p_fit.stddev;

    std::vector<double> k_finite;
    std::vector<double> p_at_finite_k;
    std::size_t rician_checked = 0;
    std::size_t rician_within = 0;
    rep.k_per_bin.reserve(rep.n_azimuth);
    for (std::size_t b = 0; b < rep.n_azimuth; ++b) {
        const std::vector<double> fluct = with_bin_context(b, [&] { return temporal_fluctuation(powers, b); });
        const KFactorEstimate k = with_bin_context(b, [&] { return k_moment_estimate(fluct); });
        rep.k_per_bin.push_back(k);
        switch (k.kind) {
        case KFactorEstimate::Kind::Finite:
            ++rep.n_k_finite;
            k_finite.push_back(k.k_db);
            p_at_finite_k.push_back(rep.p_rel_db[b]);
            break;
        case KFactorEstimate::Kind::Rayleigh:
            ++rep.n_k_rayleigh;
            break;
        case KFactorEstimate::Kind::Constant:
            ++rep.n_k_constant;
            break;
        }
        if (options.rician_check && k.kind != KFactorEstimate::Kind::Constant) {
            ++rician_checked;
            if (rician_quantile_distance_db(fluct, k) <= options.rician_tolerance_db)
                ++rician_within;
        }
    }

    if (k_finite.size() >= 2) {
        const MomentFit k_fit = moment_fit(k_finite);
        rep.mu_k_hat = k_fit.mean;
        rep.sigma_k_hat = k_fit.stddev;
        if (k_finite.size() >= cdf_min_samples)
            rep.cdf_distance_k = cdf_quantile_distance_db(k_finite, k_fit.mean, k_fit.stddev);
    }
    if (k_finite.size() >= 3) {
        try {
            rep.rho_pk_hat = pearson_correlation(p_at_finite_k, k_finite);
        } catch (const DegenerateError&) {
        }
    }

    rep.autocorr_bin = options.autocorr_bin.value_or(rep.n_azimuth / 2);
    if (rep.autocorr_bin >= rep.n_azimuth)
        throw InvalidInput("autocorrelation bin " + std::to_string(rep.autocorr_bin) + " outside the grid");
    try {
        const auto fluct = temporal_fluctuation(powers, rep.autocorr_bin);
        const auto coeffs = with_bin_context(rep.autocorr_bin, [&] { return autocorrelation(fluct, options.max_lag); });
        for (std::size_t lag = 0; lag < coeffs.size(); ++lag)
            rep.autocorr.push_back({static_cast<double>(lag) * options.dt_s, coeffs[lag]});
    } catch (const DegenerateError&) {
    }

    if (rep.p_rel_db.size() >= cdf_min_samples)
        rep.cdf_distance_p = cdf_quantile_distance_db(rep.p_rel_db, rep.mu_p_hat, rep.sigma_p_hat);
    if (rician_checked > 0)
        rep.rician_fit_fraction = static_cast<double>(rician_within) / static_cast<double>(rician_checked);
    return rep;
}

EstimationReport roundtrip(const ChannelGrid& grid, RoundtripOptions options)
{
    options.dt_s = grid.spec.dt_s;
    return roundtrip(power_grid(grid), options);
}

} // namespace clutter
