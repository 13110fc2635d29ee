#include "clutter/report.hpp"

#include "clutter/synthesis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace clutter {

namespace {

nlohmann::json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fixed(double v, int digits = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fixed(const std::optional<double>& v, int digits = 3)
{
    return v ? fixed(*v, digits) : std::string("undefined");
}

const char* kind_name(KFactorEstimate::Kind kind)
{
    switch (kind) {
    case KFactorEstimate::Kind::Finite:
        return "finite";
    case KFactorEstimate::Kind::Rayleigh:
        return "rayleigh";
    case KFactorEstimate::Kind::Constant:
        return "constant";
    }
    return "unknown";
}

} // namespace

nlohmann::json to_json(const ProfileParams& params)
{
    return {{"sigma_p_db", params.sigma_p_db},
            {"mu_p_db", params.mu_p_db},
            {"sigma_k_db", params.sigma_k_db},
            {"mu_k_db", params.mu_k_db},
            {"rho_pk", params.rho_pk}};
}

nlohmann::json to_json(const EstimationReport& report)
{
    nlohmann::json k_bins = nlohmann::json::array();
    for (const auto& k : report.k_per_bin)
        k_bins.push_back({{"kind", kind_name(k.kind)}, {"k_db", k.finite() ? nlohmann::json(k.k_db) : nullptr}});

    nlohmann::json autocorr = nlohmann::json::array();
    for (const auto& point : report.autocorr)
        autocorr.push_back({{"lag_s", point.lag_s}, {"coefficient", point.coefficient}});

    return {
        {"n_azimuth", report.n_azimuth},
        {"n_time", report.n_time},
        {"mean_power_ratio", report.mean_power_ratio},
        {"mean_power_db", power_to_db(report.mean_power_ratio)},
        {"p_rel_db", report.p_rel_db},
        {"mu_p_hat", report.mu_p_hat},
        {"sigma_p_hat", report.sigma_p_hat},
        {"k_db_per_bin", k_bins},
        {"n_k_finite", report.n_k_finite},
        {"n_k_rayleigh", report.n_k_rayleigh},
        {"n_k_constant", report.n_k_constant},
        {"mu_k_hat", optional_number(report.mu_k_hat)},
        {"sigma_k_hat", optional_number(report.sigma_k_hat)},
        {"rho_pk_hat", optional_number(report.rho_pk_hat)},
        {"autocorr_bin", report.autocorr_bin},
        {"autocorr", autocorr},
        {"cdf_distance_p", optional_number(report.cdf_distance_p)},
        {"cdf_distance_k", optional_number(report.cdf_distance_k)},
        {"rician_fit_fraction", optional_number(report.rician_fit_fraction)},
    };
}

std::string format_report(const EstimationReport& report, std::optional<double> p0)
{
    std::ostringstream out;
    out << "grid                 " << report.n_azimuth << " azimuth bins x " << report.n_time << " time steps\n";
    out << "mean power ratio     " << format_double17(report.mean_power_ratio) << " ("
        << fixed(power_to_db(report.mean_power_ratio), 2) << " dB)\n";
    if (p0)
        out << "geometry p0          " << format_double17(*p0) << " (" << fixed(power_to_db(*p0), 2) << " dB)\n";
    out << "azimuth deviation    mu = " << fixed(report.mu_p_hat) << " dB, sigma = " << fixed(report.sigma_p_hat)
        << " dB\n";
    out << "K-factor             mu = " << fixed(report.mu_k_hat) << " dB, sigma = " << fixed(report.sigma_k_hat)
        << " dB (" << report.n_k_finite << " finite, " << report.n_k_rayleigh << " rayleigh, " << report.n_k_constant
        << " constant)\n";
    out << "P-K correlation      " << fixed(report.rho_pk_hat) << "\n";
    out << "CDF distance         P " << fixed(report.cdf_distance_p) << " dB, K " << fixed(report.cdf_distance_k)
        << " dB\n";
    out << "Rician fit fraction  " << fixed(report.rician_fit_fraction) << "\n";
    out << "autocorrelation      bin " << report.autocorr_bin << ":";
    if (report.autocorr.empty())
        out << " undefined";
    for (const auto& p : report.autocorr)
        out << " " << fixed(p.lag_s, 1) << "s=" << fixed(p.coefficient);
    out << "\n";
    return out.str();
}

ValidationResult run_validation(const ScenarioConfig& config)
{
    ValidationResult result;
    const ChannelGrid grid = synthesize(config.geometry, config.params, config.grid, config.seed, config.reflectivity);
    result.p0 = grid.p0;
    RoundtripOptions options;
    options.rician_check = false;
    result.report = roundtrip(grid, options);

    const Tolerances tol = config.effective_tolerances();
    auto check = [&](std::string name, double target, std::optional<double> recovered, double tolerance) {
        const bool ok = recovered && std::abs(*recovered - target) <= tolerance;
        result.checks.push_back({std::move(name), target, recovered, tolerance, ok});
    };
    check("sigma_p_db", config.params.sigma_p_db, result.report.sigma_p_hat, tol.sigma_p_db);
    check("mu_k_db", config.params.mu_k_db, result.report.mu_k_hat, tol.mu_k_db);
    check("sigma_k_db", config.params.sigma_k_db, result.report.sigma_k_hat, tol.sigma_k_db);
    check("rho_pk", config.params.rho_pk, result.report.rho_pk_hat, tol.rho_pk);

    result.passed = true;
    for (const auto& c : result.checks)
        result.passed = result.passed && c.passed;
    return result;
}

nlohmann::json to_json(const ValidationResult& result)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.checks)
        checks.push_back({{"name", c.name},
                          {"target", c.target},
                          {"recovered", optional_number(c.recovered)},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed}});
    return {{"passed", result.passed},
            {"checks", checks},
            {"p0", result.p0},
            {"mean_power_error_db", power_to_db(result.report.mean_power_ratio) - power_to_db(result.p0)},
            {"report", to_json(result.report)}};
}

std::string format_validation(const ValidationResult& result)
{
    std::ostringstream out;
    out << "parameter      target  recovered  tolerance  result\n";
    for (const auto& c : result.checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%-12s %8.3f %10s %10.3f  %s\n", c.name.c_str(), c.target,
                      fixed(c.recovered).c_str(), c.tolerance, c.passed ? "pass" : "FAIL");
        out << line;
    }
    out << "mean power     " << fixed(power_to_db(result.report.mean_power_ratio), 2) << " dB vs p0 "
        << fixed(power_to_db(result.p0), 2) << " dB (informational)\n";
    out << (result.passed ? "validation passed\n" : "validation FAILED\n");
    return out.str();
}

} // namespace clutter
