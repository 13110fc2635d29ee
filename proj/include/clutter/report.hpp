#pragma once

#include "clutter/config.hpp"
#include "clutter/estimation.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace clutter {

nlohmann::json to_json(const EstimationReport& report);
nlohmann::json to_json(const ProfileParams& params);

/// Plain-text rendering of an estimation report.
std::string format_report(const EstimationReport& report, std::optional<double> p0 = std::nullopt);

/// One recovered parameter compared against its generating value.
struct ValidationCheck {
    std::string name;
    double target = 0.0;
    std::optional<double> recovered;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationResult {
    std::vector<ValidationCheck> checks;
    EstimationReport report;
    double p0 = 0.0;
    bool passed = false;
};

/// Synthesizes the configured scenario, re-estimates it and compares sigma_P,
/// mu_K, sigma_K and rho_PK with the configured tolerances. The antenna pattern
/// is not applied: the checks concern the raw channel statistics.
ValidationResult run_validation(const ScenarioConfig& config);

nlohmann::json to_json(const ValidationResult& result);
std::string format_validation(const ValidationResult& result);

} // namespace clutter
