#pragma once

#include "clutter/geometry.hpp"
#include "clutter/profile.hpp"
#include "clutter/synthesis.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clutter {

/// Parsed key-value text with [sections]. Full-line comments start with '#'
/// or ';'. Duplicate sections or keys are errors.
struct KeyValueDocument {
    struct Entry {
        std::string value;
        int line = 0;
    };
    struct Section {
        int line = 0;
        std::map<std::string, Entry> entries;
    };

    std::map<std::string, Section> sections;

    static KeyValueDocument parse(std::string_view text);
};

/// Acceptance bands for the validate workflow.
struct Tolerances {
    double sigma_p_db = 0.7;
    double mu_k_db = 1.2;
    double sigma_k_db = 1.0;
    double rho_pk = 0.10;

    /// Street-level grids are 90 bins wide, so the correlation band is wider.
    static Tolerances defaults_for(std::optional<Environment> preset);
    bool operator==(const Tolerances&) const = default;
};

/// Everything needed to reproduce one synthesized scenario.
struct ScenarioConfig {
    ScenarioGeometry geometry;
    Reflectivity reflectivity;
    std::optional<Environment> preset; // params came from a preset when set
    ProfileParams params;
    GridSpec grid;
    std::uint64_t seed = 1;
    std::optional<std::string> antenna_pattern;
    std::optional<Tolerances> tolerances;

    Tolerances effective_tolerances() const;
    bool operator==(const ScenarioConfig&) const = default;
};

/// Strict parse: unknown sections or keys, missing required keys and invalid
/// values raise ConfigError naming the field and line. Grid steps finer than
/// the model supports raise ModelValidityError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Text that parse_config() maps back to an equal ScenarioConfig.
std::string serialize_config(const ScenarioConfig& config);

/// Shortest text that reads back to exactly `value`.
std::string format_double(double value);
/// `value` with 17 significant digits (printf %.17g).
std::string format_double17(double value);

/// Locale-independent full-string number parsing; nullopt on any junk.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

} // namespace clutter
