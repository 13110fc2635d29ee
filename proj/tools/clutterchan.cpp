// Command-line front end: geometry, synthesize, estimate and validate.

#include "clutter/config.hpp"
#include "clutter/error.hpp"
#include "clutter/estimation.hpp"
#include "clutter/geometry.hpp"
#include "clutter/grid_io.hpp"
#include "clutter/report.hpp"
#include "clutter/synthesis.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_model = 3,
    exit_io = 4,
    exit_validation = 5,
};

constexpr int numeric_check_steps = 100'000;

clutter::ScenarioConfig load(const std::string& path, std::optional<std::uint64_t> seed)
{
    clutter::ScenarioConfig cfg = clutter::load_config(path);
    if (seed)
        cfg.seed = *seed;
    return cfg;
}

// Pattern paths in a config are relative to the config file.
std::string resolve_relative(const std::string& config_path, const std::string& path)
{
    const std::filesystem::path p(path);
    if (p.is_absolute())
        return path;
    return (std::filesystem::path(config_path).parent_path() / p).string();
}

int run_geometry(const std::string& config_path, bool json)
{
    const auto cfg = load(config_path, std::nullopt);
    const double p0 = clutter::mean_power(cfg.geometry, cfg.reflectivity);
    const double numeric = clutter::mean_power_numeric(cfg.geometry, cfg.reflectivity, numeric_check_steps);
    const double rel_err = std::abs(numeric - p0) / p0;

    if (json) {
        nlohmann::json out{{"kind", clutter::to_string(cfg.geometry.kind())},
                           {"wavelength_m", cfg.geometry.wavelength_m()},
                           {"p0", p0},
                           {"p0_db", clutter::to_db(p0)},
                           {"numeric_p0", numeric},
                           {"numeric_steps", numeric_check_steps},
                           {"relative_error", rel_err}};
        std::cout << out.dump(2) << "\n";
        return exit_ok;
    }
    std::cout << "scenario         " << clutter::to_string(cfg.geometry.kind()) << "\n";
    std::cout << "wavelength       " << clutter::format_double17(cfg.geometry.wavelength_m()) << " m\n";
    std::printf("p0               %.6e (%.2f dB)\n", p0, clutter::to_db(p0));
    std::printf("numeric average  %.6e (%d steps)\n", numeric, numeric_check_steps);
    std::printf("relative error   %.3e\n", rel_err);
    return exit_ok;
}

int run_synthesize(const std::string& config_path, const std::string& out_path, std::optional<std::uint64_t> seed)
{
    const auto cfg = load(config_path, seed);
    clutter::ChannelGrid grid = clutter::synthesize(cfg.geometry, cfg.params, cfg.grid, cfg.seed, cfg.reflectivity);
    if (cfg.antenna_pattern) {
        const auto pattern = clutter::read_antenna_pattern(resolve_relative(config_path, *cfg.antenna_pattern));
        grid = clutter::apply_antenna(grid, pattern);
    }
    clutter::write_grid(out_path, cfg, grid);
    std::cout << "wrote " << grid.h.rows() * grid.h.cols() << " cells (" << grid.h.rows() << " azimuth x "
              << grid.h.cols() << " time) to " << out_path << "\n";
    return exit_ok;
}

int run_estimate(const std::string& grid_path, bool json, const std::string& out_path)
{
    const clutter::PowerInput input = clutter::read_power_input(grid_path);
    clutter::RoundtripOptions options;
    options.dt_s = input.spec.dt_s;
    clutter::EstimationReport report;
    try {
        report = clutter::roundtrip(input.powers, options);
    } catch (const clutter::InvalidInput& e) {
        throw clutter::IoError(grid_path + ": " + e.what());
    }

    nlohmann::json doc = clutter::to_json(report);
    if (input.p0)
        doc["p0"] = *input.p0;
    if (!out_path.empty())
        clutter::write_file_atomic(out_path, doc.dump(2) + "\n");
    if (json)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << clutter::format_report(report, input.p0);
    return exit_ok;
}

int run_validate(const std::string& config_path, std::optional<std::uint64_t> seed, bool json)
{
    const auto cfg = load(config_path, seed);
    const clutter::ValidationResult result = clutter::run_validation(cfg);
    if (json)
        std::cout << clutter::to_json(result).dump(2) << "\n";
    else
        std::cout << clutter::format_validation(result);
    return result.passed ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synthesize and analyse monostatic backscatter clutter channels for urban street canyons"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string grid_path;
    std::optional<std::uint64_t> seed;
    bool json = false;

    auto* geometry = app.add_subcommand("geometry", "Average backscatter power ratio of the configured geometry");
    geometry->add_option("--config", config_path, "Scenario config")->required();
    geometry->add_flag("--json", json, "Machine-readable output");

    auto* synth = app.add_subcommand("synthesize", "Write a synthetic channel grid");
    synth->add_option("--config", config_path, "Scenario config")->required();
    synth->add_option("--out", out_path, "Output grid file")->required();
    synth->add_option("--seed", seed, "Override the config seed");

    auto* estimate = app.add_subcommand("estimate", "Re-estimate model statistics from a grid or power CSV");
    estimate->add_option("grid", grid_path, "Grid file, or power CSV with a .meta sidecar")->required();
    estimate->add_option("--out", out_path, "Also write the JSON report here");
    estimate->add_flag("--json", json, "Machine-readable output");

    auto* validate = app.add_subcommand("validate", "Synthesize, re-estimate and compare against tolerances");
    validate->add_option("--config", config_path, "Scenario config")->required();
    validate->add_option("--seed", seed, "Override the config seed");
    validate->add_flag("--json", json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (geometry->parsed())
            return run_geometry(config_path, json);
        if (synth->parsed())
            return run_synthesize(config_path, out_path, seed);
        if (estimate->parsed())
            return run_estimate(grid_path, json, out_path);
        if (validate->parsed())
            return run_validate(config_path, seed, json);
    } catch (const clutter::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const clutter::ModelValidityError& e) {
        std::cerr << "model validity: " << e.what() << "\n";
        return exit_model;
    } catch (const clutter::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const clutter::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_ok;
}
