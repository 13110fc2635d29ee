#pragma once

#include "clutter/config.hpp"
#include "clutter/synthesis.hpp"

#include <string>
#include <string_view>

namespace clutter {

inline constexpr std::string_view grid_format_tag = "clutterchan-grid";
inline constexpr int grid_format_version = 1;

/// Self-describing grid file: commented key-value header carrying the scenario
/// and p0, then one CSV row per (azimuth, time) cell in azimuth-major order:
///
///     azimuth_deg,time_s,h_re,h_im,power_db
///
/// Floats are written with 17 significant digits.
struct GridFile {
    ScenarioConfig config;
    ChannelGrid grid;
};

std::string format_grid(const ScenarioConfig& config, const ChannelGrid& grid);
GridFile parse_grid(std::string_view text);

void write_grid(const std::string& path, const ScenarioConfig& config, const ChannelGrid& grid);
GridFile read_grid(const std::string& path);

/// Power grid handed to the estimator together with its lattice.
struct PowerInput {
    PowerMatrix powers;
    GridSpec spec;
    std::optional<double> p0; // known for grid files only
};

/// Reads either a grid file, or a bare CSV of powers (one row per azimuth bin,
/// one column per time step) with a `<path>.meta` sidecar:
///
///     [grid]
///     dt_s = 0.6
///     d_phi_deg = 1
///     azimuth_start_deg = -75
///     units = linear      ; or db
PowerInput read_power_input(const std::string& path);

/// Antenna field pattern as CSV rows `azimuth_deg,re[,im]` covering 360 degrees
/// on a uniform lattice containing 0 degrees.
AntennaPattern parse_antenna_pattern(std::string_view text);
AntennaPattern read_antenna_pattern(const std::string& path);

/// Whole-file read; IoError when the file cannot be opened.
std::string read_text_file(const std::string& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

} // namespace clutter
