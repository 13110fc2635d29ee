#pragma once

#include "clutter/geometry.hpp"
#include "clutter/matrix.hpp"
#include "clutter/profile.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace clutter {

/// Finest granularity the model supports: one degree in azimuth and one
/// antenna revolution (0.6 s) in time.
inline constexpr double min_d_phi_deg = 1.0;
inline constexpr double min_dt_s = 0.6;
/// Narrowest antenna half-power beamwidth the model supports, degrees.
inline constexpr double min_beamwidth_deg = 2.0;
/// dB value reported for zero power.
inline constexpr double power_floor_db = -300.0;

/// Azimuth x time lattice. Bin i sits at azimuth_start_deg + i * d_phi_deg,
/// step j at j * dt_s.
struct GridSpec {
    double azimuth_start_deg = -75.0;
    int n_azimuth = 150;
    double d_phi_deg = 1.0;
    int n_time = 1;
    double dt_s = 0.6;

    /// Model's default display window for a layout: 150 bins over -75..+75 deg
    /// midstreet, a 90 bin sector at intersections.
    static GridSpec default_for(ScenarioKind kind, int n_time);

    /// InvalidInput for empty or over-wide lattices, ModelValidityError for
    /// steps finer than min_d_phi_deg / min_dt_s.
    void validate() const;

    double azimuth_deg(std::size_t bin) const noexcept { return azimuth_start_deg + static_cast<double>(bin) * d_phi_deg; }
    double time_s(std::size_t step) const noexcept { return static_cast<double>(step) * dt_s; }

    bool operator==(const GridSpec&) const = default;
};

using ComplexMatrix = Matrix<std::complex<double>>;
using PowerMatrix = Matrix<double>;

/// Complex backscatter channel h(phi, t) over a GridSpec lattice.
/// E|h(phi, t)|^2 = p0 * 10^(P(phi)/10) for every bin.
struct ChannelGrid {
    GridSpec spec;
    ScenarioGeometry geometry;
    Reflectivity reflectivity;
    ProfileParams params;
    std::uint64_t seed = 0;
    double p0 = 0.0;
    ComplexMatrix h;
    /// Static draws behind h; present on freshly synthesized grids only.
    std::optional<AzimuthProfile> profile;
};

/// Seed of the azimuth profile for a scenario seed.
std::uint64_t profile_seed(std::uint64_t scenario_seed) noexcept;
/// Seed of the temporal fluctuation of azimuth bin `bin`.
std::uint64_t fluctuation_seed(std::uint64_t scenario_seed, std::uint64_t bin) noexcept;

/// Builds h(phi, t) = sqrt(p0) sqrt(10^(P/10)) h_fluct(phi, t), with p0 from the
/// closed form matching the geometry. Deterministic in `seed`.
ChannelGrid synthesize(const ScenarioGeometry& geometry, const ProfileParams& params, const GridSpec& spec,
                       std::uint64_t seed, const Reflectivity& refl = {});

/// Row `bin` of synthesize() for the same inputs, generated on its own.
std::vector<std::complex<double>> synthesize_bin(const ScenarioGeometry& geometry, const ProfileParams& params,
                                                 const GridSpec& spec, std::uint64_t seed, std::size_t bin,
                                                 const Reflectivity& refl = {});

/// Field amplitude pattern over the full circle; entry k is the gain toward
/// azimuth k * d_phi_deg.
struct AntennaPattern {
    double d_phi_deg = 1.0;
    std::vector<std::complex<double>> field_gain;

    /// Interpolated width of the main lobe of |g|^2 at half peak power, degrees.
    double half_power_beamwidth_deg() const;

    /// InvalidInput if the bins do not tile 360 degrees or all gains are zero;
    /// ModelValidityError if the beam is narrower than min_beamwidth_deg. A single
    /// nonzero bin is the native-resolution identity and is accepted.
    void validate() const;
};

/// Circularly convolves every time column of the grid with the pattern:
/// out[m] = sum_k g[k] x[(m - k) mod N]. The grid window is zero-padded to the
/// full circle first and the output is cropped back to the same window.
ChannelGrid apply_antenna(const ChannelGrid& grid, const AntennaPattern& pattern);

/// Elementwise |h|^2.
PowerMatrix power_grid(const ChannelGrid& grid);
PowerMatrix power_grid(const ComplexMatrix& h);
/// Elementwise 10 log10 |h|^2, with zero power mapped to `floor_db`.
PowerMatrix power_grid_db(const ChannelGrid& grid, double floor_db = power_floor_db);

/// 10 log10 of a power ratio, with zero mapped to `floor_db`.
double power_to_db(double power, double floor_db = power_floor_db) noexcept;

} // namespace clutter
