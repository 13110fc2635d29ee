#pragma once

#include <string_view>
#include <variant>

namespace clutter {

inline constexpr double speed_of_light = 299'792'458.0; // m/s

/// Grazing cutoff around cos(phi) = 0, in radians.
inline constexpr double grazing_cutoff_rad = 1e-6;

enum class ScenarioKind { Midstreet, Intersection };

std::string_view to_string(ScenarioKind kind) noexcept;

/// Radar between two parallel walls at shortest distances d1 (front, |phi| < pi/2)
/// and d2 (rear, |phi| > pi/2).
struct Midstreet {
    double d1_m = 0.0;
    double d2_m = 0.0;
    bool operator==(const Midstreet&) const = default;
};

/// Street-level radar facing an intersection; w is the width of the street
/// across which the far wall lies.
struct Intersection {
    double w_m = 0.0;
    bool operator==(const Intersection&) const = default;
};

struct ScenarioGeometry {
    std::variant<Midstreet, Intersection> layout;
    double carrier_frequency_hz = 0.0;

    static ScenarioGeometry midstreet(double d1_m, double d2_m, double carrier_frequency_hz);
    static ScenarioGeometry intersection(double w_m, double carrier_frequency_hz);

    ScenarioKind kind() const noexcept;
    double wavelength_m() const;

    /// Throws InvalidInput when a length or the frequency is not strictly positive.
    void validate() const;

    bool operator==(const ScenarioGeometry&) const = default;
};

/// Power reflection coefficient |Gamma_clut|^2 of the surrounding clutter.
struct Reflectivity {
    double gamma_sq = 1.0;

    void validate() const;
    bool operator==(const Reflectivity&) const = default;
};

/// c / f. Throws InvalidInput for f <= 0.
double wavelength(double frequency_hz);

/// Distance from the radar to the wall point seen at azimuth phi (rad).
///
/// Midstreet: d_s / cos(phi) with d_s = d1 for |phi| < pi/2, d2 otherwise,
/// phi in (-pi, pi]. Intersection: w / cos(phi) with phi the wall-relative
/// angle in [pi/4, pi/2). Throws SingularityError within the grazing cutoff of
/// cos(phi) = 0 and InvalidInput outside the angular domain.
double directional_distance(const ScenarioGeometry& geometry, double phi_rad);

/// Closed-form time/azimuth average backscatter power ratio for a midstreet radar:
/// gamma_sq * [0.25 (lambda / 4 pi d1)^2 + 0.25 (lambda / 4 pi d2)^2].
double mean_power_midstreet(double d1_m, double d2_m, double lambda_m, const Reflectivity& refl = {});

/// Closed-form average over the 90 degree intersection sector:
/// gamma_sq * (0.5 - 1/pi) (lambda / 4 pi w)^2.
double mean_power_intersection(double w_m, double lambda_m, const Reflectivity& refl = {});

/// Dispatches to the closed form matching the geometry's layout.
double mean_power(const ScenarioGeometry& geometry, const Reflectivity& refl = {});

/// Midpoint-rule azimuth average of gamma_sq (lambda / 4 pi d(phi))^2.
///
/// Midstreet integrates over the full circle (-pi, pi]; intersection integrates
/// both wall sectors [pi/4, pi/2] and normalizes by pi/2. Requires n_steps >= 360.
double mean_power_numeric(const ScenarioGeometry& geometry, const Reflectivity& refl, int n_steps);

/// Ratio expressed in dB.
double to_db(double ratio) noexcept;

} // namespace clutter
