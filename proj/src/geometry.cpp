#include "clutter/geometry.hpp"

#include "clutter/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace clutter {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double value, const char* what)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw InvalidInput(std::string(what) + " must be finite and > 0, got " + std::to_string(value));
}

// (lambda / (4 pi d))^2
double free_space_ratio(double lambda_m, double d_m)
{
    const double a = lambda_m / (4.0 * pi * d_m);
    return a * a;
}

} // namespace

std::string_view to_string(ScenarioKind kind) noexcept
{
    switch (kind) {
    case ScenarioKind::Midstreet:
        return "midstreet";
    case ScenarioKind::Intersection:
        return "intersection";
    }
    return "unknown";
}

ScenarioGeometry ScenarioGeometry::midstreet(double d1_m, double d2_m, double carrier_frequency_hz)
{
    ScenarioGeometry g{Midstreet{d1_m, d2_m}, carrier_frequency_hz};
    g.validate();
    return g;
}

ScenarioGeometry ScenarioGeometry::intersection(double w_m, double carrier_frequency_hz)
{
    ScenarioGeometry g{Intersection{w_m}, carrier_frequency_hz};
    g.validate();
    return g;
}

ScenarioKind ScenarioGeometry::kind() const noexcept
{
    return std::holds_alternative<Midstreet>(layout) ? ScenarioKind::Midstreet : ScenarioKind::Intersection;
}

double ScenarioGeometry::wavelength_m() const
{
    return wavelength(carrier_frequency_hz);
}

void ScenarioGeometry::validate() const
{
    require_positive(carrier_frequency_hz, "carrier_frequency");
    if (const auto* m = std::get_if<Midstreet>(&layout)) {
        require_positive(m->d1_m, "d1");
        require_positive(m->d2_m, "d2");
    } else {
        require_positive(std::get<Intersection>(layout).w_m, "w");
    }
}

void Reflectivity::validate() const
{
    if (!(gamma_sq > 0.0 && gamma_sq <= 1.0))
        throw InvalidInput("gamma_sq must lie in (0, 1], got " + std::to_string(gamma_sq));
}

double wavelength(double frequency_hz)
{
    require_positive(frequency_hz, "frequency");
    return speed_of_light / frequency_hz;
}

double directional_distance(const ScenarioGeometry& geometry, double phi_rad)
{
    geometry.validate();
    if (!std::isfinite(phi_rad))
        throw InvalidInput("azimuth must be finite");

    if (const auto* m = std::get_if<Midstreet>(&geometry.layout)) {
        if (!(phi_rad > -pi && phi_rad <= pi))
            throw InvalidInput("midstreet azimuth must lie in (-pi, pi]");
        if (std::abs(std::abs(phi_rad) - pi / 2.0) < grazing_cutoff_rad)
            throw SingularityError("azimuth at grazing incidence to the street walls");
        const double ds = std::abs(phi_rad) < pi / 2.0 ? m->d1_m : m->d2_m;
        return ds / std::abs(std::cos(phi_rad));
    }

    const double w = std::get<Intersection>(geometry.layout).w_m;
    if (std::abs(phi_rad - pi / 2.0) < grazing_cutoff_rad)
        throw SingularityError("azimuth at grazing incidence to the intersection wall");
    if (!(phi_rad >= pi / 4.0 && phi_rad < pi / 2.0))
        throw InvalidInput("intersection azimuth must lie in [pi/4, pi/2)");
    return w / std::cos(phi_rad);
}

double mean_power_midstreet(double d1_m, double d2_m, double lambda_m, const Reflectivity& refl)
{
    require_positive(d1_m, "d1");
    require_positive(d2_m, "d2");
    require_positive(lambda_m, "lambda");
    refl.validate();
    return refl.gamma_sq * (0.25 * free_space_ratio(lambda_m, d1_m) + 0.25 * free_space_ratio(lambda_m, d2_m));
}

double mean_power_intersection(double w_m, double lambda_m, const Reflectivity& refl)
{
    require_positive(w_m, "w");
    require_positive(lambda_m, "lambda");
    refl.validate();
    return refl.gamma_sq * (0.5 - 1.0 / pi) * free_space_ratio(lambda_m, w_m);
}

double mean_power(const ScenarioGeometry& geometry, const Reflectivity& refl)
{
    geometry.validate();
    const double lambda = geometry.wavelength_m();
    if (const auto* m = std::get_if<Midstreet>(&geometry.layout))
        return mean_power_midstreet(m->d1_m, m->d2_m, lambda, refl);
    return mean_power_intersection(std::get<Intersection>(geometry.layout).w_m, lambda, refl);
}

double mean_power_numeric(const ScenarioGeometry& geometry, const Reflectivity& refl, int n_steps)
{
    if (n_steps < 360)
        throw InvalidInput("n_steps must be >= 360, got " + std::to_string(n_steps));
    geometry.validate();
    refl.validate();
    const double lambda = geometry.wavelength_m();

    // The integrand vanishes like cos^2 at grazing incidence, so the cutoff
    // contributes its limit value of zero.
    auto integrand = [&](double phi) {
        try {
            return free_space_ratio(lambda, directional_distance(geometry, phi));
        } catch (const SingularityError&) {
            return 0.0;
        }
    };

    double sum = 0.0;
    if (geometry.kind() == ScenarioKind::Midstreet) {
        const double h = 2.0 * pi / n_steps;
        for (int i = 0; i < n_steps; ++i)
            sum += integrand(-pi + (i + 0.5) * h);
        return refl.gamma_sq * sum / n_steps;
    }

    // Two walls, phi and phi', each swept over [pi/4, pi/2]; folded onto the
    // same wall-relative sector they give identical integrals.
    const double h = (pi / 4.0) / n_steps;
    for (int wall = 0; wall < 2; ++wall)
        for (int i = 0; i < n_steps; ++i)
            sum += integrand(pi / 4.0 + (i + 0.5) * h) * h;
    return refl.gamma_sq * sum / (pi / 2.0);
}

double to_db(double ratio) noexcept
{
    return 10.0 * std::log10(ratio);
}

} // namespace clutter
