#include "clutter/synthesis.hpp"

#include "clutter/error.hpp"
#include "clutter/rng.hpp"
#include "clutter/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clutter {

namespace {

constexpr double lattice_tol = 1e-9;

// Rounds x to the nearest integer, failing if it is not one.
long exact_count(double x, const char* what)
{
    const double r = std::round(x);
    if (std::abs(x - r) > lattice_tol * std::max(1.0, std::abs(x)))
        throw InvalidInput(std::string(what) + " is not a whole number of bins");
    return static_cast<long>(r);
}

std::size_t wrap(long i, long n)
{
    const long m = i % n;
    return static_cast<std::size_t>(m < 0 ? m + n : m);
}

} // namespace

GridSpec GridSpec::default_for(ScenarioKind kind, int n_time)
{
    if (kind == ScenarioKind::Midstreet)
        return {-75.0, 150, 1.0, n_time, 0.6};
    return {-45.0, 90, 1.0, n_time, 0.6};
}

void GridSpec::validate() const
{
    if (!std::isfinite(azimuth_start_deg) || !std::isfinite(d_phi_deg) || !std::isfinite(dt_s))
        throw InvalidInput("grid values must be finite");
    if (n_azimuth < 1)
        throw InvalidInput("n_azimuth must be >= 1, got " + std::to_string(n_azimuth));
    if (n_time < 1)
        throw InvalidInput("n_time must be >= 1, got " + std::to_string(n_time));
    if (d_phi_deg < min_d_phi_deg)
        throw ModelValidityError("d_phi = " + std::to_string(d_phi_deg) +
                                 " deg is finer than the 1 deg azimuth granularity the model supports");
    if (dt_s < min_dt_s)
        throw ModelValidityError("dt = " + std::to_string(dt_s) +
                                 " s is finer than the 0.6 s time granularity the model supports");
    if (n_azimuth * d_phi_deg > 360.0 + lattice_tol)
        throw InvalidInput("n_azimuth * d_phi exceeds 360 deg");
}

std::uint64_t profile_seed(std::uint64_t scenario_seed) noexcept
{
    return derive_seed(scenario_seed, stream_tag::profile);
}

std::uint64_t fluctuation_seed(std::uint64_t scenario_seed, std::uint64_t bin) noexcept
{
    return derive_seed(scenario_seed, stream_tag::fluctuation, bin);
}

namespace {

void fill_row(std::span<std::complex<double>> row, double p0, const ProfileDraw& draw, const GridSpec& spec,
              std::uint64_t seed, std::size_t bin)
{
    const double amplitude = std::sqrt(p0) * std::sqrt(std::pow(10.0, draw.p_db / 10.0));
    const FluctuationSeries fluct =
        sample_fluctuation(draw.k_db, draw.psi_rad, spec.n_time, fluctuation_seed(seed, bin), spec.dt_s);
    for (std::size_t t = 0; t < row.size(); ++t)
        row[t] = amplitude * fluct.samples[t];
}

} // namespace

ChannelGrid synthesize(const ScenarioGeometry& geometry, const ProfileParams& params, const GridSpec& spec,
                       std::uint64_t seed, const Reflectivity& refl)
{
    spec.validate();
    params.validate();

    ChannelGrid grid;
    grid.spec = spec;
    grid.geometry = geometry;
    grid.reflectivity = refl;
    grid.params = params;
    grid.seed = seed;
    grid.p0 = mean_power(geometry, refl);
    grid.profile = sample_profile(params, spec.n_azimuth, spec.d_phi_deg, profile_seed(seed), spec.azimuth_start_deg);
    grid.h = ComplexMatrix(static_cast<std::size_t>(spec.n_azimuth), static_cast<std::size_t>(spec.n_time));

    const AzimuthProfile& prof = *grid.profile;
    for (std::size_t b = 0; b < prof.size(); ++b)
        fill_row(grid.h.row(b), grid.p0, {prof.p_db[b], prof.k_db[b], prof.psi_rad[b]}, spec, seed, b);
    return grid;
}

std::vector<std::complex<double>> synthesize_bin(const ScenarioGeometry& geometry, const ProfileParams& params,
                                                 const GridSpec& spec, std::uint64_t seed, std::size_t bin,
                                                 const Reflectivity& refl)
{
    spec.validate();
    params.validate();
    if (bin >= static_cast<std::size_t>(spec.n_azimuth))
        throw InvalidInput("bin " + std::to_string(bin) + " outside the grid");
    const double p0 = mean_power(geometry, refl);
    std::vector<std::complex<double>> row(static_cast<std::size_t>(spec.n_time));
    fill_row(row, p0, sample_profile_bin(params, profile_seed(seed), bin), spec, seed, bin);
    return row;
}

double AntennaPattern::half_power_beamwidth_deg() const
{
    const std::size_t n = field_gain.size();
    if (n == 0)
        return 0.0;
    std::vector<double> power(n);
    std::transform(field_gain.begin(), field_gain.end(), power.begin(), [](auto g) { return std::norm(g); });
    const auto peak_it = std::max_element(power.begin(), power.end());
    const double half = 0.5 * *peak_it;
    const long peak = peak_it - power.begin();
    const long ln = static_cast<long>(n);

    // Walks away from the peak until the power drops below half, then
    // interpolates the crossing linearly between the last two bins.
    auto extent = [&](long dir) {
        for (long step = 1; step < ln; ++step) {
            const double inside = power[wrap(peak + dir * (step - 1), ln)];
            const double here = power[wrap(peak + dir * step, ln)];
            if (here < half)
                return static_cast<double>(step - 1) + (inside - half) / (inside - here);
        }
        return static_cast<double>(ln);
    };

    const double bins = extent(+1) + extent(-1);
    return std::min(bins, static_cast<double>(n)) * d_phi_deg;
}

void AntennaPattern::validate() const
{
    if (!(d_phi_deg > 0.0) || !std::isfinite(d_phi_deg))
        throw InvalidInput("pattern bin width must be > 0");
    const long n = exact_count(360.0 / d_phi_deg, "360 / pattern bin width");
    if (static_cast<long>(field_gain.size()) != n)
        throw InvalidInput("pattern must cover 360 deg: expected " + std::to_string(n) + " bins, got " +
                           std::to_string(field_gain.size()));
    for (const auto& g : field_gain)
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
            throw InvalidInput("pattern gains must be finite");

    const auto nonzero = std::count_if(field_gain.begin(), field_gain.end(), [](auto g) { return g != 0.0; });
    if (nonzero == 0)
        throw InvalidInput("pattern has no nonzero gain");
    if (nonzero == 1)
        return;

    const double hpbw = half_power_beamwidth_deg();
    if (hpbw < min_beamwidth_deg - lattice_tol)
        throw ModelValidityError("antenna half-power beamwidth " + std::to_string(hpbw) +
                                 " deg is narrower than the 2 deg beam the model supports");
}

ChannelGrid apply_antenna(const ChannelGrid& grid, const AntennaPattern& pattern)
{
    if (std::abs(pattern.d_phi_deg - grid.spec.d_phi_deg) > lattice_tol)
        throw InvalidInput("pattern bin width " + std::to_string(pattern.d_phi_deg) +
                           " deg does not match grid d_phi " + std::to_string(grid.spec.d_phi_deg) + " deg");
    pattern.validate();

    const long n = static_cast<long>(pattern.field_gain.size());
    const long offset = exact_count(grid.spec.azimuth_start_deg / grid.spec.d_phi_deg, "grid azimuth_start / d_phi");
    const std::size_t rows = grid.h.rows();
    const std::size_t cols = grid.h.cols();
    if (static_cast<long>(rows) > n)
        throw InvalidInput("grid window is wider than the full circle");

    // Window row index of each full-circle bin, or -1 when zero-padded.
    std::vector<long> window_row(static_cast<std::size_t>(n), -1);
    for (std::size_t r = 0; r < rows; ++r)
        window_row[wrap(offset + static_cast<long>(r), n)] = static_cast<long>(r);

    std::vector<std::pair<long, std::complex<double>>> taps;
    for (long k = 0; k < n; ++k)
        if (pattern.field_gain[static_cast<std::size_t>(k)] != 0.0)
            taps.emplace_back(k, pattern.field_gain[static_cast<std::size_t>(k)]);

    ChannelGrid out = grid;
    out.h = ComplexMatrix(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const long m = offset + static_cast<long>(r);
        auto dst = out.h.row(r);
        for (const auto& [k, g] : taps) {
            const long src = window_row[wrap(m - k, n)];
            if (src < 0)
                continue;
            const auto in = grid.h.row(static_cast<std::size_t>(src));
            for (std::size_t t = 0; t < cols; ++t)
                dst[t] += g * in[t];
        }
    }
    return out;
}

PowerMatrix power_grid(const ComplexMatrix& h)
{
    PowerMatrix out(h.rows(), h.cols());
    std::transform(h.data().begin(), h.data().end(), out.data().begin(), [](auto v) { return std::norm(v); });
    return out;
}

PowerMatrix power_grid(const ChannelGrid& grid)
{
    return power_grid(grid.h);
}

double power_to_db(double power, double floor_db) noexcept
{
    return power > 0.0 ? 10.0 * std::log10(power) : floor_db;
}

PowerMatrix power_grid_db(const ChannelGrid& grid, double floor_db)
{
    PowerMatrix out = power_grid(grid);
    for (double& v : out.data())
        v = power_to_db(v, floor_db);
    return out;
}

} // namespace clutter
