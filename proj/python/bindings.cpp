#include "clutter/config.hpp"
#include "clutter/error.hpp"
#include "clutter/estimation.hpp"
#include "clutter/geometry.hpp"
#include "clutter/grid_io.hpp"
#include "clutter/profile.hpp"
#include "clutter/report.hpp"
#include "clutter/synthesis.hpp"
#include "clutter/temporal.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using namespace clutter;

namespace {

template <typename T>
py::array_t<T> to_array(const Matrix<T>& m)
{
    py::array_t<T> out({m.rows(), m.cols()});
    std::memcpy(out.mutable_data(), m.data().data(), m.size() * sizeof(T));
    return out;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v)
{
    py::array_t<T> out(v.size());
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(T));
    return out;
}

template <typename T>
Matrix<T> to_matrix(const py::array_t<T, py::array::c_style | py::array::forcecast>& a)
{
    if (a.ndim() != 2)
        throw InvalidInput("expected a 2-D array (azimuth x time)");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return Matrix<T>(rows, cols, std::vector<T>(a.data(), a.data() + rows * cols));
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a)
{
    return std::vector<double>(a.data(), a.data() + a.size());
}

double k_as_db(const KFactorEstimate& k)
{
    return k.k_db;
}

py::dict profile_dict(const AzimuthProfile& p)
{
    py::dict d;
    d["azimuth_deg"] = to_array(p.azimuth_deg);
    d["p_db"] = to_array(p.p_db);
    d["k_db"] = to_array(p.k_db);
    d["psi_rad"] = to_array(p.psi_rad);
    return d;
}

Environment parse_environment(const std::string& name)
{
    const auto env = environment_from_string(name);
    if (!env)
        throw InvalidInput("unknown preset '" + name + "'");
    return *env;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Monostatic backscatter clutter channel synthesis and estimation";

    auto base = py::register_exception<Error>(m, "ClutterError", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<ModelValidityError>(m, "ModelValidityError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    // geometry
    py::class_<ScenarioGeometry>(m, "ScenarioGeometry")
        .def_static("midstreet", &ScenarioGeometry::midstreet, py::arg("d1_m"), py::arg("d2_m"),
                    py::arg("carrier_frequency_hz"))
        .def_static("intersection", &ScenarioGeometry::intersection, py::arg("w_m"), py::arg("carrier_frequency_hz"))
        .def_property_readonly("kind", [](const ScenarioGeometry& g) { return std::string(to_string(g.kind())); })
        .def_property_readonly("wavelength_m", &ScenarioGeometry::wavelength_m)
        .def_readonly("carrier_frequency_hz", &ScenarioGeometry::carrier_frequency_hz);

    m.def("wavelength", &wavelength, py::arg("frequency_hz"));
    m.def("directional_distance", &directional_distance, py::arg("geometry"), py::arg("phi_rad"));
    m.def(
        "mean_power_midstreet",
        [](double d1, double d2, double lambda, double gamma_sq) {
            return mean_power_midstreet(d1, d2, lambda, {gamma_sq});
        },
        py::arg("d1_m"), py::arg("d2_m"), py::arg("lambda_m"), py::arg("gamma_sq") = 1.0);
    m.def(
        "mean_power_intersection",
        [](double w, double lambda, double gamma_sq) { return mean_power_intersection(w, lambda, {gamma_sq}); },
        py::arg("w_m"), py::arg("lambda_m"), py::arg("gamma_sq") = 1.0);
    m.def(
        "mean_power_geometry",
        [](const ScenarioGeometry& g, double gamma_sq) { return clutter::mean_power(g, Reflectivity{gamma_sq}); },
        py::arg("geometry"), py::arg("gamma_sq") = 1.0);
    m.def(
        "mean_power_numeric",
        [](const ScenarioGeometry& g, int n_steps, double gamma_sq) {
            return mean_power_numeric(g, {gamma_sq}, n_steps);
        },
        py::arg("geometry"), py::arg("n_steps") = 100000, py::arg("gamma_sq") = 1.0);

    // stochastic profile
    py::class_<ProfileParams>(m, "ProfileParams")
        .def(py::init([](double sp, double mp, double sk, double mk, double rho) {
                 ProfileParams p{sp, mp, sk, mk, rho};
                 p.validate();
                 return p;
             }),
             py::arg("sigma_p_db"), py::arg("mu_p_db"), py::arg("sigma_k_db"), py::arg("mu_k_db"), py::arg("rho_pk"))
        .def_readonly("sigma_p_db", &ProfileParams::sigma_p_db)
        .def_readonly("mu_p_db", &ProfileParams::mu_p_db)
        .def_readonly("sigma_k_db", &ProfileParams::sigma_k_db)
        .def_readonly("mu_k_db", &ProfileParams::mu_k_db)
        .def_readonly("rho_pk", &ProfileParams::rho_pk)
        .def("__eq__", [](const ProfileParams& a, const ProfileParams& b) { return a == b; })
        .def("__repr__", [](const ProfileParams& p) {
            return "ProfileParams(" + to_json(p).dump() + ")";
        });

    m.def(
        "table1_preset", [](const std::string& name) { return table1_preset(parse_environment(name)); },
        py::arg("name"), "Preset by name: 'microcellular_8m' or 'street_level_1m'.");
    m.def("mu_p_from_sigma", &mu_p_from_sigma, py::arg("sigma_p_db"));
    m.def(
        "sample_profile",
        [](const ProfileParams& p, int n_bins, double bin_width, std::uint64_t seed, double start) {
            return profile_dict(sample_profile(p, n_bins, bin_width, seed, start));
        },
        py::arg("params"), py::arg("n_bins"), py::arg("bin_width_deg"), py::arg("seed"),
        py::arg("azimuth_start_deg") = 0.0);

    // temporal
    m.def(
        "sample_fluctuation",
        [](double k_db, double psi, int n_steps, std::uint64_t seed) {
            return to_array(sample_fluctuation(k_db, psi, n_steps, seed).samples);
        },
        py::arg("k_db"), py::arg("psi_rad"), py::arg("n_steps"), py::arg("seed"));
    m.def(
        "k_moment_estimate",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& powers) {
            return k_as_db(k_moment_estimate(to_vector(powers)));
        },
        py::arg("powers"), "K in dB; +inf for a constant series, -inf for the Rayleigh limit.");

    // synthesis
    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double start, int n_az, double d_phi, int n_time, double dt) {
                 return GridSpec{start, n_az, d_phi, n_time, dt};
             }),
             py::arg("azimuth_start_deg") = -75.0, py::arg("n_azimuth") = 150, py::arg("d_phi_deg") = 1.0,
             py::arg("n_time") = 1, py::arg("dt_s") = 0.6)
        .def_static(
            "default_for",
            [](const std::string& kind, int n_time) {
                return GridSpec::default_for(kind == "intersection" ? ScenarioKind::Intersection
                                                                    : ScenarioKind::Midstreet,
                                             n_time);
            },
            py::arg("kind"), py::arg("n_time"))
        .def_readonly("azimuth_start_deg", &GridSpec::azimuth_start_deg)
        .def_readonly("n_azimuth", &GridSpec::n_azimuth)
        .def_readonly("d_phi_deg", &GridSpec::d_phi_deg)
        .def_readonly("n_time", &GridSpec::n_time)
        .def_readonly("dt_s", &GridSpec::dt_s);

    py::class_<ChannelGrid>(m, "ChannelGrid")
        .def_readonly("spec", &ChannelGrid::spec)
        .def_readonly("geometry", &ChannelGrid::geometry)
        .def_readonly("params", &ChannelGrid::params)
        .def_readonly("seed", &ChannelGrid::seed)
        .def_readonly("p0", &ChannelGrid::p0)
        .def_property_readonly("h", [](const ChannelGrid& g) { return to_array(g.h); })
        .def_property_readonly("profile", [](const ChannelGrid& g) -> py::object {
            if (!g.profile)
                return py::none();
            return profile_dict(*g.profile);
        });

    m.def(
        "synthesize",
        [](const ScenarioGeometry& g, const ProfileParams& p, const GridSpec& spec, std::uint64_t seed,
           double gamma_sq) { return synthesize(g, p, spec, seed, {gamma_sq}); },
        py::arg("geometry"), py::arg("params"), py::arg("spec"), py::arg("seed"), py::arg("gamma_sq") = 1.0);

    py::class_<AntennaPattern>(m, "AntennaPattern")
        .def(py::init([](double d_phi, const py::array_t<std::complex<double>, py::array::forcecast>& gains) {
                 AntennaPattern pat{d_phi, std::vector<std::complex<double>>(gains.data(), gains.data() + gains.size())};
                 pat.validate();
                 return pat;
             }),
             py::arg("d_phi_deg"), py::arg("field_gain"))
        .def_readonly("d_phi_deg", &AntennaPattern::d_phi_deg)
        .def_property_readonly("field_gain", [](const AntennaPattern& p) { return to_array(p.field_gain); })
        .def("half_power_beamwidth_deg", &AntennaPattern::half_power_beamwidth_deg);

    m.def("apply_antenna", &apply_antenna, py::arg("grid"), py::arg("pattern"));
    m.def(
        "power_grid", [](const ChannelGrid& g) { return to_array(power_grid(g)); }, py::arg("grid"));
    m.def(
        "power_grid_db", [](const ChannelGrid& g, double floor) { return to_array(power_grid_db(g, floor)); },
        py::arg("grid"), py::arg("floor_db") = power_floor_db);

    // estimation
    using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
    m.def(
        "mean_power", [](const DoubleArray& p) { return clutter::mean_power(to_matrix<double>(p)); },
        py::arg("powers"));
    m.def(
        "relative_azimuth_power",
        [](const DoubleArray& p) { return to_array(relative_azimuth_power(to_matrix<double>(p))); },
        py::arg("powers"));
    m.def(
        "temporal_fluctuation",
        [](const DoubleArray& p, std::size_t bin) { return to_array(temporal_fluctuation(to_matrix<double>(p), bin)); },
        py::arg("powers"), py::arg("bin"));
    m.def(
        "autocorrelation",
        [](const DoubleArray& s, std::size_t max_lag) { return to_array(autocorrelation(to_vector(s), max_lag)); },
        py::arg("series"), py::arg("max_lag"));
    m.def(
        "cdf_quantile_distance_db",
        [](const DoubleArray& s, double mu, double sigma, double lo, double hi) {
            return cdf_quantile_distance_db(to_vector(s), mu, sigma, lo, hi);
        },
        py::arg("samples_db"), py::arg("mu_db"), py::arg("sigma_db"), py::arg("p_lo") = 0.01, py::arg("p_hi") = 0.99);
    m.def(
        "pearson_correlation",
        [](const DoubleArray& x, const DoubleArray& y) { return pearson_correlation(to_vector(x), to_vector(y)); },
        py::arg("x"), py::arg("y"));
    m.def(
        "_roundtrip_json",
        [](const DoubleArray& p, double dt, bool rician_check) {
            RoundtripOptions opt;
            opt.dt_s = dt;
            opt.rician_check = rician_check;
            return to_json(roundtrip(to_matrix<double>(p), opt)).dump();
        },
        py::arg("powers"), py::arg("dt_s") = 0.6, py::arg("rician_check") = true);

    // configuration and files
    m.def(
        "_normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"));
    m.def(
        "_validate_json", [](const std::string& text) { return to_json(run_validation(parse_config(text))).dump(); },
        py::arg("config_text"));
    m.def(
        "read_grid", [](const std::string& path) { return read_grid(path).grid; }, py::arg("path"));
}
