#include <catch_amalgamated.hpp>

#include "clutter/config.hpp"
#include "clutter/error.hpp"
#include "clutter/grid_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

using namespace clutter;
using Catch::Approx;

namespace {

constexpr const char* micro_text = R"([geometry]
kind = midstreet
d1_m = 12.5
d2_m = 12.5
carrier_frequency_hz = 140e9

[params]
preset = microcellular_8m

[grid]
n_time = 200

[run]
seed = 7
)";

std::filesystem::path scratch_dir()
{
    auto dir = std::filesystem::temp_directory_path() / "clutter_config_io";
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

// ConfigError whose message names `field`.
void check_config_error(const std::string& text, const std::string& field)
{
    INFO(text);
    try {
        parse_config(text);
        FAIL("expected ConfigError for " << field);
    } catch (const ConfigError& e) {
        CHECK(e.field() == field);
    }
}

} // namespace

TEST_CASE("key-value documents", "[config]")
{
    const auto doc = KeyValueDocument::parse("# top\n[a]\nx = 1\n; note\n  y=two words  \n\n[b]\nz = 3\n");
    REQUIRE(doc.sections.size() == 2);
    CHECK(doc.sections.at("a").entries.at("x").value == "1");
    CHECK(doc.sections.at("a").entries.at("y").value == "two words");
    CHECK(doc.sections.at("a").entries.at("y").line == 5);
    CHECK(doc.sections.at("b").line == 7);

    CHECK_THROWS_AS(KeyValueDocument::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueDocument::parse("[a]\n[a]\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueDocument::parse("x = 1\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueDocument::parse("[a]\njunk\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueDocument::parse("[a\n"), ConfigError);
}

TEST_CASE("number parsing is strict", "[config]")
{
    CHECK(parse_double("140e9") == 140e9);
    CHECK(parse_double("-0.25") == -0.25);
    CHECK_FALSE(parse_double("1.0x").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK_FALSE(parse_double("nan").has_value());
    CHECK(parse_int("-12") == -12);
    CHECK_FALSE(parse_int("1.5").has_value());
    CHECK(parse_uint("18446744073709551615") == std::numeric_limits<std::uint64_t>::max());
    CHECK_FALSE(parse_uint("-1").has_value());

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<double>(rng() % 40) - 20.0);
        CHECK(parse_double(format_double(x)) == x);
        CHECK(parse_double(format_double17(x)) == x);
    }
}

TEST_CASE("preset config parses with layout defaults", "[config]")
{
    const auto cfg = parse_config(micro_text);
    CHECK(cfg.geometry.kind() == ScenarioKind::Midstreet);
    CHECK(cfg.preset == Environment::Microcellular8m);
    CHECK(cfg.params == table1_preset(Environment::Microcellular8m));
    CHECK(cfg.grid == GridSpec{-75.0, 150, 1.0, 200, 0.6});
    CHECK(cfg.seed == 7);
    CHECK(cfg.reflectivity.gamma_sq == 1.0);
    CHECK_FALSE(cfg.antenna_pattern.has_value());
    CHECK(cfg.effective_tolerances() == Tolerances{});
}

TEST_CASE("intersection config and tolerances", "[config]")
{
    const auto cfg = parse_config(R"([geometry]
kind = intersection
w_m = 9
carrier_frequency_hz = 140e9
gamma_sq = 0.5

[params]
preset = street_level_1m

[grid]
n_time = 100

[tolerances]
rho_pk = 0.2
)");
    CHECK(cfg.geometry.kind() == ScenarioKind::Intersection);
    CHECK(cfg.reflectivity.gamma_sq == 0.5);
    CHECK(cfg.grid.azimuth_start_deg == -45.0);
    CHECK(cfg.grid.n_azimuth == 90);
    CHECK(cfg.seed == 1);
    const auto tol = cfg.effective_tolerances();
    CHECK(tol.rho_pk == 0.2);
    CHECK(tol.sigma_p_db == 0.7);
    CHECK(Tolerances::defaults_for(Environment::StreetLevel1m).rho_pk == 0.15);
}

TEST_CASE("config serialization round trips", "[config][property]")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    for (int i = 0; i < 200; ++i) {
        ScenarioConfig cfg;
        const double f = u(rng) * 1e9;
        cfg.geometry = i % 2 ? ScenarioGeometry::midstreet(u(rng), u(rng), f) : ScenarioGeometry::intersection(u(rng), f);
        cfg.reflectivity.gamma_sq = std::min(1.0, u(rng) / 50.0);
        if (i % 3 == 0) {
            cfg.preset = i % 2 ? Environment::StreetLevel1m : Environment::Microcellular8m;
            cfg.params = table1_preset(*cfg.preset);
        } else {
            cfg.params = {u(rng) / 5.0, -u(rng) / 10.0, u(rng) / 5.0, u(rng) / 3.0, u(rng) / 50.0 - 0.5};
        }
        cfg.grid = {-static_cast<double>(rng() % 90), 1 + static_cast<int>(rng() % 180), 1.0 + static_cast<double>(rng() % 2) * 0.5,
                    1 + static_cast<int>(rng() % 1000), 0.6 + u(rng) / 10.0};
        cfg.seed = rng();
        if (i % 4 == 0)
            cfg.antenna_pattern = "beams/pattern " + std::to_string(i) + ".csv";
        if (i % 5 == 0)
            cfg.tolerances = Tolerances{u(rng), u(rng), u(rng), u(rng) / 50.0};

        const std::string text = serialize_config(cfg);
        INFO(text);
        const auto back = parse_config(text);
        CHECK(back == cfg);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("strict config errors name the field", "[config]")
{
    const std::string grid = "\n[grid]\nn_time = 10\n";
    const std::string params = "\n[params]\npreset = microcellular_8m\n";
    const std::string geom = "[geometry]\nkind = midstreet\nd1_m = 12.5\nd2_m = 12.5\ncarrier_frequency_hz = 140e9\n";

    check_config_error("[geometry]\nkind = midstreet\nd1_m = -1\nd2_m = 12.5\ncarrier_frequency_hz = 140e9\n" + params + grid,
                       "geometry.d1_m");
    check_config_error(geom + "d3_m = 4\n" + params + grid, "geometry.d3_m");
    check_config_error(geom + params + grid + "\n[extra]\nx = 1\n", "extra");
    check_config_error(geom + params, "grid");
    check_config_error(geom + grid, "params");
    check_config_error(params + grid, "geometry");
    check_config_error(geom + "\n[params]\npreset = rural\n" + grid, "params.preset");
    check_config_error(geom + "\n[params]\npreset = microcellular_8m\nrho_pk = 0.5\n" + grid, "params.rho_pk");
    check_config_error(geom + "\n[params]\nsigma_p_db = 1\nmu_p_db = 0\nsigma_k_db = 1\nmu_k_db = 0\n" + grid,
                       "params.rho_pk");
    check_config_error(geom + "\n[params]\nsigma_p_db = 1\nmu_p_db = 0\nsigma_k_db = 1\nmu_k_db = 0\nrho_pk = 2\n" + grid,
                       "params.rho_pk");
    check_config_error(geom + params + "\n[grid]\nn_time = 0\n", "grid.n_time");
    check_config_error(geom + params + "\n[grid]\nn_time = ten\n", "grid.n_time");
    check_config_error(geom + params + grid + "\n[run]\nseed = -3\n", "run.seed");
    check_config_error(geom + "gamma_sq = 0\n" + params + grid, "geometry.gamma_sq");
    check_config_error("[geometry]\nkind = corner\ncarrier_frequency_hz = 1e9\n" + params + grid, "geometry.kind");
    check_config_error(geom + "w_m = 3\n" + params + grid, "geometry.w_m");

    try {
        parse_config(geom + "d3_m = 4\n" + params + grid);
    } catch (const ConfigError& e) {
        CHECK(e.line() == 6);
        CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
}

TEST_CASE("grid steps below the model floor are validity errors", "[config]")
{
    const std::string base = "[geometry]\nkind = midstreet\nd1_m = 1\nd2_m = 1\ncarrier_frequency_hz = 1e9\n"
                             "[params]\npreset = microcellular_8m\n";
    CHECK_THROWS_AS(parse_config(base + "[grid]\nn_time = 10\nd_phi_deg = 0.5\n"), ModelValidityError);
    CHECK_THROWS_AS(parse_config(base + "[grid]\nn_time = 10\ndt_s = 0.1\n"), ModelValidityError);
    CHECK_THROWS_AS(parse_config(base + "[grid]\nn_time = 10\nn_azimuth = 400\n"), ConfigError);
    const auto coarse = parse_config(base + "[grid]\nn_time = 10\nd_phi_deg = 2\n");
    CHECK(coarse.grid.n_azimuth == 75);
}

TEST_CASE("grid files round trip bit-exactly", "[io]")
{
    auto cfg = parse_config(micro_text);
    cfg.grid.n_time = 12;
    cfg.grid.n_azimuth = 20;
    const auto grid = synthesize(cfg.geometry, cfg.params, cfg.grid, cfg.seed, cfg.reflectivity);

    const std::string text = format_grid(cfg, grid);
    CHECK(text.starts_with("# clutterchan-grid 1\n"));
    const auto file = parse_grid(text);
    CHECK(file.config == cfg);
    CHECK(file.grid.h == grid.h);
    CHECK(file.grid.p0 == grid.p0);
    CHECK(file.grid.spec == grid.spec);
    CHECK(format_grid(file.config, file.grid) == text);

    const auto path = scratch_dir() / "roundtrip.csv";
    write_grid(path.string(), cfg, grid);
    CHECK(read_text_file(path.string()) == text);
    const auto input = read_power_input(path.string());
    CHECK(input.powers == power_grid(grid));
    CHECK(input.p0 == grid.p0);
    CHECK(input.spec == grid.spec);
}

TEST_CASE("malformed grid files report the row", "[io]")
{
    auto cfg = parse_config(micro_text);
    cfg.grid.n_time = 3;
    cfg.grid.n_azimuth = 2;
    const auto grid = synthesize(cfg.geometry, cfg.params, cfg.grid, cfg.seed);
    const std::string text = format_grid(cfg, grid);

    auto expect_io = [](const std::string& bad, const std::string& needle) {
        try {
            parse_grid(bad);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_io("hello\n", "line 1");
    expect_io(text.substr(0, text.rfind('\n', text.size() - 2) + 1), "rows");
    expect_io(text + "-75,0,1,1,0\n", "more rows");

    std::string garbled = text;
    const auto last = garbled.rfind('\n', garbled.size() - 2);
    garbled.replace(last + 1, std::string::npos, "-74,1.2,abc,0,0\n");
    expect_io(garbled, "line");

    std::string reordered = text;
    const auto header_end = reordered.find("power_db\n") + 9;
    const auto first_row_end = reordered.find('\n', header_end);
    reordered.replace(header_end, first_row_end - header_end, "-74,0,0,0,0");
    expect_io(reordered, "order");

    std::string wrong_p0 = text;
    const auto p0_pos = wrong_p0.find("# p0 = ");
    wrong_p0.replace(p0_pos, wrong_p0.find('\n', p0_pos) - p0_pos, "# p0 = 1");
    expect_io(wrong_p0, "p0");
}

TEST_CASE("bare power CSV with a sidecar", "[io]")
{
    const auto dir = scratch_dir();
    const auto csv = dir / "bare.csv";
    write_text(csv, "1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(read_power_input((dir / "missing.csv").string()), IoError);

    std::filesystem::remove(csv.string() + ".meta");
    CHECK_THROWS_AS(read_power_input(csv.string()), IoError);

    write_text(csv.string() + ".meta", "[grid]\ndt_s = 1.2\nd_phi_deg = 2\nazimuth_start_deg = -10\n");
    auto in = read_power_input(csv.string());
    CHECK(in.powers.rows() == 2);
    CHECK(in.powers.cols() == 3);
    CHECK(in.powers(1, 2) == 6.0);
    CHECK(in.spec.dt_s == 1.2);
    CHECK(in.spec.d_phi_deg == 2.0);
    CHECK(in.spec.azimuth_start_deg == -10.0);
    CHECK_FALSE(in.p0.has_value());

    write_text(csv.string() + ".meta", "[grid]\ndt_s = 0.6\nd_phi_deg = 1\nunits = db\n");
    write_text(csv, "0,10\n-10,20\n");
    in = read_power_input(csv.string());
    CHECK(in.powers(0, 0) == Approx(1.0));
    CHECK(in.powers(0, 1) == Approx(10.0));
    CHECK(in.powers(1, 0) == Approx(0.1));

    write_text(csv.string() + ".meta", "[grid]\ndt_s = 0.6\nd_phi_deg = 1\n");
    write_text(csv, "1,2\n3\n");
    CHECK_THROWS_AS(read_power_input(csv.string()), IoError);
    write_text(csv, "1,-2\n");
    CHECK_THROWS_AS(read_power_input(csv.string()), IoError);
    write_text(csv, "");
    CHECK_THROWS_AS(read_power_input(csv.string()), IoError);

    write_text(csv, "1,2\n");
    write_text(csv.string() + ".meta", "[grid]\ndt_s = 0.6\nd_phi_deg = 1\ncolour = red\n");
    CHECK_THROWS_AS(read_power_input(csv.string()), IoError);
}

TEST_CASE("antenna pattern files", "[io]")
{
    std::string text = "# azimuth,re,im\n";
    for (int k = -180; k < 180; ++k)
        text += std::to_string(k) + "," + (k == 0 ? "1" : k == 1 || k == -1 ? "0.8" : "0") + ",0\n";
    const auto p = parse_antenna_pattern(text);
    CHECK(p.d_phi_deg == 1.0);
    REQUIRE(p.field_gain.size() == 360);
    CHECK(p.field_gain[0] == 1.0);
    CHECK(p.field_gain[1] == 0.8);
    CHECK(p.field_gain[359] == 0.8);
    CHECK(p.field_gain[180] == 0.0);

    std::string coarse;
    for (int k = 0; k < 180; ++k)
        coarse += std::to_string(2 * k) + "," + (k == 0 ? "1" : "0") + "\n";
    CHECK(parse_antenna_pattern(coarse).field_gain.size() == 180);
    CHECK(parse_antenna_pattern(coarse).d_phi_deg == 2.0);

    CHECK_THROWS_AS(parse_antenna_pattern("0,1\n"), IoError);
    CHECK_THROWS_AS(parse_antenna_pattern("0,1\n1,0\n3,0\n"), IoError);
    CHECK_THROWS_AS(parse_antenna_pattern("0,1\n1,0\n"), IoError);
    CHECK_THROWS_AS(parse_antenna_pattern("0,1,2,3\n"), IoError);

    std::string shifted;
    for (int k = 0; k < 360; ++k)
        shifted += std::to_string(k + 0.5) + ",1\n";
    CHECK_THROWS_AS(parse_antenna_pattern(shifted), IoError);
}
