#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path tmp_dir()
{
    fs::path dir(CLUTTER_TEST_TMPDIR);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

Run cli(const std::string& args)
{
    static int counter = 0;
    const auto out = tmp_dir() / ("stdout_" + std::to_string(counter) + ".txt");
    const auto err = tmp_dir() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd =
        std::string("\"") + CLUTTERCHAN_EXE + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string config_text(const std::string& grid, const std::string& geometry_extra = "",
                        const std::string& tail = "")
{
    return "[geometry]\nkind = midstreet\nd1_m = 12.5\nd2_m = 12.5\ncarrier_frequency_hz = 140e9\n" + geometry_extra +
           "\n[params]\npreset = microcellular_8m\n\n[grid]\n" + grid + "\n[run]\nseed = 3\n" + tail;
}

fs::path write_config(const std::string& name, const std::string& text)
{
    const auto p = tmp_dir() / name;
    write_text(p, text);
    return p;
}

std::string q(const fs::path& p)
{
    return "\"" + p.string() + "\"";
}

} // namespace

TEST_CASE("geometry reports the closed-form power", "[cli]")
{
    const auto cfg = write_config("geom.ini", config_text("n_time = 10\n"));
    const auto r = cli("geometry --config " + q(cfg));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("9.29") != std::string::npos);
    CHECK(r.out.find("-100.32 dB") != std::string::npos);

    const auto j = cli("geometry --json --config " + q(cfg));
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["p0"].get<double>() == Catch::Approx(9.293e-11).epsilon(1e-4));
    CHECK(doc["relative_error"].get<double>() < 1e-6);
}

TEST_CASE("config errors exit 2 and name the field", "[cli]")
{
    const auto bad = write_config("neg.ini", "[geometry]\nkind = midstreet\nd1_m = -1\nd2_m = 12.5\n"
                                             "carrier_frequency_hz = 140e9\n[params]\npreset = microcellular_8m\n"
                                             "[grid]\nn_time = 10\n");
    const auto r = cli("geometry --config " + q(bad));
    CHECK(r.code == 2);
    CHECK(r.err.find("d1_m") != std::string::npos);

    const auto zero = write_config("zero.ini", config_text("n_time = 0\n"));
    const auto z = cli("synthesize --config " + q(zero) + " --out " + q(tmp_dir() / "never.csv"));
    CHECK(z.code == 2);
    CHECK(z.err.find("n_time") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp_dir() / "never.csv"));

    CHECK(cli("synthesize --config " + q(zero)).code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("").code == 2);
}

TEST_CASE("validity floors exit 3", "[cli]")
{
    const auto fine = write_config("fine.ini", config_text("n_time = 10\nd_phi_deg = 0.5\n"));
    const auto r = cli("synthesize --config " + q(fine) + " --out " + q(tmp_dir() / "fine.csv"));
    CHECK(r.code == 3);
    CHECK(r.err.find("1 deg") != std::string::npos);

    const auto fast = write_config("fast.ini", config_text("n_time = 10\ndt_s = 0.1\n"));
    CHECK(cli("synthesize --config " + q(fast) + " --out " + q(tmp_dir() / "fast.csv")).code == 3);

    std::string narrow;
    for (int k = 0; k < 360; ++k)
        narrow += std::to_string(k) + "," + (k == 0 ? "1" : k == 1 || k == 359 ? "0.1" : "0") + "\n";
    write_text(tmp_dir() / "narrow.csv", narrow);
    const auto beam = write_config("narrow.ini", config_text("n_time = 10\n", "", "antenna_pattern = narrow.csv\n"));
    CHECK(cli("synthesize --config " + q(beam) + " --out " + q(tmp_dir() / "narrow_grid.csv")).code == 3);
}

TEST_CASE("I/O errors exit 4", "[cli]")
{
    CHECK(cli("geometry --config " + q(tmp_dir() / "does_not_exist.ini")).code == 4);

    const auto cfg = write_config("io.ini", config_text("n_time = 10\n"));
    CHECK(cli("synthesize --config " + q(cfg) + " --out " + q(tmp_dir() / "no_such_dir" / "g.csv")).code == 4);

    write_text(tmp_dir() / "empty.csv", "");
    CHECK(cli("estimate " + q(tmp_dir() / "empty.csv")).code == 4);

    write_text(tmp_dir() / "junk.csv", "# clutterchan-grid 1\nnot a header\n");
    const auto junk = cli("estimate " + q(tmp_dir() / "junk.csv"));
    CHECK(junk.code == 4);
    CHECK(junk.err.find("line 2") != std::string::npos);

    // Valid grid, but too short for the estimator.
    const auto small_grid = tmp_dir() / "small_grid.csv";
    REQUIRE(cli("synthesize --config " + q(cfg) + " --out " + q(small_grid)).code == 0);
    const auto small = cli("estimate " + q(small_grid));
    CHECK(small.code == 4);
    CHECK(small.err.find("time steps") != std::string::npos);

    const auto missing_pattern =
        write_config("nopat.ini", config_text("n_time = 10\n", "", "antenna_pattern = nowhere.csv\n"));
    CHECK(cli("synthesize --config " + q(missing_pattern) + " --out " + q(tmp_dir() / "x.csv")).code == 4);
}

TEST_CASE("synthesize writes the full lattice deterministically", "[cli]")
{
    const auto cfg = write_config("full.ini", config_text("n_time = 1000\n"));
    const auto a = tmp_dir() / "full_a.csv";
    const auto b = tmp_dir() / "full_b.csv";
    REQUIRE(cli("synthesize --config " + q(cfg) + " --out " + q(a)).code == 0);
    REQUIRE(cli("synthesize --config " + q(cfg) + " --out " + q(b)).code == 0);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));

    const auto header = text.find("azimuth_deg,time_s,h_re,h_im,power_db\n");
    REQUIRE(header != std::string::npos);
    std::size_t rows = 0;
    for (std::size_t i = header; i < text.size(); ++i)
        rows += text[i] == '\n';
    CHECK(rows - 1 == 150'000);

    const auto c = tmp_dir() / "full_c.csv";
    REQUIRE(cli("synthesize --config " + q(cfg) + " --out " + q(c) + " --seed 4").code == 0);
    CHECK(slurp(c) != text);
}

TEST_CASE("estimate reads grids and bare CSVs", "[cli]")
{
    const auto cfg = write_config("est.ini", config_text("n_time = 200\n"));
    const auto grid = tmp_dir() / "est_grid.csv";
    REQUIRE(cli("synthesize --config " + q(cfg) + " --out " + q(grid)).code == 0);

    const auto report = tmp_dir() / "est_report.json";
    const auto r = cli("estimate " + q(grid) + " --json --out " + q(report));
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["n_azimuth"] == 150);
    CHECK(doc["n_time"] == 200);
    CHECK(doc.contains("sigma_p_hat"));
    CHECK(nlohmann::json::parse(slurp(report)) == doc);

    const auto again = tmp_dir() / "est_report2.json";
    REQUIRE(cli("estimate " + q(grid) + " --out " + q(again)).code == 0);
    CHECK(slurp(again) == slurp(report));

    const auto text = cli("estimate " + q(grid));
    REQUIRE(text.code == 0);
    CHECK(text.out.find("azimuth deviation") != std::string::npos);

    std::string bare;
    for (int a = 0; a < 40; ++a) {
        for (int t = 0; t < 120; ++t)
            bare += (t ? "," : "") + std::to_string(1.0 + 0.5 * ((a * 7 + t * 13) % 5));
        bare += "\n";
    }
    write_text(tmp_dir() / "bare.csv", bare);
    write_text(tmp_dir() / "bare.csv.meta", "[grid]\ndt_s = 0.6\nd_phi_deg = 1\n");
    const auto b = cli("estimate --json " + q(tmp_dir() / "bare.csv"));
    REQUIRE(b.code == 0);
    CHECK(nlohmann::json::parse(b.out)["n_azimuth"] == 40);
}

TEST_CASE("validate passes both presets and fails on zero tolerance", "[cli]")
{
    const std::string src = CLUTTER_SOURCE_DIR;
    const auto micro = cli("validate --config " + q(fs::path(src) / "configs" / "microcellular.ini"));
    INFO(micro.out << micro.err);
    CHECK(micro.code == 0);
    CHECK(micro.out.find("validation passed") != std::string::npos);

    const auto street = cli("validate --json --config " + q(fs::path(src) / "configs" / "street_level.ini"));
    INFO(street.out << street.err);
    CHECK(street.code == 0);
    CHECK(nlohmann::json::parse(street.out)["passed"] == true);

    const auto long_street = write_config(
        "street_long.ini", "[geometry]\nkind = intersection\nw_m = 9\ncarrier_frequency_hz = 140e9\n"
                           "[params]\npreset = street_level_1m\n[grid]\nn_time = 10000\n[run]\nseed = 11\n");
    const auto ls = cli("validate --config " + q(long_street));
    INFO(ls.out << ls.err);
    CHECK(ls.code == 0);
    CHECK(ls.out.find("validation passed") != std::string::npos);

    const auto strict = write_config(
        "strict.ini", config_text("n_time = 500\n", "",
                                  "\n[tolerances]\nsigma_p_db = 0\nmu_k_db = 0\nsigma_k_db = 0\nrho_pk = 0\n"));
    const auto s = cli("validate --config " + q(strict));
    CHECK(s.code == 5);
    CHECK(s.out.find("FAIL") != std::string::npos);
}

TEST_CASE("antenna pattern path is relative to the config", "[cli]")
{
    const std::string src = CLUTTER_SOURCE_DIR;
    const auto a = tmp_dir() / "beam_a.csv";
    const auto b = tmp_dir() / "beam_b.csv";
    REQUIRE(cli("synthesize --config " + q(fs::path(src) / "configs" / "beam.ini") + " --out " + q(a)).code == 0);
    REQUIRE(cli("synthesize --config " + q(fs::path(src) / "configs" / "beam.ini") + " --out " + q(b)).code == 0);
    CHECK(slurp(a) == slurp(b));
}
