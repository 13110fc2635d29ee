#include "clutter/grid_io.hpp"

#include "clutter/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace clutter {

namespace {

constexpr std::string_view csv_header = "azimuth_deg,time_s,h_re,h_im,power_db";
constexpr double p0_tolerance = 1e-9;

std::string header_tag()
{
    return "# " + std::string(grid_format_tag) + " " + std::to_string(grid_format_version);
}

// Splits on ',' without trimming; empty trailing fields are kept.
std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string_view strip_cr(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return line;
}

// Iterates lines with 1-based numbering.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line)
    {
        if (pos_ > text_.size() || (pos_ == text_.size() && line_no_ > 0))
            return false;
        const auto eol = text_.find('\n', pos_);
        line = strip_cr(text_.substr(pos_, eol == std::string_view::npos ? text_.npos : eol - pos_));
        pos_ = eol == std::string_view::npos ? text_.size() + 1 : eol + 1;
        ++line_no_;
        return true;
    }

    int line_no() const noexcept { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
};

IoError row_error(int line, const std::string& message)
{
    return IoError("line " + std::to_string(line) + ": " + message);
}

double field_number(std::string_view field, int line, const char* name)
{
    const auto v = parse_double(field);
    if (!v)
        throw row_error(line, std::string("cannot parse ") + name + " '" + std::string(field) + "'");
    return *v;
}

bool near(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

void emit_grid(std::ostream& out, const ScenarioConfig& config, const ChannelGrid& grid)
{
    out << header_tag() << "\n";
    out << "# p0 = " << format_double17(grid.p0) << "\n";
    std::istringstream cfg(serialize_config(config));
    for (std::string line; std::getline(cfg, line);)
        out << (line.empty() ? "#" : "# " + line) << "\n";
    out << csv_header << "\n";

    std::string row;
    for (std::size_t a = 0; a < grid.h.rows(); ++a) {
        const std::string az = format_double17(grid.spec.azimuth_deg(a));
        for (std::size_t t = 0; t < grid.h.cols(); ++t) {
            const auto h = grid.h(a, t);
            row.clear();
            row += az;
            row += ',';
            row += format_double17(grid.spec.time_s(t));
            row += ',';
            row += format_double17(h.real());
            row += ',';
            row += format_double17(h.imag());
            row += ',';
            row += format_double17(power_to_db(std::norm(h)));
            row += '\n';
            out << row;
        }
    }
}

ScenarioConfig config_of(const ScenarioConfig& base, const ChannelGrid& grid)
{
    ScenarioConfig cfg = base;
    cfg.geometry = grid.geometry;
    cfg.reflectivity = grid.reflectivity;
    cfg.params = grid.params;
    cfg.grid = grid.spec;
    cfg.seed = grid.seed;
    return cfg;
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("error reading '" + path + "'");
    return ss.str();
}

namespace {

template <typename Emit>
void atomic_write(const std::string& path, Emit&& emit)
{
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write '" + tmp + "'");
        emit(out);
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw IoError("error writing '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename onto '" + path + "': " + ec.message());
    }
}

} // namespace

void write_file_atomic(const std::string& path, std::string_view content)
{
    atomic_write(path, [&](std::ostream& out) { out.write(content.data(), static_cast<std::streamsize>(content.size())); });
}

std::string format_grid(const ScenarioConfig& config, const ChannelGrid& grid)
{
    std::ostringstream out;
    emit_grid(out, config_of(config, grid), grid);
    return out.str();
}

void write_grid(const std::string& path, const ScenarioConfig& config, const ChannelGrid& grid)
{
    atomic_write(path, [&](std::ostream& out) { emit_grid(out, config_of(config, grid), grid); });
}

GridFile parse_grid(std::string_view text)
{
    LineReader lines(text);
    std::string_view line;
    if (!lines.next(line) || line != header_tag())
        throw IoError("line 1: not a " + std::string(grid_format_tag) + " v" + std::to_string(grid_format_version) +
                      " file");

    std::optional<double> p0;
    std::string cfg_text;
    bool have_columns = false;
    while (lines.next(line)) {
        if (line == csv_header) {
            have_columns = true;
            break;
        }
        if (line.empty() || line.front() != '#')
            throw row_error(lines.line_no(), "expected a '#' header line or the column header");
        std::string_view body = line.substr(1);
        if (!body.empty() && body.front() == ' ')
            body.remove_prefix(1);
        if (body.starts_with("p0 =")) {
            p0 = parse_double(body.substr(4));
            if (!p0)
                throw row_error(lines.line_no(), "cannot parse p0");
            cfg_text += "\n"; // keep config line numbers aligned with the file
            continue;
        }
        cfg_text += body;
        cfg_text += '\n';
    }
    if (!have_columns)
        throw IoError("missing column header '" + std::string(csv_header) + "'");
    if (!p0)
        throw IoError("header lacks p0");

    GridFile file;
    try {
        file.config = parse_config("\n" + cfg_text); // header tag occupies line 1
    } catch (const Error& e) {
        throw IoError(std::string("grid header: ") + e.what());
    }

    ChannelGrid& grid = file.grid;
    grid.spec = file.config.grid;
    grid.geometry = file.config.geometry;
    grid.reflectivity = file.config.reflectivity;
    grid.params = file.config.params;
    grid.seed = file.config.seed;
    grid.p0 = *p0;
    const double expected_p0 = mean_power(grid.geometry, grid.reflectivity);
    if (std::abs(grid.p0 - expected_p0) > p0_tolerance * expected_p0)
        throw IoError("header p0 " + format_double17(grid.p0) + " disagrees with the geometry value " +
                      format_double17(expected_p0));

    const auto rows = static_cast<std::size_t>(grid.spec.n_azimuth);
    const auto cols = static_cast<std::size_t>(grid.spec.n_time);
    grid.h = ComplexMatrix(rows, cols);
    std::size_t count = 0;
    while (lines.next(line)) {
        if (line.empty())
            continue;
        if (count >= rows * cols)
            throw row_error(lines.line_no(), "more rows than n_azimuth * n_time = " + std::to_string(rows * cols));
        const auto fields = split_fields(line);
        if (fields.size() != 5)
            throw row_error(lines.line_no(), "expected 5 fields, got " + std::to_string(fields.size()));
        const std::size_t a = count / cols;
        const std::size_t t = count % cols;
        const double az = field_number(fields[0], lines.line_no(), "azimuth_deg");
        const double ts = field_number(fields[1], lines.line_no(), "time_s");
        if (!near(az, grid.spec.azimuth_deg(a)) || !near(ts, grid.spec.time_s(t)))
            throw row_error(lines.line_no(), "cell (" + std::string(fields[0]) + ", " + std::string(fields[1]) +
                                                 ") out of azimuth-major order");
        const double re = field_number(fields[2], lines.line_no(), "h_re");
        const double im = field_number(fields[3], lines.line_no(), "h_im");
        field_number(fields[4], lines.line_no(), "power_db");
        if (!std::isfinite(re) || !std::isfinite(im))
            throw row_error(lines.line_no(), "non-finite channel value");
        grid.h(a, t) = {re, im};
        ++count;
    }
    if (count != rows * cols)
        throw IoError("grid has " + std::to_string(count) + " rows, expected n_azimuth * n_time = " +
                      std::to_string(rows * cols));
    return file;
}

GridFile read_grid(const std::string& path)
{
    return parse_grid(read_text_file(path));
}

PowerInput read_power_input(const std::string& path)
{
    const std::string text = read_text_file(path);
    if (text.empty())
        throw IoError("'" + path + "' is empty");
    if (text.starts_with(header_tag())) {
        GridFile file = parse_grid(text);
        return {power_grid(file.grid), file.grid.spec, file.grid.p0};
    }

    const std::string meta_path = path + ".meta";
    if (!std::filesystem::exists(meta_path))
        throw IoError("'" + path + "' is not a grid file and has no sidecar '" + meta_path + "'");
    KeyValueDocument meta;
    try {
        meta = KeyValueDocument::parse(read_text_file(meta_path));
    } catch (const ConfigError& e) {
        throw IoError(meta_path + ": " + e.what());
    }
    for (const auto& [name, section] : meta.sections) {
        if (name != "grid")
            throw IoError(meta_path + ": unknown section [" + name + "]");
        for (const auto& [key, entry] : section.entries)
            if (key != "dt_s" && key != "d_phi_deg" && key != "azimuth_start_deg" && key != "units")
                throw IoError(meta_path + ": unknown key grid." + key + " (line " + std::to_string(entry.line) + ")");
    }
    GridSpec spec;
    bool db_units = false;
    if (auto it = meta.sections.find("grid"); it != meta.sections.end()) {
        auto number = [&](const char* key, double& dst) {
            if (auto e = it->second.entries.find(key); e != it->second.entries.end()) {
                const auto v = parse_double(e->second.value);
                if (!v || !std::isfinite(*v))
                    throw IoError(meta_path + ": grid." + key + " is not a number (line " +
                                  std::to_string(e->second.line) + ")");
                dst = *v;
            }
        };
        number("dt_s", spec.dt_s);
        number("d_phi_deg", spec.d_phi_deg);
        number("azimuth_start_deg", spec.azimuth_start_deg);
        if (auto e = it->second.entries.find("units"); e != it->second.entries.end()) {
            if (e->second.value != "linear" && e->second.value != "db")
                throw IoError(meta_path + ": grid.units must be 'linear' or 'db'");
            db_units = e->second.value == "db";
        }
    }
    if (!(spec.dt_s > 0.0) || !(spec.d_phi_deg > 0.0))
        throw IoError(meta_path + ": dt_s and d_phi_deg must be > 0");

    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    LineReader lines(text);
    std::string_view line;
    while (lines.next(line)) {
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = split_fields(line);
        if (rows == 0)
            cols = fields.size();
        else if (fields.size() != cols)
            throw row_error(lines.line_no(), "expected " + std::to_string(cols) + " columns, got " +
                                                 std::to_string(fields.size()));
        for (auto f : fields) {
            double v = field_number(f, lines.line_no(), "power");
            if (db_units)
                v = std::pow(10.0, v / 10.0);
            if (!std::isfinite(v) || v < 0.0)
                throw row_error(lines.line_no(), "power must be finite and nonnegative");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0)
        throw IoError("'" + path + "' holds no power rows");
    spec.n_azimuth = static_cast<int>(rows);
    spec.n_time = static_cast<int>(cols);
    return {PowerMatrix(rows, cols, std::move(values)), spec, std::nullopt};
}

AntennaPattern parse_antenna_pattern(std::string_view text)
{
    std::vector<std::pair<double, std::complex<double>>> entries;
    LineReader lines(text);
    std::string_view line;
    while (lines.next(line)) {
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2 && fields.size() != 3)
            throw row_error(lines.line_no(), "expected 'azimuth_deg,re[,im]'");
        const double az = field_number(fields[0], lines.line_no(), "azimuth_deg");
        const double re = field_number(fields[1], lines.line_no(), "re");
        const double im = fields.size() == 3 ? field_number(fields[2], lines.line_no(), "im") : 0.0;
        entries.emplace_back(az, std::complex<double>(re, im));
    }
    if (entries.size() < 2)
        throw IoError("antenna pattern needs at least two bins");

    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const double d_phi = entries[1].first - entries[0].first;
    if (!(d_phi > 0.0))
        throw IoError("antenna pattern azimuths must be distinct");
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (!near(entries[i].first - entries[i - 1].first, d_phi))
            throw IoError("antenna pattern azimuths are not uniformly spaced");

    const double n_real = 360.0 / d_phi;
    const auto n = static_cast<long>(std::lround(n_real));
    if (!near(n_real, static_cast<double>(n)) || static_cast<long>(entries.size()) != n)
        throw IoError("antenna pattern must cover 360 deg exactly once");

    AntennaPattern pattern;
    pattern.d_phi_deg = d_phi;
    pattern.field_gain.assign(static_cast<std::size_t>(n), {});
    for (const auto& [az, g] : entries) {
        const double idx = az / d_phi;
        if (!near(idx, std::round(idx)))
            throw IoError("antenna pattern lattice must include 0 deg");
        long k = std::lround(idx) % n;
        if (k < 0)
            k += n;
        pattern.field_gain[static_cast<std::size_t>(k)] = g;
    }
    return pattern;
}

AntennaPattern read_antenna_pattern(const std::string& path)
{
    return parse_antenna_pattern(read_text_file(path));
}

} // namespace clutter
