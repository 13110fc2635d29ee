#include "clutter/config.hpp"

#include "clutter/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace clutter {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::map<std::string, std::set<std::string>, std::less<>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>, std::less<>> keys{
        {"geometry", {"kind", "d1_m", "d2_m", "w_m", "carrier_frequency_hz", "gamma_sq"}},
        {"params", {"preset", "sigma_p_db", "mu_p_db", "sigma_k_db", "mu_k_db", "rho_pk"}},
        {"grid", {"azimuth_start_deg", "n_azimuth", "d_phi_deg", "n_time", "dt_s"}},
        {"run", {"seed", "antenna_pattern"}},
        {"tolerances", {"sigma_p_db", "mu_k_db", "sigma_k_db", "rho_pk"}},
    };
    return keys;
}

// Typed, field-named access to one section.
class SectionReader {
public:
    SectionReader(const KeyValueDocument& doc, std::string name) : name_(std::move(name))
    {
        if (auto it = doc.sections.find(name_); it != doc.sections.end())
            section_ = &it->second;
    }

    bool present() const noexcept { return section_ != nullptr; }
    int line() const noexcept { return section_ ? section_->line : 0; }
    std::string field(std::string_view key) const { return name_ + "." + std::string(key); }

    const KeyValueDocument::Entry* find(std::string_view key) const
    {
        if (!section_)
            return nullptr;
        auto it = section_->entries.find(std::string(key));
        return it == section_->entries.end() ? nullptr : &it->second;
    }

    bool has(std::string_view key) const { return find(key) != nullptr; }

    const KeyValueDocument::Entry& require(std::string_view key) const
    {
        const auto* e = find(key);
        if (!e)
            throw ConfigError(field(key), "required key is missing", line());
        return *e;
    }

    std::optional<std::string> text(std::string_view key) const
    {
        const auto* e = find(key);
        return e ? std::optional<std::string>(e->value) : std::nullopt;
    }

    std::optional<double> number(std::string_view key) const
    {
        const auto* e = find(key);
        if (!e)
            return std::nullopt;
        const auto v = parse_double(e->value);
        if (!v || !std::isfinite(*v))
            throw ConfigError(field(key), "expected a number, got '" + e->value + "'", e->line);
        return v;
    }

    std::optional<std::int64_t> integer(std::string_view key) const
    {
        const auto* e = find(key);
        if (!e)
            return std::nullopt;
        const auto v = parse_int(e->value);
        if (!v)
            throw ConfigError(field(key), "expected an integer, got '" + e->value + "'", e->line);
        return v;
    }

    std::optional<std::uint64_t> unsigned_integer(std::string_view key) const
    {
        const auto* e = find(key);
        if (!e)
            return std::nullopt;
        const auto v = parse_uint(e->value);
        if (!v)
            throw ConfigError(field(key), "expected an unsigned 64-bit integer, got '" + e->value + "'", e->line);
        return v;
    }

    double positive(std::string_view key) const
    {
        require(key);
        const double v = *number(key);
        if (!(v > 0.0))
            throw ConfigError(field(key), "must be > 0, got " + find(key)->value, find(key)->line);
        return v;
    }

    void forbid(std::string_view key, const std::string& why) const
    {
        if (const auto* e = find(key))
            throw ConfigError(field(key), why, e->line);
    }

    int line_of(std::string_view key) const
    {
        const auto* e = find(key);
        return e ? e->line : line();
    }

private:
    std::string name_;
    const KeyValueDocument::Section* section_ = nullptr;
};

int to_count(const SectionReader& s, std::string_view key, std::int64_t v)
{
    if (v < 1 || v > 100'000'000)
        throw ConfigError(s.field(key), "must be a positive count, got " + std::to_string(v), s.line_of(key));
    return static_cast<int>(v);
}

ScenarioGeometry read_geometry(const SectionReader& s, Reflectivity& refl)
{
    if (!s.present())
        throw ConfigError("geometry", "required section is missing");
    const std::string kind = s.require("kind").value;
    const double f = s.positive("carrier_frequency_hz");

    ScenarioGeometry g;
    if (kind == "midstreet") {
        s.forbid("w_m", "only intersection geometries take w_m");
        g = {Midstreet{s.positive("d1_m"), s.positive("d2_m")}, f};
    } else if (kind == "intersection") {
        s.forbid("d1_m", "only midstreet geometries take d1_m");
        s.forbid("d2_m", "only midstreet geometries take d2_m");
        g = {Intersection{s.positive("w_m")}, f};
    } else {
        throw ConfigError(s.field("kind"), "expected 'midstreet' or 'intersection', got '" + kind + "'",
                          s.line_of("kind"));
    }

    if (auto gamma = s.number("gamma_sq")) {
        refl.gamma_sq = *gamma;
        if (!(*gamma > 0.0 && *gamma <= 1.0))
            throw ConfigError(s.field("gamma_sq"), "must lie in (0, 1]", s.line_of("gamma_sq"));
    }
    return g;
}

void read_params(const SectionReader& s, ScenarioConfig& cfg)
{
    if (!s.present())
        throw ConfigError("params", "required section is missing");
    static constexpr std::string_view fields[] = {"sigma_p_db", "mu_p_db", "sigma_k_db", "mu_k_db", "rho_pk"};

    if (auto name = s.text("preset")) {
        const auto env = environment_from_string(*name);
        if (!env)
            throw ConfigError(s.field("preset"),
                              "unknown preset '" + *name + "' (expected microcellular_8m or street_level_1m)",
                              s.line_of("preset"));
        for (auto f : fields)
            s.forbid(f, "cannot be combined with a preset");
        cfg.preset = env;
        cfg.params = table1_preset(*env);
        return;
    }

    auto required = [&](std::string_view key) {
        s.require(key);
        return *s.number(key);
    };
    cfg.params.sigma_p_db = required("sigma_p_db");
    cfg.params.mu_p_db = required("mu_p_db");
    cfg.params.sigma_k_db = required("sigma_k_db");
    cfg.params.mu_k_db = required("mu_k_db");
    cfg.params.rho_pk = required("rho_pk");
    if (cfg.params.sigma_p_db < 0.0)
        throw ConfigError(s.field("sigma_p_db"), "must be >= 0", s.line_of("sigma_p_db"));
    if (cfg.params.sigma_k_db < 0.0)
        throw ConfigError(s.field("sigma_k_db"), "must be >= 0", s.line_of("sigma_k_db"));
    if (cfg.params.rho_pk < -1.0 || cfg.params.rho_pk > 1.0)
        throw ConfigError(s.field("rho_pk"), "must lie in [-1, 1]", s.line_of("rho_pk"));
}

GridSpec read_grid(const SectionReader& s, ScenarioKind kind)
{
    if (!s.present())
        throw ConfigError("grid", "required section is missing");
    s.require("n_time");
    const int n_time = to_count(s, "n_time", *s.integer("n_time"));
    GridSpec spec = GridSpec::default_for(kind, n_time);
    if (auto v = s.number("d_phi_deg"))
        spec.d_phi_deg = *v;
    if (auto v = s.number("dt_s"))
        spec.dt_s = *v;
    if (auto v = s.number("azimuth_start_deg"))
        spec.azimuth_start_deg = *v;
    if (auto v = s.integer("n_azimuth"))
        spec.n_azimuth = to_count(s, "n_azimuth", *v);
    else if (s.has("d_phi_deg"))
        spec.n_azimuth = std::max(1, static_cast<int>(std::floor(spec.n_azimuth / spec.d_phi_deg + 1e-9)));

    try {
        spec.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError("grid", e.what(), s.line());
    }
    return spec;
}

Tolerances read_tolerances(const SectionReader& s, Tolerances tol)
{
    auto read = [&](std::string_view key, double& dst) {
        if (auto v = s.number(key)) {
            if (*v < 0.0)
                throw ConfigError(s.field(key), "tolerance must be >= 0", s.line_of(key));
            dst = *v;
        }
    };
    read("sigma_p_db", tol.sigma_p_db);
    read("mu_k_db", tol.mu_k_db);
    read("sigma_k_db", tol.sigma_k_db);
    read("rho_pk", tol.rho_pk);
    return tol;
}

} // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

std::string format_double17(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return {buf, res.ptr};
}

std::optional<double> parse_double(std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view text)
{
    text = trim(text);
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_uint(std::string_view text)
{
    text = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        return std::nullopt;
    return v;
}

KeyValueDocument KeyValueDocument::parse(std::string_view text)
{
    KeyValueDocument doc;
    Section* current = nullptr;
    std::string current_name;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';')
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("", "malformed section header '" + std::string(line) + "'", line_no);
            current_name = std::string(trim(line.substr(1, line.size() - 2)));
            if (current_name.empty())
                throw ConfigError("", "empty section name", line_no);
            auto [it, inserted] = doc.sections.try_emplace(current_name);
            if (!inserted)
                throw ConfigError(current_name, "duplicate section", line_no);
            it->second.line = line_no;
            current = &it->second;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", "expected 'key = value', got '" + std::string(line) + "'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("", "missing key before '='", line_no);
        if (!current)
            throw ConfigError(key, "key outside of any [section]", line_no);
        if (!current->entries.try_emplace(key, Entry{value, line_no}).second)
            throw ConfigError(current_name + "." + key, "duplicate key", line_no);
    }
    return doc;
}

Tolerances Tolerances::defaults_for(std::optional<Environment> preset)
{
    Tolerances tol;
    if (preset == Environment::StreetLevel1m)
        tol.rho_pk = 0.15;
    return tol;
}

Tolerances ScenarioConfig::effective_tolerances() const
{
    return tolerances.value_or(Tolerances::defaults_for(preset));
}

ScenarioConfig parse_config(std::string_view text)
{
    const KeyValueDocument doc = KeyValueDocument::parse(text);

    const auto& known = known_keys();
    for (const auto& [name, section] : doc.sections) {
        auto it = known.find(name);
        if (it == known.end())
            throw ConfigError(name, "unknown section", section.line);
        for (const auto& [key, entry] : section.entries)
            if (!it->second.contains(key))
                throw ConfigError(name + "." + key, "unknown key", entry.line);
    }

    ScenarioConfig cfg;
    cfg.geometry = read_geometry(SectionReader(doc, "geometry"), cfg.reflectivity);
    read_params(SectionReader(doc, "params"), cfg);
    cfg.grid = read_grid(SectionReader(doc, "grid"), cfg.geometry.kind());

    const SectionReader run(doc, "run");
    if (auto seed = run.unsigned_integer("seed"))
        cfg.seed = *seed;
    if (auto path = run.text("antenna_pattern")) {
        if (path->empty())
            throw ConfigError(run.field("antenna_pattern"), "path is empty", run.line_of("antenna_pattern"));
        cfg.antenna_pattern = *path;
    }

    const SectionReader tol(doc, "tolerances");
    if (tol.present())
        cfg.tolerances = read_tolerances(tol, Tolerances::defaults_for(cfg.preset));
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& config)
{
    std::ostringstream out;
    out << "[geometry]\n";
    out << "kind = " << to_string(config.geometry.kind()) << "\n";
    if (const auto* m = std::get_if<Midstreet>(&config.geometry.layout)) {
        out << "d1_m = " << format_double(m->d1_m) << "\n";
        out << "d2_m = " << format_double(m->d2_m) << "\n";
    } else {
        out << "w_m = " << format_double(std::get<Intersection>(config.geometry.layout).w_m) << "\n";
    }
    out << "carrier_frequency_hz = " << format_double(config.geometry.carrier_frequency_hz) << "\n";
    out << "gamma_sq = " << format_double(config.reflectivity.gamma_sq) << "\n";

    out << "\n[params]\n";
    if (config.preset) {
        out << "preset = " << to_string(*config.preset) << "\n";
    } else {
        out << "sigma_p_db = " << format_double(config.params.sigma_p_db) << "\n";
        out << "mu_p_db = " << format_double(config.params.mu_p_db) << "\n";
        out << "sigma_k_db = " << format_double(config.params.sigma_k_db) << "\n";
        out << "mu_k_db = " << format_double(config.params.mu_k_db) << "\n";
        out << "rho_pk = " << format_double(config.params.rho_pk) << "\n";
    }

    out << "\n[grid]\n";
    out << "azimuth_start_deg = " << format_double(config.grid.azimuth_start_deg) << "\n";
    out << "n_azimuth = " << config.grid.n_azimuth << "\n";
    out << "d_phi_deg = " << format_double(config.grid.d_phi_deg) << "\n";
    out << "n_time = " << config.grid.n_time << "\n";
    out << "dt_s = " << format_double(config.grid.dt_s) << "\n";

    out << "\n[run]\n";
    out << "seed = " << config.seed << "\n";
    if (config.antenna_pattern)
        out << "antenna_pattern = " << *config.antenna_pattern << "\n";

    if (config.tolerances) {
        out << "\n[tolerances]\n";
        out << "sigma_p_db = " << format_double(config.tolerances->sigma_p_db) << "\n";
        out << "mu_k_db = " << format_double(config.tolerances->mu_k_db) << "\n";
        out << "sigma_k_db = " << format_double(config.tolerances->sigma_k_db) << "\n";
        out << "rho_pk = " << format_double(config.tolerances->rho_pk) << "\n";
    }
    return out.str();
}

} // namespace clutter
