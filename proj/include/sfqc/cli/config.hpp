// config.hpp — run configuration: flat `section.key = value` documents.
//
//   # comment
//   [circuit]
//   alpha = 0.7, ej_over_ec = 48
//   bath.T_mK = 25
//   sweep.values = [0.45, 0.5, 0.55]     (or sweep.start / sweep.stop / sweep.points)
//
// A bare key inherits the most recent [section]. Several assignments may share a line
// when separated by commas outside brackets.
#pragma once

#include <sfqc/dressed_rates.hpp>
#include <sfqc/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfqc::cli {

struct SweepSpec {
    std::string axis;                  // empty: command default
    std::vector<double> values;        // explicit list
    std::optional<double> start, stop; // with points: linear grid
    std::optional<int> points;
    std::string window = "01";         // 01 | 02 | both

    bool has_grid() const { return !values.empty() || points.has_value(); }
    std::vector<double> grid() const {
        if (!values.empty()) return values;
        if (!points) return {};
        const int n = *points;
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] = n == 1 ? *start : *start + (*stop - *start) * i / (n - 1);
        return g;
    }
    bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
    // circuit
    double alpha = 0.7;
    double ej_over_ec = 48.0;
    double ej_GHz = units::default_ej_GHz;
    double f = 0.5;
    int n_p = 16;
    int n_m = 16;
    // bath
    double beta = 1e-4;
    double cutoff_multiplier = 100.0;
    double T_mK = 25.0;
    // drive
    double rabi_MHz = 0.0;
    double detuning_MHz = 0.0;
    int nu = 1;
    // sweep / output
    SweepSpec sweep;
    std::string out_dir;
    std::string prefix;
    std::string format = "csv";

    bool operator==(const RunConfig&) const = default;

    double ej_scale() const { return units::ej_scale_from_GHz(ej_GHz); }

    OperatingPoint operating_point() const {
        OperatingPoint op;
        op.circuit.alpha = alpha;
        op.circuit.ej_over_ec = ej_over_ec;
        op.circuit.ej_scale = ej_scale();
        op.circuit.f = f;
        op.trunc.n_p = n_p;
        op.trunc.n_m = n_m;
        op.beta = beta;
        op.cutoff_multiplier = cutoff_multiplier;
        op.temperature = T_mK * 1e-3;
        op.drive.omega_d_mag = units::from_MHz(rabi_MHz, ej_scale());
        op.drive.omega_d_phase = nu > 0 ? 0.0 : units::two_pi / 2;
        op.drive.delta = units::from_MHz(detuning_MHz, ej_scale());
        return op;
    }
};

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes{"f", "T_mK", "rabi_MHz", "probe_MHz"};
    return axes;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view v, const std::string& key, int line) {
    v = trim(v);
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        throw ConfigError(key, line, "cannot parse number '" + std::string(v) + "'");
    return out;
}

inline int parse_int(std::string_view v, const std::string& key, int line) {
    v = trim(v);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    int out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigError(key, line, "cannot parse integer '" + std::string(v) + "'");
    return out;
}

inline std::string parse_string(std::string_view v) {
    v = trim(v);
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        v = v.substr(1, v.size() - 2);
    return std::string(v);
}

inline std::vector<double> parse_list(std::string_view v, const std::string& key, int line) {
    v = trim(v);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError(key, line, "expected a bracketed list like [a, b, c]");
    v = trim(v.substr(1, v.size() - 2));
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(parse_double(v.substr(0, comma), key, line));
        if (comma == std::string_view::npos) break;
        v = trim(v.substr(comma + 1));
        if (v.empty()) throw ConfigError(key, line, "trailing comma in list");
    }
    return out;
}

// Split on commas at bracket depth zero.
inline std::vector<std::string_view> split_assignments(std::string_view s) {
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[') ++depth;
        else if (s[i] == ']') --depth;
        else if (s[i] == ',' && depth == 0) {
            parts.push_back(s.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    parts.push_back(s.substr(begin));
    return parts;
}

} // namespace detail

// Throws ConfigError naming the key (and line when known).
inline void validate(const RunConfig& c, const std::map<std::string, int>& lines = {}) {
    auto fail = [&](const std::string& key, const std::string& msg) {
        const auto it = lines.find(key);
        throw ConfigError(key, it == lines.end() ? 0 : it->second, msg);
    };
    if (!(c.alpha > 0.5 && c.alpha < 1.0)) fail("circuit.alpha", "must satisfy 0.5 < alpha < 1");
    if (!(c.ej_over_ec > 0.0)) fail("circuit.ej_over_ec", "must be positive");
    if (!(c.ej_GHz > 0.0)) fail("circuit.ej_GHz", "must be positive");
    if (!(c.f >= 0.0 && c.f <= 1.0)) fail("circuit.f", "must lie in [0, 1]");
    if (c.n_p < 4) fail("circuit.n_p", "must be at least 4");
    if (c.n_m < 4) fail("circuit.n_m", "must be at least 4");
    if (!(c.beta > 0.0)) fail("bath.beta", "must be positive");
    if (!(c.cutoff_multiplier > 0.0)) fail("bath.cutoff_multiplier", "must be positive");
    if (!(c.T_mK >= 0.0)) fail("bath.T_mK", "must be non-negative");
    if (!(c.rabi_MHz >= 0.0)) fail("drive.rabi_MHz", "must be non-negative");
    if (c.nu != 1 && c.nu != -1) fail("drive.nu", "must be +1 or -1");
    const auto& s = c.sweep;
    if (!s.axis.empty() && std::find(sweep_axes().begin(), sweep_axes().end(), s.axis) == sweep_axes().end())
        fail("sweep.axis", "unknown axis '" + s.axis + "'");
    if (s.window != "01" && s.window != "02" && s.window != "both") fail("sweep.window", "must be 01, 02 or both");
    if (!s.values.empty() && (s.points || s.start || s.stop))
        fail("sweep.values", "give either values or start/stop/points, not both");
    if (s.points || s.start || s.stop) {
        if (!s.points || !s.start || !s.stop) fail("sweep.points", "start, stop and points must be given together");
        if (*s.points < 1) fail("sweep.points", "must be at least 1");
        if (*s.points > 1 && !(*s.stop > *s.start)) fail("sweep.stop", "grid must be increasing (stop > start)");
    }
    for (std::size_t i = 1; i < s.values.size(); ++i)
        if (!(s.values[i] > s.values[i - 1])) fail("sweep.values", "grid must be strictly increasing");
    if (c.format != "csv") fail("output.format", "only csv is supported");
}

inline RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::map<std::string, int> lines;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.find('=') == std::string_view::npos) {
            if (line.back() != ']') throw ConfigError("", line_no, "malformed section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (section != "circuit" && section != "bath" && section != "drive" && section != "sweep" &&
                section != "output")
                throw ConfigError(section, line_no, "unknown section");
            continue;
        }
        for (auto assignment : detail::split_assignments(line)) {
            assignment = detail::trim(assignment);
            const auto eq = assignment.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(std::string(assignment), line_no, "expected key = value");
            std::string key(detail::trim(assignment.substr(0, eq)));
            const std::string_view value = detail::trim(assignment.substr(eq + 1));
            if (key.find('.') == std::string::npos) {
                if (section.empty()) throw ConfigError(key, line_no, "key needs a section prefix");
                key = section + "." + key;
            }
            if (value.empty()) throw ConfigError(key, line_no, "missing value");
            lines[key] = line_no;
            auto num = [&] { return detail::parse_double(value, key, line_no); };
            auto integer = [&] { return detail::parse_int(value, key, line_no); };
            if (key == "circuit.alpha") c.alpha = num();
            else if (key == "circuit.ej_over_ec") c.ej_over_ec = num();
            else if (key == "circuit.ej_GHz") c.ej_GHz = num();
            else if (key == "circuit.f") c.f = num();
            else if (key == "circuit.n_p") c.n_p = integer();
            else if (key == "circuit.n_m") c.n_m = integer();
            else if (key == "bath.beta") c.beta = num();
            else if (key == "bath.cutoff_multiplier") c.cutoff_multiplier = num();
            else if (key == "bath.T_mK") c.T_mK = num();
            else if (key == "drive.rabi_MHz") c.rabi_MHz = num();
            else if (key == "drive.detuning_MHz") c.detuning_MHz = num();
            else if (key == "drive.nu") c.nu = integer();
            else if (key == "sweep.axis") c.sweep.axis = detail::parse_string(value);
            else if (key == "sweep.values") c.sweep.values = detail::parse_list(value, key, line_no);
            else if (key == "sweep.start") c.sweep.start = num();
            else if (key == "sweep.stop") c.sweep.stop = num();
            else if (key == "sweep.points") c.sweep.points = integer();
            else if (key == "sweep.window") c.sweep.window = detail::parse_string(value);
            else if (key == "output.dir") c.out_dir = detail::parse_string(value);
            else if (key == "output.prefix") c.prefix = detail::parse_string(value);
            else if (key == "output.format") c.format = detail::parse_string(value);
            else throw ConfigError(key, line_no, "unknown key");
        }
    }
    validate(c, lines);
    return c;
}

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Inverse of parse_config: parse_config(to_config_text(c)) == c.
inline std::string to_config_text(const RunConfig& c) {
    std::string s;
    auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + " = " + v + "\n"; };
    auto num = [&](const char* k, double v) { kv(k, format_number(v)); };
    s += "[circuit]\n";
    num("alpha", c.alpha);
    num("ej_over_ec", c.ej_over_ec);
    num("ej_GHz", c.ej_GHz);
    num("f", c.f);
    kv("n_p", std::to_string(c.n_p));
    kv("n_m", std::to_string(c.n_m));
    s += "[bath]\n";
    num("beta", c.beta);
    num("cutoff_multiplier", c.cutoff_multiplier);
    num("T_mK", c.T_mK);
    s += "[drive]\n";
    num("rabi_MHz", c.rabi_MHz);
    num("detuning_MHz", c.detuning_MHz);
    kv("nu", std::to_string(c.nu));
    s += "[sweep]\n";
    if (!c.sweep.axis.empty()) kv("axis", c.sweep.axis);
    if (!c.sweep.values.empty()) {
        std::string list = "[";
        for (std::size_t i = 0; i < c.sweep.values.size(); ++i)
            list += (i ? ", " : "") + format_number(c.sweep.values[i]);
        kv("values", list + "]");
    }
    if (c.sweep.start) num("start", *c.sweep.start);
    if (c.sweep.stop) num("stop", *c.sweep.stop);
    if (c.sweep.points) kv("points", std::to_string(*c.sweep.points));
    kv("window", c.sweep.window);
    s += "[output]\n";
    if (!c.out_dir.empty()) kv("dir", c.out_dir);
    if (!c.prefix.empty()) kv("prefix", c.prefix);
    kv("format", c.format);
    return s;
}

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json sweep = {{"window", c.sweep.window}};
    if (!c.sweep.axis.empty()) sweep["axis"] = c.sweep.axis;
    if (!c.sweep.values.empty()) sweep["values"] = c.sweep.values;
    if (c.sweep.start) sweep["start"] = *c.sweep.start;
    if (c.sweep.stop) sweep["stop"] = *c.sweep.stop;
    if (c.sweep.points) sweep["points"] = *c.sweep.points;
    return {
        {"circuit",
         {{"alpha", c.alpha}, {"ej_over_ec", c.ej_over_ec}, {"ej_GHz", c.ej_GHz}, {"f", c.f}, {"n_p", c.n_p},
          {"n_m", c.n_m}}},
        {"bath", {{"beta", c.beta}, {"cutoff_multiplier", c.cutoff_multiplier}, {"T_mK", c.T_mK}}},
        {"drive", {{"rabi_MHz", c.rabi_MHz}, {"detuning_MHz", c.detuning_MHz}, {"nu", c.nu}}},
        {"sweep", sweep},
    };
}

} // namespace sfqc::cli
