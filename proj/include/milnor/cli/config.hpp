#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "milnor/certfind.hpp"
#include "milnor/cubeoracle.hpp"
#include "milnor/error.hpp"
#include "milnor/morsify.hpp"

namespace milnor::cli {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string hint = {}) : Error("cli", what, std::move(hint)) {}
};

/// Raw sectioned key = value content, sorted for deterministic echoing.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

struct GermBlock {
    std::string polynomial;
    std::vector<std::string> variables;
};

struct FamilyBlock {
    std::optional<std::string> deformation;  // explicit F(x, t)
    std::vector<std::string> parameters{"t"};
    bool generic = false;
    std::uint64_t seed = 1;
    std::optional<std::string> ade;
    std::optional<int> mu;
};

struct ScalesBlock {
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<std::vector<std::string>> t;  // exact rationals as text
    bool transversality = false;
    int budget = 20;
    CertConfig tolerances;
};

struct OracleBlock {
    bool enabled = false;
    std::size_t resolution = 0;  // 0: dimension default
    CubeMode mode = CubeMode::Center;
    std::optional<std::pair<double, double>> window_plus;
    std::optional<std::pair<double, double>> window_minus;
    bool betti = false;
    std::size_t betti_resolution = 0;  // 0: dimension default
};

struct OutputBlock {
    std::optional<std::string> report;
    std::optional<std::string> svg;
};

struct RunConfig {
    GermBlock germ;
    FamilyBlock family;
    ScalesBlock scales;
    OracleBlock oracle;
    OutputBlock output;
    ConfigSections raw;
};

namespace detail {

inline std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(s[i])) ++i;
    return s.substr(i);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos == v.size() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
}

inline long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

inline std::pair<double, double> to_window(const std::string& key, const std::string& v) {
    auto parts = split_list(v);
    if (parts.size() != 2) throw ConfigError("key '" + key + "': expected 'a, b'");
    double a = to_double(key, parts[0]), b = to_double(key, parts[1]);
    if (!(a < b)) throw ConfigError("key '" + key + "': window must satisfy a < b");
    return {a, b};
}

inline CubeMode to_mode(const std::string& v) {
    if (v == "center") return CubeMode::Center;
    if (v == "interval") return CubeMode::Interval;
    throw ConfigError("oracle mode must be 'center' or 'interval', got '" + v + "'");
}

}  // namespace detail

/// Parses the sectioned text format. Lines are `key = value`; `#` and `;`
/// start comments; section headers are `[name]`.
inline ConfigSections parse_sections(const std::string& text) {
    static const std::map<std::string, std::vector<std::string>> allowed = {
        {"germ", {"polynomial", "variables"}},
        {"family", {"deformation", "parameters", "generic", "seed", "ade", "mu"}},
        {"scales", {"delta", "eta", "t", "transversality", "budget", "exclusion_floor", "newton_width", "value_sep",
                    "max_depth", "retry_budget"}},
        {"oracle", {"enabled", "resolution", "mode", "window_plus", "window_minus", "betti", "betti_resolution"}},
        {"output", {"report", "svg"}},
    };
    ConfigSections out;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!allowed.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
            if (out.count(section)) throw ConfigError(where + "duplicate section [" + section + "]");
            out[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        if (section.empty()) throw ConfigError(where + "key outside of any section");
        std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
        const auto& keys = allowed.at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        if (out[section].count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        out[section][key] = value;
    }
    return out;
}

inline RunConfig build_config(const ConfigSections& s) {
    RunConfig c;
    c.raw = s;
    auto get = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
        auto it = s.find(sec);
        if (it == s.end()) return std::nullopt;
        auto kt = it->second.find(key);
        if (kt == it->second.end()) return std::nullopt;
        return kt->second;
    };

    auto poly = get("germ", "polynomial");
    if (!poly || poly->empty()) throw ConfigError("[germ] polynomial is required");
    c.germ.polynomial = *poly;
    c.germ.variables = detail::split_list(get("germ", "variables").value_or(""));
    if (c.germ.variables.empty()) throw ConfigError("[germ] variables is required");

    auto& f = c.family;
    f.deformation = get("family", "deformation");
    if (auto v = get("family", "generic")) f.generic = detail::to_bool("generic", *v);
    if (f.deformation && f.generic)
        throw ConfigError("[family] specify either 'deformation' or 'generic = true', not both");
    if (!f.deformation && !f.generic) throw ConfigError("[family] needs 'deformation' or 'generic = true'");
    if (auto v = get("family", "parameters")) f.parameters = detail::split_list(*v);
    if (auto v = get("family", "seed")) {
        long long seed = detail::to_int("seed", *v);
        if (seed < 0) throw ConfigError("seed must be nonnegative");
        f.seed = static_cast<std::uint64_t>(seed);
    }
    f.ade = get("family", "ade");
    if (auto v = get("family", "mu")) f.mu = static_cast<int>(detail::to_int("mu", *v));

    auto& sc = c.scales;
    if (auto v = get("scales", "delta")) sc.delta = detail::to_double("delta", *v);
    if (auto v = get("scales", "eta")) sc.eta = detail::to_double("eta", *v);
    if (auto v = get("scales", "t")) sc.t = detail::split_list(*v);
    if (auto v = get("scales", "transversality")) sc.transversality = detail::to_bool("transversality", *v);
    if (auto v = get("scales", "budget")) sc.budget = static_cast<int>(detail::to_int("budget", *v));
    if (auto v = get("scales", "exclusion_floor")) sc.tolerances.exclusion_floor = detail::to_double("exclusion_floor", *v);
    if (auto v = get("scales", "newton_width")) sc.tolerances.newton_width = detail::to_double("newton_width", *v);
    if (auto v = get("scales", "value_sep")) sc.tolerances.value_sep = detail::to_double("value_sep", *v);
    if (auto v = get("scales", "max_depth")) sc.tolerances.max_depth = static_cast<int>(detail::to_int("max_depth", *v));
    if (auto v = get("scales", "retry_budget"))
        sc.tolerances.retry_budget = static_cast<int>(detail::to_int("retry_budget", *v));

    auto& o = c.oracle;
    if (auto v = get("oracle", "enabled")) o.enabled = detail::to_bool("enabled", *v);
    if (auto v = get("oracle", "resolution")) o.resolution = static_cast<std::size_t>(detail::to_int("resolution", *v));
    if (auto v = get("oracle", "mode")) o.mode = detail::to_mode(*v);
    if (auto v = get("oracle", "window_plus")) o.window_plus = detail::to_window("window_plus", *v);
    if (auto v = get("oracle", "window_minus")) o.window_minus = detail::to_window("window_minus", *v);
    if (auto v = get("oracle", "betti")) o.betti = detail::to_bool("betti", *v);
    if (auto v = get("oracle", "betti_resolution"))
        o.betti_resolution = static_cast<std::size_t>(detail::to_int("betti_resolution", *v));

    c.output.report = get("output", "report");
    c.output.svg = get("output", "svg");
    return c;
}

inline RunConfig parse_config(const std::string& text) { return build_config(parse_sections(text)); }

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Parses an exact rational such as "1/10", "-3" or "0.25".
inline Rational parse_rational(const std::string& text) {
    std::string s = detail::trim(text);
    if (s.empty()) throw ConfigError("empty rational");
    auto dot = s.find('.');
    if (dot != std::string::npos && s.find_first_of("eE/") == std::string::npos) {
        // Decimal literal: exact value digits / 10^k.
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t k = s.size() - dot - 1;
        mpz_class num, den;
        if (num.set_str(digits, 10) != 0) throw ConfigError("malformed rational '" + text + "'");
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(k));
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ConfigError("malformed rational '" + text + "'");
    q.canonicalize();
    return q;
}

}  // namespace milnor::cli
