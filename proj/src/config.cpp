#include "ks1d/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "ks1d/errors.hpp"

namespace ks1d {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0.0;
    const auto* begin = v.data();
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
    const double d = parse_double(key, value);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e12)
        throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
    return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = lower(trim(value));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

struct RawSection {
    std::map<std::string, std::string> entries;  // key -> value
};

void check_keys(const std::string& section, const RawSection& raw,
                std::initializer_list<const char*> valid) {
    for (const auto& [key, value] : raw.entries) {
        if (std::find_if(valid.begin(), valid.end(),
                         [&](const char* v) { return key == v; }) == valid.end()) {
            std::string list;
            for (const char* v : valid) {
                if (!list.empty()) list += ", ";
                list += v;
            }
            throw ConfigError("[" + section + "] unknown key '" + key + "'; valid keys: " + list);
        }
    }
}

std::optional<std::string> get(const RawSection& raw, const char* key) {
    const auto it = raw.entries.find(key);
    if (it == raw.entries.end()) return std::nullopt;
    return it->second;
}

}  // namespace

DeviceConfig parse_config(const std::string& text) {
    std::map<std::string, RawSection> sections;
    RawSection header;

    std::istringstream in(text);
    std::string line;
    std::string current;  // empty = header region
    bool in_header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            in_header = false;
            sections[current];  // create
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        RawSection& target = in_header ? header : sections[current];
        if (!target.entries.emplace(key, value).second)
            throw ConfigError((in_header ? "header" : "[" + current + "]") + " duplicate key '" +
                              key + "'");
    }

    DeviceConfig cfg;

    // header: unit system
    check_keys("header", header, {"units", "hbar", "m_perp", "eps0"});
    const std::string units = lower(get(header, "units").value_or("scaled"));
    bool physical = false;
    if (units == "physical")
        physical = true;
    else if (units != "scaled")
        throw ConfigError("units: expected 'scaled' or 'physical', got '" + units + "'");
    if (physical) {
        if (!get(header, "hbar") || !get(header, "m_perp"))
            throw ConfigError("units = physical requires hbar and m_perp in the header");
        const double hbar = parse_double("hbar", *get(header, "hbar"));
        const double m_perp = parse_double("m_perp", *get(header, "m_perp"));
        if (!(hbar > 0.0) || !(m_perp > 0.0))
            throw ConfigError("hbar and m_perp must be positive");
        cfg.stat_scale = m_perp / (2.0 * std::numbers::pi * hbar * hbar);
    } else {
        for (const char* k : {"hbar", "m_perp", "eps0"})
            if (get(header, k))
                throw ConfigError(std::string(k) + ": only meaningful with units = physical");
    }

    const auto known = [&](const std::string& name) {
        return name == "boundary" || name == "particles" || name == "statistics" || name == "xc" ||
               name == "grid" || name == "scf" || name == "output" ||
               name.rfind("device.layer.", 0) == 0;
    };
    for (const auto& [name, raw] : sections)
        if (!known(name))
            throw ConfigError("unknown section [" + name +
                              "]; valid sections: [device.layer.k] [boundary] [particles] "
                              "[statistics] [xc] [grid] [scf] [output]");

    // layers
    std::map<std::size_t, Layer> layers;
    for (const auto& [name, raw] : sections) {
        if (name.rfind("device.layer.", 0) != 0) continue;
        const std::string index_text = name.substr(std::string("device.layer.").size());
        std::size_t index = 0;
        const auto res =
            std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
        if (res.ec != std::errc{} || res.ptr != index_text.data() + index_text.size() || index < 1)
            throw ConfigError("[" + name + "]: layer index must be a positive integer");
        check_keys(name, raw, {"thickness", "m", "eps", "delta_e", "doping"});
        Layer layer;
        if (const auto v = get(raw, "thickness")) layer.thickness = parse_double(name + ".thickness", *v);
        if (const auto v = get(raw, "m")) layer.mass = parse_double(name + ".m", *v);
        if (const auto v = get(raw, "eps")) layer.eps = parse_double(name + ".eps", *v);
        if (const auto v = get(raw, "delta_e")) layer.band_offset = parse_double(name + ".delta_e", *v);
        if (const auto v = get(raw, "doping")) layer.doping = parse_double(name + ".doping", *v);
        layers[index] = layer;
    }
    if (layers.empty()) throw ConfigError("config: at least one [device.layer.k] section required");
    for (std::size_t i = 1; i <= layers.size(); ++i)
        if (layers.find(i) == layers.end())
            throw ConfigError("config: layer indices must be contiguous from 1 (missing " +
                              std::to_string(i) + ")");
    for (std::size_t i = 1; i <= layers.size(); ++i) cfg.stack.layers.push_back(layers[i]);

    if (const auto it = sections.find("boundary"); it != sections.end()) {
        check_keys("boundary", it->second, {"phi0", "phi1"});
        if (const auto v = get(it->second, "phi0")) cfg.phi0 = parse_double("boundary.phi0", *v);
        if (const auto v = get(it->second, "phi1")) cfg.phi1 = parse_double("boundary.phi1", *v);
    }
    if (const auto it = sections.find("particles"); it != sections.end()) {
        check_keys("particles", it->second, {"N", "q"});
        if (const auto v = get(it->second, "N")) cfg.particles = parse_double("particles.N", *v);
        if (const auto v = get(it->second, "q")) cfg.charge = parse_double("particles.q", *v);
    }
    if (!(cfg.particles >= 1.0)) throw ConfigError("particles.N: must be >= 1");

    if (const auto it = sections.find("statistics"); it != sections.end()) {
        check_keys("statistics", it->second, {"type", "beta", "kT", "scale"});
        const std::string type = lower(get(it->second, "type").value_or("zerot"));
        const auto beta = get(it->second, "beta");
        const auto kt = get(it->second, "kT");
        if (beta && kt)
            throw ConfigError("statistics: give either beta or kT, not both");
        if (type == "zerot" || type == "zero_t" || type == "zero") {
            cfg.zero_temperature = true;
            if (beta || kt)
                throw ConfigError("statistics: beta/kT conflict with type = zeroT");
        } else if (type == "fermi") {
            cfg.zero_temperature = false;
            if (beta)
                cfg.beta = parse_double("statistics.beta", *beta);
            else if (kt) {
                const double v = parse_double("statistics.kT", *kt);
                if (!(v > 0.0)) throw ConfigError("statistics.kT: must be positive");
                cfg.beta = 1.0 / v;
            } else {
                throw ConfigError("statistics: type = fermi requires beta or kT");
            }
            if (!(cfg.beta > 0.0)) throw ConfigError("statistics.beta: must be positive");
        } else {
            throw ConfigError("statistics.type: expected zeroT or fermi, got '" + type + "'");
        }
        if (const auto v = get(it->second, "scale")) {
            if (physical)
                throw ConfigError("statistics.scale: conflicts with units = physical "
                                  "(the scale is derived from m_perp and hbar)");
            cfg.stat_scale = parse_double("statistics.scale", *v);
            if (!(cfg.stat_scale > 0.0)) throw ConfigError("statistics.scale: must be positive");
        }
    }

    if (const auto it = sections.find("xc"); it != sections.end()) {
        check_keys("xc", it->second, {"type", "C", "alpha"});
        const std::string type = lower(get(it->second, "type").value_or("none"));
        if (type == "none") {
            if (get(it->second, "C") || get(it->second, "alpha"))
                throw ConfigError("xc: C/alpha conflict with type = none");
            cfg.xc = XcModel::none();
        } else if (type == "xalpha") {
            const auto c = get(it->second, "C");
            const auto alpha = get(it->second, "alpha");
            if (!c || !alpha) throw ConfigError("xc: type = xalpha requires C and alpha");
            try {
                cfg.xc = XcModel::xalpha(parse_double("xc.C", *c), parse_double("xc.alpha", *alpha));
            } catch (const DomainError& e) {
                throw ConfigError(std::string("xc: ") + e.what());
            }
        } else {
            throw ConfigError("xc.type: expected none or xalpha, got '" + type + "'");
        }
    }

    if (const auto it = sections.find("grid"); it != sections.end()) {
        check_keys("grid", it->second, {"n"});
        if (const auto v = get(it->second, "n")) cfg.grid_n = parse_count("grid.n", *v);
    }
    if (cfg.grid_n < 2) throw ConfigError("grid.n: must be >= 2");

    if (const auto it = sections.find("scf"); it != sections.end()) {
        check_keys("scf", it->second, {"tau", "tol_l1", "max_iter", "tail_tol", "adaptive_damping"});
        if (const auto v = get(it->second, "tau")) cfg.damping = parse_double("scf.tau", *v);
        if (const auto v = get(it->second, "tol_l1")) cfg.tol_l1 = parse_double("scf.tol_l1", *v);
        if (const auto v = get(it->second, "max_iter")) cfg.max_iter = parse_count("scf.max_iter", *v);
        if (const auto v = get(it->second, "tail_tol")) cfg.tail_tol = parse_double("scf.tail_tol", *v);
        if (const auto v = get(it->second, "adaptive_damping"))
            cfg.adaptive_damping = parse_bool("scf.adaptive_damping", *v);
    }

    if (const auto it = sections.find("output"); it != sections.end()) {
        check_keys("output", it->second, {"profile", "summary"});
        if (const auto v = get(it->second, "profile")) cfg.profile_name = *v;
        if (const auto v = get(it->second, "summary")) cfg.summary_name = *v;
    }

    // cross-field validation with key-level messages
    try {
        cfg.stack.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("device: ") + e.what() +
                          " (check the thickness/m/eps keys)");
    }
    try {
        cfg.scf().validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("scf: ") + e.what());
    }
    if (cfg.grid_n < cfg.stack.layers.size())
        throw ConfigError("grid.n: must be at least the layer count " +
                          std::to_string(cfg.stack.layers.size()));
    return cfg;
}

DeviceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

Device DeviceConfig::device() const {
    return make_device(stack, grid_n, phi0, phi1);
}

DistributionFunction DeviceConfig::distribution() const {
    return zero_temperature ? DistributionFunction::zero_temperature(stat_scale)
                            : DistributionFunction::fermi(beta, stat_scale);
}

ScfConfig DeviceConfig::scf() const {
    ScfConfig s;
    s.particles = particles;
    s.charge = charge;
    s.damping = damping;
    s.tol_l1 = tol_l1;
    s.max_iter = max_iter;
    s.tail_tol = tail_tol;
    s.adaptive_damping = adaptive_damping;
    return s;
}

}  // namespace ks1d
