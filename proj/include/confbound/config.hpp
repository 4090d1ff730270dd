#pragma once

// Run configuration: a flat `key = value` file, command-line overrides, range
// validation and an echo that reports embed verbatim.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "conditions.hpp"
#include "maps.hpp"

namespace confbound {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string map_expr;       // expression text, or empty
    std::string catalog_id;     // catalog id, or empty
    std::string domain = "disk";
    std::string sigma = "1";    // complex literal, "inf" (half-plane), or "scan"
    double ratio = 0.5;
    double start_offset = 0.5;
    double aperture = M_PI / 4;
    int length = 48;
    int shells = 32;
    int orbit_length = 40;
    std::string z0 = "0.81";
    std::string json_out;
    std::string csv_out;
    std::uint64_t seed = 1;
    double abs_tol = 1e-7;
    double limit_tol = 1e-7;
    double unimodular_tol = 1e-6;
    double kernel_threshold = 1e-3;

    static std::vector<std::string> keys() {
        return {"map", "catalog", "domain", "sigma", "ratio", "start_offset", "aperture", "length",
                "shells", "orbit_length", "z0", "json_out", "csv_out", "seed", "abs_tol", "limit_tol",
                "unimodular_tol", "kernel_threshold"};
    }

    void set(const std::string& key, const std::string& value) {
        auto num = [&](double& out) {
            std::size_t pos = 0;
            try {
                out = std::stod(value, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos == 0 || pos != value.size()) throw ConfigError("config key '" + key + "' expects a number");
        };
        auto integer = [&](int& out) {
            double v;
            num(v);
            if (v != static_cast<int>(v)) throw ConfigError("config key '" + key + "' expects an integer");
            out = static_cast<int>(v);
        };
        if (key == "map") map_expr = value;
        else if (key == "catalog") catalog_id = value;
        else if (key == "domain") domain = value;
        else if (key == "sigma") sigma = value;
        else if (key == "ratio") num(ratio);
        else if (key == "start_offset") num(start_offset);
        else if (key == "aperture") num(aperture);
        else if (key == "length") integer(length);
        else if (key == "shells") integer(shells);
        else if (key == "orbit_length") integer(orbit_length);
        else if (key == "z0") z0 = value;
        else if (key == "json_out") json_out = value;
        else if (key == "csv_out") csv_out = value;
        else if (key == "seed") {
            try {
                seed = std::stoull(value);
            } catch (const std::exception&) {
                throw ConfigError("config key 'seed' expects a non-negative integer");
            }
        } else if (key == "abs_tol") num(abs_tol);
        else if (key == "limit_tol") num(limit_tol);
        else if (key == "unimodular_tol") num(unimodular_tol);
        else if (key == "kernel_threshold") num(kernel_threshold);
        else throw ConfigError("unknown config key '" + key + "'");
    }

    std::string get(const std::string& key) const {
        std::ostringstream o;
        if (key == "map") o << map_expr;
        else if (key == "catalog") o << catalog_id;
        else if (key == "domain") o << domain;
        else if (key == "sigma") o << sigma;
        else if (key == "ratio") o << expr::format_real(ratio);
        else if (key == "start_offset") o << expr::format_real(start_offset);
        else if (key == "aperture") o << expr::format_real(aperture);
        else if (key == "length") o << length;
        else if (key == "shells") o << shells;
        else if (key == "orbit_length") o << orbit_length;
        else if (key == "z0") o << z0;
        else if (key == "json_out") o << json_out;
        else if (key == "csv_out") o << csv_out;
        else if (key == "seed") o << seed;
        else if (key == "abs_tol") o << expr::format_real(abs_tol);
        else if (key == "limit_tol") o << expr::format_real(limit_tol);
        else if (key == "unimodular_tol") o << expr::format_real(unimodular_tol);
        else if (key == "kernel_threshold") o << expr::format_real(kernel_threshold);
        else throw ConfigError("unknown config key '" + key + "'");
        return o.str();
    }

    void validate() const {
        if (map_expr.empty() == catalog_id.empty())
            throw ConfigError("exactly one of 'map' and 'catalog' must be given");
        if (domain != "disk" && domain != "half-plane") throw ConfigError("domain must be 'disk' or 'half-plane'");
        if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("ratio must lie in (0, 1)");
        if (!(aperture > 0.0 && aperture < M_PI / 2)) throw ConfigError("aperture must lie in (0, pi/2)");
        if (!(start_offset > 0.0 && start_offset < 2.0 * std::cos(aperture)))
            throw ConfigError("start_offset must lie in (0, 2 cos(aperture))");
        if (length < 16 || length > 200) throw ConfigError("length must lie in [16, 200]");
        if (shells < 4 || shells > 256) throw ConfigError("shells must lie in [4, 256]");
        if (orbit_length < 2 || orbit_length > 200) throw ConfigError("orbit_length must lie in [2, 200]");
        for (double t : {abs_tol, limit_tol, unimodular_tol, kernel_threshold})
            if (!(t > 0.0 && t < 1.0)) throw ConfigError("tolerances must lie in (0, 1)");
    }

    // Flat key = value text; '#' starts a comment.
    std::string serialize() const {
        std::ostringstream o;
        for (const auto& k : keys()) o << k << " = " << get(k) << '\n';
        return o.str();
    }

    std::map<std::string, std::string> echo() const {
        std::map<std::string, std::string> out;
        for (const auto& k : keys()) out[k] = get(k);
        return out;
    }

    static RunConfig parse(std::istream& in) {
        RunConfig c;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
            c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return c;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        return parse(in);
    }

    BoundaryOptions boundary_options() const {
        BoundaryOptions o;
        o.ratio = ratio;
        o.start_offset = start_offset;
        o.aperture = aperture;
        o.length = length;
        o.shells = shells;
        o.unimodular_tol = unimodular_tol;
        o.limit_tol = limit_tol;
        o.kernel_liminf_threshold = kernel_threshold;
        o.trend.abs_tol = abs_tol;
        return o;
    }

    SelfMap load_map() const {
        if (!catalog_id.empty()) return catalog(catalog_id);
        return SelfMap::parse(map_expr, parse_domain(domain));
    }

    bool scan() const { return sigma == "scan"; }

    // sigma for disk analysis; "inf" is the half-plane point at infinity.
    Complex sigma_value() const {
        if (sigma == "inf") return 1.0;
        Complex s = expr::parse_constant(sigma);
        if (std::abs(std::abs(s) - 1.0) > 1e-12) throw ConfigError("sigma must be unimodular");
        return s / std::abs(s);
    }
};

}  // namespace confbound
