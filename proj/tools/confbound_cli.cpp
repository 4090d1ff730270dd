// confbound: boundary conformality of holomorphic self-maps from the command line.
//
//   confbound classify     --catalog blaschke2:a=0.5 --sigma 1
//   confbound profile      --map "z^2" --sigma 1 --table shells
//   confbound premodel     --catalog power:n=2 --sigma 1 --z0 0.81
//   confbound kernel-probe --catalog power:n=2 --z 0.5 --w 0.3i
//   confbound selftest     --json
//
// Exit codes: 0 ok, 2 invalid input, 3 inconclusive, 4 insufficient data.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "confbound.hpp"

using namespace confbound;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_inconclusive = 3;
constexpr int exit_insufficient = 4;

struct Overrides {
    std::string config_file;
    std::vector<std::string> sets;
    std::optional<std::string> map, catalog_id, domain, sigma, z0, json_out, csv_out;
    std::optional<double> ratio, start_offset, aperture, abs_tol, limit_tol, unimodular_tol, kernel_threshold;
    std::optional<int> length, shells, orbit_length;
    std::optional<std::uint64_t> seed;
};

void add_run_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_file, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", o.sets, "override one config key (key=value), repeatable");
    sub->add_option("--map", o.map, "map expression in z (disk) or w (half-plane)");
    sub->add_option("--catalog", o.catalog_id, "catalog id, e.g. blaschke2:a=0.5");
    sub->add_option("--domain", o.domain, "disk or half-plane (expressions only)");
    sub->add_option("--sigma", o.sigma, "boundary point, 'inf' for half-plane maps, or 'scan'");
    sub->add_option("--ratio", o.ratio, "path ratio q");
    sub->add_option("--start-offset", o.start_offset, "path start offset s0");
    sub->add_option("--aperture", o.aperture, "off-radial aperture beta");
    sub->add_option("--length", o.length, "path length");
    sub->add_option("--shells", o.shells, "integral shells");
    sub->add_option("--orbit-length", o.orbit_length, "backward orbit length");
    sub->add_option("--z0", o.z0, "backward orbit start point");
    sub->add_option("--seed", o.seed, "seed for Newton restarts and sampling");
    sub->add_option("--abs-tol", o.abs_tol, "vanishing tolerance for decision rules");
    sub->add_option("--limit-tol", o.limit_tol, "Cauchy tolerance for angular limits");
    sub->add_option("--unimodular-tol", o.unimodular_tol, "tolerance on |boundary value| = 1");
    sub->add_option("--kernel-threshold", o.kernel_threshold, "lower bound for the kernel liminf and limsup conditions");
    sub->add_option("--json-out", o.json_out, "write JSON here instead of stdout");
    sub->add_option("--csv-out", o.csv_out, "write CSV here instead of stdout");
}

RunConfig build_config(const Overrides& o) {
    RunConfig c = o.config_file.empty() ? RunConfig{} : RunConfig::load(o.config_file);
    for (const auto& kv : o.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value");
        c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    auto put = [&](const char* key, const auto& v) {
        if (!v) return;
        std::ostringstream s;
        s.precision(17);
        s << *v;
        c.set(key, s.str());
    };
    put("map", o.map);
    put("catalog", o.catalog_id);
    put("domain", o.domain);
    put("sigma", o.sigma);
    put("ratio", o.ratio);
    put("start_offset", o.start_offset);
    put("aperture", o.aperture);
    put("length", o.length);
    put("shells", o.shells);
    put("orbit_length", o.orbit_length);
    put("z0", o.z0);
    put("seed", o.seed);
    put("abs_tol", o.abs_tol);
    put("limit_tol", o.limit_tol);
    put("unimodular_tol", o.unimodular_tol);
    put("kernel_threshold", o.kernel_threshold);
    put("json_out", o.json_out);
    put("csv_out", o.csv_out);
    c.validate();
    return c;
}

// Loads the map, checks the self-map property and returns its disk form.
SelfMap disk_map(const RunConfig& c) {
    SelfMap m = c.load_map();
    if (!m.certificate()) {
        ValidationResult v = validate_self_map(m);
        if (!v.valid) {
            std::ostringstream s;
            s << "not a self-map: " << v.violation->description << " at " << v.violation->witness;
            throw ConfigError(s.str());
        }
        m = m.with_certificate(v.certificate);
    }
    if (m.domain() == Domain::half_plane) {
        if (c.sigma != "inf" && c.sigma != "1" && !c.scan())
            throw ConfigError("half-plane maps are analysed at sigma = inf");
        return conjugate_to_disk(m, 1.0);
    }
    if (c.sigma == "inf") throw ConfigError("sigma = inf needs a half-plane map");
    return m;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

int cmd_classify(const RunConfig& c) {
    SelfMap m = disk_map(c);
    BoundaryOptions o = c.boundary_options();
    Json j = header_json("conformality_report", c);
    bool inconclusive = false;
    if (c.scan()) {
        Json reports = Json::array();
        for (const auto& p : boundary_fixed_points(m, 720, o)) {
            ConformalityReport r = classify(m, p.sigma, o);
            inconclusive = inconclusive || r.classification == Classification::inconclusive;
            reports.push_back(to_json(r));
        }
        j["reports"] = reports;
    } else {
        ConformalityReport r = classify(m, c.sigma_value(), o);
        inconclusive = r.classification == Classification::inconclusive;
        j["report"] = to_json(r);
    }
    emit(c.json_out, j.dump(2) + "\n");
    return inconclusive ? exit_inconclusive : exit_ok;
}

int cmd_profile(const RunConfig& c, const std::string& table) {
    if (c.scan()) throw ConfigError("profile needs a single sigma");
    SelfMap m = disk_map(c);
    Complex sigma = c.sigma_value();
    BoundaryOptions o = c.boundary_options();
    ProfileTable t = build_profile(m, sigma, o.path(sigma, 0.0), c.shells);
    emit(c.csv_out, table == "shells" ? t.shell_csv() : t.csv());
    return exit_ok;
}

int cmd_premodel(const RunConfig& c) {
    if (c.scan()) throw ConfigError("premodel needs a single sigma");
    SelfMap m = disk_map(c);
    Complex sigma = c.sigma_value();
    Complex z0 = expr::parse_constant(c.z0);
    if (c.load_map().domain() == Domain::half_plane) z0 = geo::cayley(z0);
    BoundaryOptions o = c.boundary_options();
    BackwardOrbit orbit = backward_orbit(m, DiskPoint(z0), sigma, c.orbit_length, c.seed, o);
    PreModelReport r = premodel_analysis(m, orbit, o.trend);
    Json j = header_json("premodel_report", c);
    Json rep = to_json(r);
    rep["orbit"] = {{"length", orbit.points.size()},
                    {"regular", orbit.regular},
                    {"steps_monotone", orbit.steps_monotone},
                    {"truncated", orbit.truncated},
                    {"restarts", orbit.restarts},
                    {"diagnostic", orbit.diagnostic}};
    j["report"] = rep;
    emit(c.json_out, j.dump(2) + "\n");
    if (!c.csv_out.empty()) emit(c.csv_out, orbit_csv(orbit, &r));
    return r.verdict == PreModelVerdict::undecided ? exit_inconclusive : exit_ok;
}

int cmd_kernel_probe(const RunConfig& c, const std::string& zs, const std::string& ws, const std::string& pts) {
    SelfMap m = disk_map(c);
    DiskPoint z(expr::parse_constant(zs)), w(expr::parse_constant(ws));
    Json j = header_json("kernel_probe", c);
    j["z"] = detail::complex_json(z.value());
    j["w"] = detail::complex_json(w.value());
    j["kernel"] = detail::complex_json(kernel_eval(m, z, w));
    j["norm_sq_z"] = detail::real_json(kernel_point(m, z).norm_sq);
    j["norm_sq_w"] = detail::real_json(kernel_point(m, w).norm_sq);
    j["normalized_inner_product"] = detail::complex_json(normalized_inner_product(m, z, w));
    j["delta"] = detail::real_json(delta_pseudometric(m, z, w));
    ChainInequality ch = chain_inequality_check(m, z.value(), w.value());
    j["chain"] = {{"log_ratio", detail::real_json(ch.log_ratio)},
                  {"difference", detail::real_json(ch.difference)},
                  {"root", detail::real_json(ch.root)},
                  {"holds", ch.holds()},
                  {"unit_constant_holds", ch.unit_constant_ok}};
    if (!pts.empty()) {
        std::vector<DiskPoint> points;
        std::stringstream ss(pts);
        for (std::string item; std::getline(ss, item, ';');) points.emplace_back(expr::parse_constant(item));
        GramResult g = gram_matrix(m, points);
        j["gram"] = {{"size", points.size()}, {"psd", g.psd}, {"rank", g.rank},
                     {"min_pivot", detail::real_json(g.min_pivot)}, {"tolerance", detail::real_json(g.tolerance)}};
    }
    emit(c.json_out, j.dump(2) + "\n");
    return exit_ok;
}

int cmd_selftest(std::optional<double> tolerance, bool json) {
    acceptance::Options o;
    o.tolerance = tolerance;
    auto items = acceptance::run(o);
    bool ok = std::all_of(items.begin(), items.end(), [](const acceptance::Item& i) { return i.passed; });
    if (json) {
        Json j;
        j["schema"] = "selftest";
        j["schema_version"] = report_schema_version;
        j["tool_version"] = version;
        j["seed"] = o.seed;
        j["tolerance_override"] = tolerance ? Json(*tolerance) : Json(nullptr);
        Json arr = Json::array();
        for (const auto& i : items)
            arr.push_back({{"id", i.id}, {"name", i.name}, {"passed", i.passed}, {"detail", i.detail}});
        j["items"] = arr;
        j["passed"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& i : items) std::cout << acceptance::format_line(i) << "\n";
        std::cout << (ok ? "all items passed" : "some items failed") << "\n";
    }
    return ok ? exit_ok : exit_inconclusive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary conformality of holomorphic self-maps of the disk and half-plane"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    Overrides oc, op, opm, ok;
    auto* classify_cmd = app.add_subcommand("classify", "classify conformality at a boundary point");
    add_run_options(classify_cmd, oc);

    std::string table = "profile";
    auto* profile_cmd = app.add_subcommand("profile", "CSV of distortion, Julia and Visser-Ostrowski quotients");
    add_run_options(profile_cmd, op);
    profile_cmd->add_option("--table", table, "profile or shells")->check(CLI::IsMember({"profile", "shells"}));

    auto* premodel_cmd = app.add_subcommand("premodel", "backward orbit and pre-model regularity");
    add_run_options(premodel_cmd, opm);

    std::string zs = "0", ws = "0.5", pts;
    auto* kernel_cmd = app.add_subcommand("kernel-probe", "kernel values, delta metric and Gram check");
    add_run_options(kernel_cmd, ok);
    kernel_cmd->add_option("--z", zs, "first point");
    kernel_cmd->add_option("--w", ws, "second point");
    kernel_cmd->add_option("--points", pts, "semicolon-separated points for a Gram matrix");

    std::optional<double> tolerance;
    bool json = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
    selftest_cmd->add_option("--tolerance", tolerance, "replace every numeric tolerance");
    selftest_cmd->add_flag("--json", json, "machine-readable summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (*classify_cmd) return cmd_classify(build_config(oc));
        if (*profile_cmd) return cmd_profile(build_config(op), table);
        if (*premodel_cmd) return cmd_premodel(build_config(opm));
        if (*kernel_cmd) return cmd_kernel_probe(build_config(ok), zs, ws, pts);
        if (*selftest_cmd) return cmd_selftest(tolerance, json);
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_insufficient;
    } catch (const expr::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const MissingBoundaryValue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
