#include <catch_amalgamated.hpp>

#include <sstream>

#include <confbound/report.hpp>

using namespace confbound;

TEST_CASE("config parsing", "[config]") {
    std::istringstream in("# run\nmap = z*z  # squared\n\nsigma = 1\nratio=0.25\nseed = 42\n");
    auto c = RunConfig::parse(in);
    CHECK(c.map_expr == "z*z");
    CHECK(c.ratio == 0.25);
    CHECK(c.seed == 42);
    CHECK_NOTHROW(c.validate());
    CHECK(std::abs(c.sigma_value() - 1.0) < 1e-15);

    std::istringstream bad1("nokey = 1\n");
    CHECK_THROWS_AS(RunConfig::parse(bad1), ConfigError);
    std::istringstream bad2("ratio = half\n");
    CHECK_THROWS_AS(RunConfig::parse(bad2), ConfigError);
    std::istringstream bad3("just text\n");
    CHECK_THROWS_AS(RunConfig::parse(bad3), ConfigError);
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("config validation", "[config]") {
    RunConfig c;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.catalog_id = "power:n=2";
    CHECK_NOTHROW(c.validate());
    c.map_expr = "z";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.map_expr.clear();
    for (auto [k, v] : std::vector<std::pair<std::string, std::string>>{
             {"ratio", "1"}, {"aperture", "2"}, {"length", "8"}, {"shells", "1000"},
             {"start_offset", "3"}, {"abs_tol", "0"}, {"domain", "annulus"}, {"orbit_length", "1"}}) {
        RunConfig d = c;
        d.set(k, v);
        INFO(k << "=" << v);
        CHECK_THROWS_AS(d.validate(), ConfigError);
    }
    CHECK_THROWS_AS(c.set("length", "20.5"), ConfigError);
    c.sigma = "0.5";
    CHECK_THROWS_AS(c.sigma_value(), ConfigError);
    c.sigma = "inf";
    CHECK(c.sigma_value() == Complex(1.0, 0.0));
    c.sigma = "i";
    CHECK(std::abs(c.sigma_value() - Complex(0.0, 1.0)) < 1e-15);
}

TEST_CASE("config round-trips through its serialization", "[config]") {
    RunConfig c;
    c.catalog_id = "blaschke2:a=0.5";
    c.aperture = 0.3;
    c.abs_tol = 1e-9;
    c.seed = 99;
    c.kernel_threshold = 0.02;
    std::istringstream in(c.serialize());
    auto d = RunConfig::parse(in);
    CHECK(d.echo() == c.echo());
    auto o = d.boundary_options();
    CHECK(o.aperture == 0.3);
    CHECK(o.trend.abs_tol == 1e-9);
    CHECK(o.kernel_liminf_threshold == 0.02);
    CHECK(d.load_map().family() == "blaschke2:a=0.5");
}

TEST_CASE("reports are deterministic and complete", "[report]") {
    RunConfig c;
    c.catalog_id = "power:n=2";
    auto m = c.load_map();
    auto r1 = classify(m, 1.0, c.boundary_options()), r2 = classify(m, 1.0, c.boundary_options());
    Json j = header_json("classify", c);
    j["report"] = to_json(r1);
    Json k = header_json("classify", c);
    k["report"] = to_json(r2);
    CHECK(j.dump() == k.dump());
    CHECK(j["schema_version"] == report_schema_version);
    CHECK(j["tool_version"] == version);
    CHECK(j["config"]["catalog"] == "power:n=2");
    CHECK(j["report"]["classification"] == "strong");
    CHECK(j["report"]["conditions"].size() == r1.conditions.size());
    CHECK(detail::real_json(std::nan("")) == "nan");
    CHECK(detail::real_json(-INFINITY) == "-inf");
}

TEST_CASE("orbit csv and profile tables", "[report]") {
    auto sq = catalog("power:n=2");
    auto o = backward_orbit(sq, DiskPoint(0.81), 1.0, 20);
    auto r = premodel_analysis(sq, o);
    std::string csv = orbit_csv(o, &r);
    CHECK(csv.rfind("n,re,im,step,dh_product,partial_sum\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(o.points.size()) + 1);
    CHECK(to_json(r)["verdict"] == "regular");

    auto t = build_profile(sq, 1.0, ApproachPath::radial(1.0, 20), 8);
    CHECK(t.rows.size() == 20);
    CHECK(t.shells.size() == 8);
    CHECK(std::abs(t.rows.back().julia - 2.0) < 1e-5);
    CHECK(t.csv().rfind("n,depth,r,", 0) == 0);
    CHECK(t.shell_csv().rfind("shell,contribution\n", 0) == 0);
}
