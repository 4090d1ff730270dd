#pragma once

// JSON and CSV emitters. Field order is fixed and floats are printed in
// shortest round-trip form, so equal inputs give byte-identical output.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boundary.hpp"
#include "config.hpp"
#include "dynamics.hpp"

namespace confbound {

inline constexpr const char* version = "1.0.0";
inline constexpr int report_schema_version = 1;

using Json = nlohmann::ordered_json;

namespace detail {

inline Json real_json(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

inline Json complex_json(Complex z) { return Json{{"re", real_json(z.real())}, {"im", real_json(z.imag())}}; }

inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

inline Json header_json(const char* kind, const RunConfig& c) {
    Json j;
    j["schema"] = kind;
    j["schema_version"] = report_schema_version;
    j["tool_version"] = version;
    j["seed"] = c.seed;
    Json cfg = Json::object();
    for (const auto& [k, v] : c.echo()) cfg[k] = v;
    j["config"] = cfg;
    return j;
}

inline Json to_json(const ConformalityReport& r) {
    Json j;
    j["map"] = {{"expression", r.map_expression}, {"family", r.map_family}, {"domain", domain_name(r.map_domain)}};
    j["sigma"] = detail::complex_json(r.sigma);
    j["boundary_value"] = {{"value", detail::complex_json(r.boundary_value)},
                           {"confidence", detail::real_json(r.boundary_confidence)},
                           {"unimodular", r.boundary_unimodular}};
    if (!r.angular_derivative) {
        j["angular_derivative"] = nullptr;
    } else if (r.angular_derivative->infinite) {
        j["angular_derivative"] = "inf";
    } else {
        j["angular_derivative"] = {{"value", detail::complex_json(r.angular_derivative->value)},
                                   {"modulus", detail::real_json(r.angular_derivative->modulus)},
                                   {"decided", r.angular_derivative->decided},
                                   {"cross_check", r.angular_derivative->cross_check}};
    }
    j["classification"] = classification_name(r.classification);
    j["diagnostic"] = r.diagnostic;
    j["weak_battery"] = battery_name(r.weak_status);
    j["strong_battery"] = battery_name(r.strong_status);
    Json conds = Json::array();
    for (const auto& c : r.conditions)
        conds.push_back({{"id", c.id}, {"verdict", verdict_name(c.verdict)}, {"rule", c.rule},
                         {"evidence_csv", c.evidence_csv}});
    j["conditions"] = conds;
    return j;
}

inline Json to_json(const PreModelReport& r) {
    Json j;
    j["sigma"] = detail::complex_json(r.sigma);
    j["derivative"] = detail::real_json(r.derivative);
    j["lambda"] = detail::real_json(r.lambda);
    j["n0"] = r.n0;
    j["mu"] = detail::real_json(r.mu);
    j["mu_shifted"] = detail::real_json(r.mu_shifted);
    j["stable"] = r.stable;
    j["verdict"] = premodel_verdict_name(r.verdict);
    j["rule"] = r.rule;
    j["rho_measured"] = detail::real_json(r.rho_measured);
    j["rho_formula"] = detail::real_json(r.rho_formula);
    j["theta"] = detail::real_json(r.theta);
    Json ps = Json::array();
    for (double v : r.partial_sums) ps.push_back(detail::real_json(v));
    j["partial_sums"] = ps;
    return j;
}

// n, Re z, Im z, step, D_h product, partial sum
inline std::string orbit_csv(const BackwardOrbit& o, const PreModelReport* r = nullptr) {
    std::ostringstream s;
    s << "n,re,im,step,dh_product,partial_sum\n";
    for (std::size_t n = 0; n < o.points.size(); ++n) {
        Complex z = o.points[n].value();
        s << n << ',' << detail::g17(z.real()) << ',' << detail::g17(z.imag()) << ',';
        if (n < o.steps.size()) s << detail::g17(o.steps[n]);
        s << ',';
        if (r && n > static_cast<std::size_t>(r->n0) && n - r->n0 - 1 < r->products.size()) {
            std::size_t k = n - r->n0 - 1;
            s << detail::g17(r->products[k]) << ',' << detail::g17(r->partial_sums[k]);
        } else {
            s << ',';
        }
        s << '\n';
    }
    return s.str();
}

struct ProfileRow {
    int n;
    double depth, r;
    Complex z;
    double dh, defect, julia;
    Complex vo;
};

struct ProfileTable {
    std::vector<ProfileRow> rows;
    std::vector<double> shells;
    std::string csv() const {
        std::ostringstream s;
        s << "n,depth,r,re,im,dh,one_minus_dh,julia,vo_re,vo_im\n";
        for (const auto& p : rows)
            s << p.n << ',' << detail::g17(p.depth) << ',' << detail::g17(p.r) << ',' << detail::g17(p.z.real())
              << ',' << detail::g17(p.z.imag()) << ',' << detail::g17(p.dh) << ',' << detail::g17(p.defect) << ','
              << detail::g17(p.julia) << ',' << detail::g17(p.vo.real()) << ',' << detail::g17(p.vo.imag()) << '\n';
        return s.str();
    }
    std::string shell_csv() const {
        std::ostringstream s;
        s << "shell,contribution\n";
        for (std::size_t i = 0; i < shells.size(); ++i) s << i << ',' << detail::g17(shells[i]) << '\n';
        return s.str();
    }
};

// Distortion, Julia quotient and Visser-Ostrowski quotient along one path.
inline ProfileTable build_profile(const SelfMap& m, Complex sigma, const ApproachPath& path, int shells = 32) {
    require_disk_map(m);
    ProfileTable t;
    AngularLimit lim = angular_limit(m, path);
    QComplex omega = lim.unimodular ? lim.value_q / QComplex(num::abs(lim.value_q)) : lim.value_q;
    QComplex s = boundary_point_quad(sigma);
    for (int n = 0; n < path.length(); ++n) {
        QComplex z = path.disk_point(n);
        Dual<QComplex> r = m.eval(z);
        ProfileRow row;
        row.n = n;
        row.depth = path.depth(n);
        row.r = num::to_double(num::abs(z));
        row.z = num::to_double(z);
        row.dh = num::to_double(distortion_value(m, z));
        row.defect = num::to_double(distortion_defect(m, z));
        row.julia = num::to_double((QReal(1) - num::abs(r.value)) / (QReal(1) - num::abs(z)));
        row.vo = lim.unimodular ? num::to_double((z - s) * r.deriv / (r.value - omega))
                                : Complex(std::nan(""), std::nan(""));
        t.rows.push_back(row);
    }
    t.shells = integral_I(m, sigma, shells).shells;
    return t;
}

}  // namespace confbound
