#pragma once

// Acceptance suite shared by the acceptance test binary and `confbound selftest`.
// Each item returns pass/fail, a one-line detail and its wall time.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "dynamics.hpp"
#include "kernel.hpp"

namespace confbound::acceptance {

struct Item {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct Options {
    // Replaces every numeric tolerance when set; used to show sensitivity.
    std::optional<double> tolerance;
    std::uint64_t seed = 20240607;
    double tol(double standard) const { return tolerance.value_or(standard); }
};

namespace detail {

inline const std::vector<double>& blaschke_parameters() {
    static const std::vector<double> a{0.0, 0.25, 0.5, 0.9};
    return a;
}

inline SelfMap blaschke(double a) {
    std::ostringstream id;
    id << "blaschke2:a=" << a;
    return catalog(id.str());
}

// Ten disk maps: automorphisms, finite Blaschke products, a constant and
// conjugates of the half-plane catalog.
inline std::vector<SelfMap> property_maps() {
    return {catalog("identity"),
            catalog("rotation:theta=1.3"),
            catalog("automorphism:b=0.5"),
            catalog("power:n=3"),
            catalog("blaschke2:a=0.5"),
            catalog("blaschke:zeros=0.5;-0.3i"),
            catalog("constant:c=0.3+0.2i"),
            conjugate_to_disk(catalog("hp:log-slow")),
            conjugate_to_disk(catalog("hp:sqrt:c=1")),
            conjugate_to_disk(catalog("hp:z2"))};
}

// Point with hyperbolic distance from 0 uniform in [0, depth].
inline Complex random_point(std::mt19937_64& rng, double depth = 14.0) {
    std::uniform_real_distribution<double> u(0.0, depth), a(-M_PI, M_PI);
    return std::polar(std::tanh(0.5 * u(rng)), a(rng));
}

inline std::string fmt(double x) {
    std::ostringstream o;
    o.precision(6);
    o << x;
    return o.str();
}

}  // namespace detail

inline Item blaschke_derivative(const Options& o) {
    Item it{1, "Blaschke angular derivative |phi_a'(1)| = 2/(1-a)", false, {}, 0.0};
    it.passed = true;
    double worst = 0, slowest = 0;
    for (double a : detail::blaschke_parameters()) {
        auto t0 = std::chrono::steady_clock::now();
        auto d = angular_derivative(detail::blaschke(a), 1.0, ApproachPath::radial(1.0));
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double err = std::abs(d.modulus - 2.0 / (1.0 - a)) / (2.0 / (1.0 - a));
        worst = std::max(worst, err);
        slowest = std::max(slowest, dt);
        if (d.infinite || !(err <= o.tol(1e-5)) || dt >= 1.0) it.passed = false;
    }
    it.detail = "max rel error " + detail::fmt(worst) + ", slowest " + detail::fmt(slowest) + " s";
    return it;
}

inline Item blaschke_integral(const Options& o) {
    Item it{2, "Blaschke integral I(phi_a,1) = log(1+a) + log 2", false, {}, 0.0};
    it.passed = true;
    double worst = 0, slowest = 0;
    for (double a : detail::blaschke_parameters()) {
        auto t0 = std::chrono::steady_clock::now();
        auto I = integral_I(detail::blaschke(a), 1.0, 32);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double err = std::abs(I.value - (std::log1p(a) + std::log(2.0)));
        worst = std::max(worst, err);
        slowest = std::max(slowest, dt);
        if (!(err <= o.tol(1e-5)) || dt >= 2.0 || I.verdict != Convergence::convergent) it.passed = false;
    }
    it.detail = "max abs error " + detail::fmt(worst) + ", slowest " + detail::fmt(slowest) + " s";
    return it;
}

inline Item blaschke_integral_bound(const Options&) {
    Item it{3, "I(phi_a,1) <= 2 log(2/(1-a))", false, {}, 0.0};
    it.passed = true;
    double margin = 1e300;
    for (double a : detail::blaschke_parameters()) {
        double I = integral_I(detail::blaschke(a), 1.0, 32).value;
        double bound = 2.0 * std::log(2.0 / (1.0 - a));
        margin = std::min(margin, bound - I);
        if (!(I <= bound)) it.passed = false;
    }
    it.detail = "smallest margin " + detail::fmt(margin);
    return it;
}

inline Item quadrature(const Options& o) {
    Item it{4, "quadrature self-test int_0^1 2(1-x)/(1+x)^3 dx = 1/2", false, {}, 0.0};
    double v = quadrature_selftest();
    it.passed = std::abs(v - 0.5) <= o.tol(1e-10);
    it.detail = "error " + detail::fmt(std::abs(v - 0.5));
    return it;
}

inline Item schwarz_pick(const Options& o) {
    Item it{5, "Schwarz-Pick suite (1e4 pairs x 10 maps)", false, {}, 0.0};
    std::mt19937_64 rng(o.seed);
    double slack = o.tol(1e-11);
    int bad = 0;
    double worst = 0;
    for (const SelfMap& m : detail::property_maps()) {
        for (int i = 0; i < 10000; ++i) {
            QComplex z = num::to_quad(detail::random_point(rng)), w = num::to_quad(detail::random_point(rng));
            double k = num::to_double(geo::distance_disk(z, w));
            double kk = num::to_double(geo::distance_disk(m.eval(z).value, m.eval(w).value));
            double d = num::to_double(distortion_value(m, z));
            worst = std::max({worst, kk - k, d - 1.0, -d});
            if (kk > k + slack || d > 1.0 + slack || d < -slack) ++bad;
        }
    }
    it.passed = bad == 0;
    it.detail = std::to_string(bad) + " violations, worst excess " + detail::fmt(worst);
    return it;
}

inline Item sandwich(const Options& o) {
    Item it{6, "sandwich ordering (1e3 triples per map) and z^2 instance", false, {}, 0.0};
    std::mt19937_64 rng(o.seed + 1);
    double slack = o.tol(1e-10);
    int bad = 0;
    for (const SelfMap& m : detail::property_maps())
        for (int i = 0; i < 1000; ++i) {
            auto b = sandwich_bounds(m, detail::random_point(rng, 6.0), detail::random_point(rng, 6.0), slack);
            if (!b.ordered) ++bad;
        }
    auto h = sandwich_bounds(catalog("power:n=2"), 0.5, 0.0);
    double err = std::max({std::abs(h.lower - 4.0 / 9.0), std::abs(h.middle - std::log(9.0 / 5.0)),
                           std::abs(h.upper - 4.0)});
    it.passed = bad == 0 && err <= o.tol(1e-12);
    it.detail = std::to_string(bad) + " unordered, instance error " + detail::fmt(err);
    return it;
}

inline Item golusin(const Options& o) {
    Item it{7, "Golusin estimates (1e3 pairs per non-automorphism map)", false, {}, 0.0};
    std::mt19937_64 rng(o.seed + 2);
    double slack = o.tol(1e-10);
    int bad = 0, maps = 0;
    for (const SelfMap& m : detail::property_maps()) {
        if (looks_like_automorphism(m)) continue;
        ++maps;
        for (int i = 0; i < 1000; ++i) {
            auto g = golusin_bounds(m, detail::random_point(rng, 6.0), detail::random_point(rng, 6.0), slack);
            if (!g.holds()) ++bad;
        }
    }
    it.passed = bad == 0 && maps > 0;
    it.detail = std::to_string(bad) + " violations over " + std::to_string(maps) + " maps";
    return it;
}

inline Item discrete_ratio(const Options&) {
    Item it{8, "I/S within [2b/(1+b)^2, 2b/(1-b)^2] for z^2", false, {}, 0.0};
    it.passed = true;
    std::ostringstream d;
    for (double b : {0.25, 0.5}) {
        auto r = discrete_sum_S(catalog("power:n=2"), b, 400);
        if (r.vacuous || !r.within) it.passed = false;
        d << "b=" << b << ": " << detail::fmt(r.lower) << " <= " << detail::fmt(r.ratio) << " <= "
          << detail::fmt(r.upper) << "; ";
    }
    it.detail = d.str();
    return it;
}

inline Item kernel_identity(const Options& o) {
    Item it{9, "kernel identity, delta metric for phi = 0, Gram PSD", false, {}, 0.0};
    std::mt19937_64 rng(o.seed + 3);
    auto maps = detail::property_maps();
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const SelfMap& m = maps[i % maps.size()];
        Complex z = detail::random_point(rng, 8.0), w = detail::random_point(rng, 8.0);
        if (z == w) continue;
        QComplex zq = num::to_quad(z), wq = num::to_quad(w);
        QReal lhs = num::norm(kern::normalized(m, zq, wq)) *
                    geo::one_minus_rho2_disk(m.eval(zq).value, m.eval(wq).value);
        QReal rhs = geo::one_minus_rho2_disk(zq, wq);
        worst = std::max(worst, num::to_double(num::abs(lhs - rhs)));
    }
    SelfMap zero = SelfMap::parse("0", Domain::disk);
    double delta_err = 0;
    for (int i = 0; i < 1000; ++i) {
        Complex z = detail::random_point(rng, 6.0), w = detail::random_point(rng, 6.0);
        delta_err = std::max(delta_err, std::abs(delta_pseudometric(zero, DiskPoint(z), DiskPoint(w)) -
                                                 pseudo_hyperbolic_distance(DiskPoint(z), DiskPoint(w))));
    }
    bool psd = true;
    for (const SelfMap& m : maps)
        for (int n = 1; n <= 12; ++n) {
            std::vector<DiskPoint> pts;
            for (int k = 0; k < n; ++k) pts.emplace_back(detail::random_point(rng, 5.0));
            if (!gram_matrix(m, pts).psd) psd = false;
        }
    it.passed = worst <= o.tol(1e-12) && delta_err <= o.tol(1e-13) && psd;
    it.detail = "identity error " + detail::fmt(worst) + ", delta error " + detail::fmt(delta_err) +
                ", Gram " + (psd ? "PSD" : "not PSD");
    return it;
}

inline Item classification_matrix(const Options&) {
    Item it{10, "classification matrix", false, {}, 0.0};
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream d;
    bool ok = true;
    auto expect = [&](const std::string& label, const SelfMap& m, Classification want) {
        auto r = classify(m, 1.0);
        d << label << "=" << classification_name(r.classification) << " ";
        if (r.classification != want) ok = false;
        return r;
    };
    expect("psi_b", catalog("automorphism:b=0.5"), Classification::strong);
    expect("phi_a", catalog("blaschke2:a=0.5"), Classification::strong);
    expect("z^2", catalog("power:n=2"), Classification::strong);
    auto g = expect("G", conjugate_to_disk(catalog("hp:log-slow")), Classification::weak_only);
    for (const auto& c : g.conditions) {
        if (c.id == "T2a" && c.verdict != Verdict::fails) ok = false;
        if (c.id == "T1a" && c.verdict != Verdict::holds) ok = false;
        if (c.id == "T2d-julia" && c.verdict != Verdict::fails) ok = false;
    }
    expect("const", catalog("constant:c=0.3"), Classification::none);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    it.passed = ok && dt < 30.0;
    d << "(" << detail::fmt(dt) << " s)";
    it.detail = d.str();
    return it;
}

inline Item premodel(const Options& o) {
    Item it{11, "pre-model regularity and step limit", false, {}, 0.0};
    std::ostringstream d;
    bool ok = true;
    {
        SelfMap m = catalog("power:n=2");
        double z0 = 0.81, t0 = -std::log(z0);
        auto orbit = backward_orbit(m, DiskPoint(z0), 1.0, 40, o.seed);
        auto r = premodel_analysis(m, orbit);
        double mu_err = std::abs(r.mu - t0 / std::sinh(t0));
        double rho_err = std::max(std::abs(r.rho_measured - std::log(2.0)), std::abs(r.rho_formula - std::log(2.0)));
        ok = ok && r.verdict == PreModelVerdict::regular && mu_err <= o.tol(1e-4) && rho_err <= o.tol(1e-5);
        d << "z^2 " << premodel_verdict_name(r.verdict) << " mu err " << detail::fmt(mu_err) << " rho err "
          << detail::fmt(rho_err) << "; ";
    }
    {
        SelfMap m = catalog("automorphism:b=0.5");
        auto orbit = backward_orbit(m, DiskPoint(Complex(0.2, 0.1)), -1.0, 40, o.seed);
        auto r = premodel_analysis(m, orbit);
        double spread = *std::max_element(orbit.steps.begin(), orbit.steps.end()) -
                        *std::min_element(orbit.steps.begin(), orbit.steps.end());
        ok = ok && r.verdict == PreModelVerdict::regular && spread <= o.tol(1e-9);
        d << "psi_b " << premodel_verdict_name(r.verdict) << " step spread " << detail::fmt(spread) << "; ";
    }
    double fe = functional_equation_residual(catalog("hp:z2"), catalog("hp:coth-premodel"), 0.5);
    ok = ok && fe < o.tol(1e-8);
    d << "functional equation residual " << detail::fmt(fe);
    it.passed = ok;
    it.detail = d.str();
    return it;
}

// Map/point pairs for the consistency sweep.
inline std::vector<std::pair<std::string, Complex>> consistency_cases() {
    return {{"identity", 1.0},
            {"rotation:theta=1.3", Complex(0.0, 1.0)},
            {"automorphism:b=0.5", 1.0},
            {"automorphism:b=0.5", -1.0},
            {"power:n=2", 1.0},
            {"power:n=2", Complex(0.0, 1.0)},
            {"power:n=3", -1.0},
            {"blaschke2:a=0.5", 1.0},
            {"blaschke2:a=0.9", -1.0},
            {"blaschke:zeros=0.5;-0.3i", Complex(0.6, 0.8)},
            {"constant:c=0.3", 1.0},
            {"hp:affine:lambda=2,c=1", 1.0},
            {"hp:z2", 1.0},
            {"hp:sqrt:c=1", 1.0},
            {"hp:log-slow", 1.0},
            {"hp:coth-premodel", 1.0}};
}

inline Item consistency(const Options&) {
    Item it{12, "cross-condition consistency within each battery", false, {}, 0.0};
    int bad = 0;
    std::ostringstream d;
    for (const auto& [id, sigma] : consistency_cases()) {
        SelfMap m = catalog(id);
        auto r = classify(m, sigma);
        if (r.weak_status == BatteryStatus::inconsistent || r.strong_status == BatteryStatus::inconsistent) {
            ++bad;
            d << id << " ";
        }
    }
    it.passed = bad == 0;
    it.detail = std::to_string(consistency_cases().size()) + " cases, " + std::to_string(bad) + " inconsistent " +
                d.str();
    return it;
}

inline Item transfer(const Options& o) {
    Item it{13, "disk/half-plane transfer and rotation equivariance", false, {}, 0.0};
    std::mt19937_64 rng(o.seed + 4);
    double worst = 0;
    for (const char* id : {"hp:z2", "hp:sqrt:c=1", "hp:log-slow", "hp:affine:lambda=2,c=1"}) {
        SelfMap F = catalog(id), phi = conjugate_to_disk(F);
        for (int i = 0; i < 1000; ++i) {
            Complex z = detail::random_point(rng, 6.0);
            Complex w = geo::cayley_inverse(z);
            worst = std::max(worst, std::abs(distortion_value(F, w) - distortion_value(phi, z)));
        }
    }
    bool equivariant = true;
    for (auto [id, sigma] : std::vector<std::pair<std::string, Complex>>{{"power:n=2", Complex(0.0, 1.0)},
                                                                         {"automorphism:b=0.5", -1.0}}) {
        SelfMap m = catalog(id);
        auto a = classify(m, sigma), b = classify(rotate_to_one(m, sigma), 1.0);
        if (a.classification != b.classification || a.conditions.size() != b.conditions.size()) equivariant = false;
        for (std::size_t i = 0; equivariant && i < a.conditions.size(); ++i)
            if (a.conditions[i].verdict != b.conditions[i].verdict) equivariant = false;
    }
    it.passed = worst <= o.tol(1e-11) && equivariant;
    it.detail = "D_h transfer error " + detail::fmt(worst) + ", rotation " + (equivariant ? "equivariant" : "differs");
    return it;
}

inline std::vector<Item> run(const Options& o = {}) {
    using Fn = Item (*)(const Options&);
    const Fn items[] = {blaschke_derivative, blaschke_integral, blaschke_integral_bound, quadrature,
                        schwarz_pick,        sandwich,          golusin,                 discrete_ratio,
                        kernel_identity,     classification_matrix, premodel,            consistency,
                        transfer};
    std::vector<Item> out;
    for (Fn f : items) {
        auto t0 = std::chrono::steady_clock::now();
        Item it;
        try {
            it = f(o);
        } catch (const std::exception& e) {
            it.passed = false;
            it.name = "criterion " + std::to_string(out.size() + 1);
            it.detail = std::string("exception: ") + e.what();
        }
        it.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(it);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].id == 0) out[i].id = static_cast<int>(i + 1);
    return out;
}

inline std::string format_line(const Item& it) {
    std::ostringstream o;
    o.precision(3);
    o << (it.passed ? "[PASS] " : "[FAIL] ") << it.id << ". " << it.name << " -- " << it.detail << " ("
      << std::fixed << it.seconds << " s)";
    return o.str();
}

}  // namespace confbound::acceptance
