#include <catch_amalgamated.hpp>

#include <confbound/boundary.hpp>

using namespace confbound;
using Catch::Approx;

namespace {

SelfMap G_disk() { return conjugate_to_disk(catalog("hp:log-slow")); }

bool all_hold(const std::vector<ConditionResult>& cs) {
    for (const auto& c : cs)
        if (c.verdict != Verdict::holds) return false;
    return true;
}

const ConditionResult& find(const std::vector<ConditionResult>& cs, const std::string& id) {
    for (const auto& c : cs)
        if (c.id == id) return c;
    throw std::out_of_range(id);
}

}  // namespace

TEST_CASE("approach paths", "[boundary]") {
    ApproachPath p(1.0, 0.5, 0.5, 0.5, 48);
    auto steps = p.steps();
    double hi = *std::max_element(steps.begin() + steps.size() / 2, steps.end());
    double lo = *std::min_element(steps.begin() + steps.size() / 2, steps.end());
    CHECK(hi - lo < 0.05);
    CHECK(steps.back() == Approx(p.step_limit()).epsilon(1e-6));
    CHECK(ApproachPath::radial(1.0).step_limit() == Approx(std::log(2.0)).epsilon(1e-12));
    for (int n = 0; n < p.length(); ++n) CHECK(num::abs(p.disk_point(n)) < QReal(1));
    CHECK_THROWS_AS(ApproachPath(1.0, 0.0, 0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ApproachPath(0.5), std::invalid_argument);
}

TEST_CASE("angular limits", "[boundary]") {
    auto sq = catalog("power:n=2");
    auto a = angular_limit(sq, ApproachPath::radial(1.0));
    CHECK(std::abs(a.value - 1.0) < 1e-9);
    CHECK(a.unimodular);
    CHECK(a.converged);
    CHECK(std::abs(angular_limit(catalog("blaschke2:a=0.5"), ApproachPath::radial(1.0)).value - 1.0) < 1e-9);
    auto i = angular_limit(sq, ApproachPath::radial(Complex(0.0, 1.0)));
    CHECK(std::abs(i.value + 1.0) < 1e-9);
    auto c = angular_limit(catalog("constant:c=0.3"), ApproachPath::radial(1.0));
    CHECK_FALSE(c.unimodular);

    for (const char* id : {"power:n=2", "blaschke2:a=0.5", "automorphism:b=0.3+0.2i", "rotation:theta=1"}) {
        auto m = catalog(id);
        ApproachPath up(std::polar(1.0, 0.3), M_PI / 4), down = up.mirrored();
        auto lu = angular_limit(m, up), ld = angular_limit(m, down);
        CHECK(std::abs(lu.value - ld.value) <= std::max({lu.confidence, ld.confidence, 1e-9}));
    }
}

TEST_CASE("Julia quotients", "[boundary]") {
    auto j = julia_quotient_profile(catalog("power:n=2"), ApproachPath::radial(1.0));
    CHECK(j.liminf == Approx(2.0).epsilon(1e-9));
    CHECK(j.decision.verdict == Verdict::holds);
    auto id = julia_quotient_profile(catalog("identity"), ApproachPath::radial(1.0));
    for (double v : id.values) CHECK(v == Approx(1.0).epsilon(1e-12));
    auto psi = julia_quotient_profile(catalog("automorphism:b=0.5"), ApproachPath::radial(1.0));
    CHECK(psi.liminf == Approx(0.5 / 1.5).epsilon(1e-9));
}

TEST_CASE("angular derivatives", "[boundary]") {
    auto phi = angular_derivative(catalog("blaschke2:a=0.5"), 1.0, ApproachPath::radial(1.0));
    CHECK_FALSE(phi.infinite);
    CHECK(phi.modulus == Approx(4.0).margin(1e-6));
    CHECK(phi.cross_check);
    auto sq = angular_derivative(catalog("power:n=2"), 1.0, ApproachPath::radial(1.0));
    CHECK(sq.modulus == Approx(2.0).margin(1e-6));
    auto G = angular_derivative(G_disk(), 1.0, ApproachPath::radial(1.0));
    CHECK(G.infinite);
    CHECK_THROWS_AS(angular_derivative(catalog("constant:c=0.3"), 1.0, ApproachPath::radial(1.0)),
                    MissingBoundaryValue);
}

TEST_CASE("Visser-Ostrowski quotient", "[boundary]") {
    auto sq = visser_ostrowski(catalog("power:n=2"), 1.0, ApproachPath::radial(1.0));
    CHECK(std::abs(sq.value - 1.0) < 1e-6);
    CHECK(sq.decision.verdict == Verdict::holds);
    auto psi = visser_ostrowski(catalog("automorphism:b=0.5"), 1.0, ApproachPath::radial(1.0));
    CHECK(std::abs(psi.value - 1.0) < 1e-6);
    auto G = visser_ostrowski(G_disk(), 1.0, ApproachPath::radial(1.0));
    CHECK(std::abs(G.value - 1.0) < 0.1);
    CHECK(G.decision.verdict == Verdict::holds);
}

TEST_CASE("weak conformality argument", "[boundary]") {
    for (const char* id : {"automorphism:b=0.5", "power:n=2"}) {
        auto w = weak_conformality_arg(catalog(id), 1.0, ApproachPath::radial(1.0), QComplex(1));
        CHECK(std::abs(w.arg_limit) < 1e-9);
        CHECK(w.arg_decision.verdict == Verdict::holds);
        CHECK(w.derivative_nonvanishing);
    }
    // i*z: the constant is exactly unimodular in binary, so the ratio is 1
    // even at depth 2^-48 where a rounded e^{i theta} would dominate it
    Complex s = std::polar(1.0, 0.8);
    auto rot = SelfMap::parse("i*z", Domain::disk);
    QComplex omega = QComplex(QReal(0), QReal(1)) * boundary_point_quad(s);
    auto w = weak_conformality_arg(rot, s, ApproachPath(s, M_PI / 4), omega);
    CHECK(std::abs(w.arg_limit) < 1e-9);
    CHECK(w.arg_decision.verdict == Verdict::holds);
    auto u = unwrap({3.0, -3.0, 3.0});
    CHECK(u[1] == Approx(2 * M_PI - 3.0));
    CHECK(u[2] == Approx(3.0));
}

TEST_CASE("condition batteries", "[boundary]") {
    CHECK(all_hold(theorem1_battery(catalog("automorphism:b=0.5"), 1.0)));
    CHECK(all_hold(theorem1_battery(catalog("power:n=2"), 1.0)));
    for (const auto& c : theorem1_battery(catalog("constant:c=0.3"), std::polar(1.0, 2.0)))
        CHECK(c.verdict == Verdict::fails);

    auto t2 = theorem2_battery(catalog("blaschke2:a=0.5"), 1.0);
    CHECK(battery_status(t2) == BatteryStatus::holds);
    CHECK(battery_status(theorem2_battery(catalog("identity"), 1.0)) == BatteryStatus::holds);

    auto G = G_disk();
    CHECK(battery_status(theorem1_battery(G, 1.0)) == BatteryStatus::holds);
    auto g2 = theorem2_battery(G, 1.0);
    CHECK(find(g2, "T2a").verdict == Verdict::fails);
    CHECK(find(g2, "T2d").verdict == Verdict::fails);
    for (const auto& c : g2) CHECK_FALSE(c.rule.empty());
}

TEST_CASE("classification", "[boundary]") {
    auto psi = classify(catalog("automorphism:b=0.5"), 1.0);
    CHECK(psi.classification == Classification::strong);
    auto phi = classify(catalog("blaschke2:a=0.5"), 1.0);
    CHECK(phi.classification == Classification::strong);
    REQUIRE(phi.angular_derivative);
    CHECK(phi.angular_derivative->modulus == Approx(4.0).margin(1e-6));
    auto G = classify(catalog("hp:log-slow"), 1.0);
    CHECK(G.classification == Classification::weak_only);
    CHECK(G.map_domain == Domain::half_plane);
    auto c = classify(catalog("constant:c=0.3"), 1.0);
    CHECK(c.classification == Classification::none);
    CHECK_FALSE(c.boundary_unimodular);

    // strong implies every weak condition holds
    for (const char* id : {"identity", "power:n=2", "automorphism:b=0.5"}) {
        auto r = classify(catalog(id), 1.0);
        REQUIRE(r.classification == Classification::strong);
        for (const auto& c : theorem1_battery(catalog(id), 1.0)) CHECK(c.verdict == Verdict::holds);
    }
}

TEST_CASE("arg phi' converging to path-dependent values is not a limit", "[boundary]") {
    // 1 - sqrt(1 - z): arg phi' -> -arg(1 - z)/2 along each ray, D_h -> 1/2
    auto m = SelfMap::parse("1-sqrt(1-z)", Domain::disk);
    bool seen = false;
    for (const auto& c : theorem1_battery(m, 1.0))
        if (c.id == "T1c'") {
            seen = true;
            CHECK(c.verdict == Verdict::fails);
        }
    CHECK(seen);
    auto r = classify(m, 1.0);
    CHECK(r.classification == Classification::none);
    CHECK(r.weak_status == BatteryStatus::fails);
}

TEST_CASE("classification is rotation equivariant", "[boundary]") {
    auto sq = catalog("power:n=2");
    Complex s(0.0, 1.0);
    // z^2 at i maps to -1: rotate so the boundary value differs from sigma
    auto a = classify(sq, s), b = classify(rotate_to_one(sq, s), 1.0);
    CHECK(a.classification == b.classification);
    REQUIRE(a.conditions.size() == b.conditions.size());
    for (std::size_t i = 0; i < a.conditions.size(); ++i) {
        INFO(a.conditions[i].id);
        CHECK(a.conditions[i].verdict == b.conditions[i].verdict);
    }
}

TEST_CASE("preimage curve of the real axis", "[boundary]") {
    auto lin = trace_gamma(catalog("hp:affine:lambda=2"), 4.0, 60);
    REQUIRE_FALSE(lin.truncated);
    CHECK(lin.samples.front().point.real() == Approx(2.0).epsilon(1e-14));
    for (const auto& s : lin.samples) {
        CHECK(std::abs(s.point.imag()) < 1e-14);
        CHECK(s.point.real() == Approx(2.0 + s.s).epsilon(1e-12));
    }

    auto z2 = trace_gamma(catalog("hp:z2"), 10.0, 80);
    REQUIRE_FALSE(z2.truncated);
    for (const auto& s : z2.samples) {
        double t = s.target;
        CHECK(s.point.real() == Approx(t + std::sqrt(t * t - 1)).epsilon(1e-12));
        CHECK(std::abs(s.point.imag()) < 1e-12);
    }
    CHECK(z2.re_ratio.verdict == Verdict::holds);
    CHECK(z2.max_relative_imag < 1e-9);
    CHECK(z2.targets_increasing);

    auto sq = trace_gamma(catalog("hp:sqrt:c=1"), 10.0, 80);
    REQUIRE_FALSE(sq.truncated);
    CHECK(sq.max_k_to_axis < 1.0);
    CHECK(sq.targets_increasing);
    CHECK(sq.max_relative_imag < 1e-9);
    CHECK(sq.arg_decay.verdict != Verdict::fails);

    auto G = trace_gamma(catalog("hp:log-slow"), 2.0, 80);
    CHECK(G.targets_increasing);
    CHECK(G.max_relative_imag < 1e-9);
    CHECK_THROWS_AS(trace_gamma(catalog("power:n=2"), 1.0, 10), std::invalid_argument);
}
