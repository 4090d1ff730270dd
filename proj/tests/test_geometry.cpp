#include <catch_amalgamated.hpp>

#include <random>

#include <confbound/geometry.hpp>

using namespace confbound;
using Catch::Approx;

namespace {

Complex random_disk(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = std::tanh(3.0 * u(g));
    return std::polar(r * 0.999, 2 * M_PI * u(g));
}

Complex random_hp(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    return {std::exp(u(g)), 4.0 * u(g)};
}

Complex random_mu(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(std::exp(4 * u(g) - 2), 2 * M_PI * u(g) - M_PI);
}

}  // namespace

TEST_CASE("points enforce strict domain invariants", "[geometry]") {
    CHECK_NOTHROW(DiskPoint(0.999));
    CHECK_THROWS_AS(DiskPoint(1.0), std::domain_error);
    CHECK_THROWS_AS(DiskPoint(Complex(0.8, 0.6)), std::domain_error);
    CHECK_THROWS_AS(HalfPlanePoint(Complex(0.0, 2.0)), std::domain_error);
    CHECK_THROWS_AS(HalfPlanePoint(-1.0), std::domain_error);
    CHECK_NOTHROW(HalfPlanePoint(1e-300));
}

TEST_CASE("pseudo-hyperbolic distance", "[geometry]") {
    CHECK(pseudo_hyperbolic_distance(DiskPoint(0.0), DiskPoint(0.5)) == Approx(0.5).epsilon(1e-15));
    DiskPoint z(Complex(0.2, -0.4));
    CHECK(pseudo_hyperbolic_distance(z, z) == 0.0);

    // explicit automorphism sending w to 0
    Complex a = 0.3, w(0.0, 0.5);
    Complex moved = (a - w) / (1.0 - std::conj(w) * a);
    CHECK(pseudo_hyperbolic_distance(DiskPoint(a), DiskPoint(w)) == Approx(std::abs(moved)).epsilon(1e-14));
    CHECK(pseudo_hyperbolic_distance(DiskPoint(w), DiskPoint(a)) ==
          Approx(pseudo_hyperbolic_distance(DiskPoint(a), DiskPoint(w))).epsilon(1e-15));
}

TEST_CASE("hyperbolic distance on the disk", "[geometry]") {
    CHECK(hyperbolic_distance_disk(DiskPoint(0.0), DiskPoint(0.5)) == Approx(std::log(3.0)).epsilon(1e-14));
    DiskPoint z(Complex(-0.7, 0.1));
    CHECK(hyperbolic_distance_disk(z, z) == 0.0);

    double eps = 1e-12;
    double k = hyperbolic_distance_disk(DiskPoint(0.0), DiskPoint(1.0 - eps));
    QReal r(1.0 - eps);  // the double actually passed in
    double oracle = num::to_double(num::log((QReal(1) + r) / (QReal(1) - r)));
    CHECK(std::isfinite(k));
    CHECK(std::abs(k - oracle) / oracle < 1e-9);
    CHECK(k == Approx(std::log(2.0 / eps)).epsilon(1e-6));
}

TEST_CASE("near-boundary distances stay finite and monotone", "[geometry]") {
    double prev = 0.0;
    for (int e = 1; e <= 14; ++e) {
        double k = hyperbolic_distance_disk(DiskPoint(0.0), DiskPoint(1.0 - std::pow(10.0, -e)));
        CHECK(std::isfinite(k));
        CHECK(k > prev);
        prev = k;
    }
}

TEST_CASE("triangle inequality and isometry invariance", "[geometry]") {
    std::mt19937_64 g(11);
    for (int i = 0; i < 200; ++i) {
        DiskPoint a(random_disk(g)), b(random_disk(g)), c(random_disk(g));
        CHECK(hyperbolic_distance_disk(a, c) <=
              hyperbolic_distance_disk(a, b) + hyperbolic_distance_disk(b, c) + 1e-11);

        Complex beta = 0.9 * random_disk(g), rot = std::polar(1.0, 0.37 * i);
        auto psi = [&](Complex z) { return rot * (z + beta) / (1.0 + std::conj(beta) * z); };
        double before = hyperbolic_distance_disk(a, b);
        double after = hyperbolic_distance_disk(DiskPoint(psi(a)), DiskPoint(psi(b)));
        CHECK(std::abs(before - after) < 1e-11 * std::max(1.0, before));
    }
}

TEST_CASE("half-plane distance", "[geometry]") {
    CHECK(hyperbolic_distance_halfplane(HalfPlanePoint(1.0), HalfPlanePoint(3.0)) ==
          Approx(std::log(3.0)).epsilon(1e-14));
    HalfPlanePoint z(Complex(1.0, 1.0));
    CHECK(hyperbolic_distance_halfplane(z, z) == 0.0);
    CHECK(hyperbolic_distance_halfplane(HalfPlanePoint(0.02), HalfPlanePoint(7.0)) ==
          Approx(std::log(350.0)).epsilon(1e-13));

    std::mt19937_64 g(5);
    for (int i = 0; i < 200; ++i) {
        HalfPlanePoint a(random_hp(g)), b(random_hp(g));
        double kh = hyperbolic_distance_halfplane(a, b);
        double kd = hyperbolic_distance_disk(cayley(a), cayley(b));
        CHECK(std::abs(kh - kd) < 1e-11 * std::max(1.0, kh));
    }
}

TEST_CASE("L preserves half-plane distance", "[geometry]") {
    std::mt19937_64 g(8);
    HalfPlanePoint p(Complex(1.0, 1.0)), q(Complex(0.3, -2.0));
    for (int i = 0; i < 50; ++i) {
        Complex mu = random_mu(g);
        HalfPlanePoint lp = mobius_L(p, mu), lq = mobius_L(q, mu);
        CHECK(hyperbolic_distance_halfplane(lp, lp) == 0.0);
        CHECK(std::abs(hyperbolic_distance_halfplane(lp, lq) - hyperbolic_distance_halfplane(p, q)) < 1e-12);
    }
}

TEST_CASE("hyperbolic densities", "[geometry]") {
    CHECK(hyperbolic_density(DiskPoint(0.0)) == 2.0);
    CHECK(hyperbolic_density(HalfPlanePoint(1.0)) == 1.0);
    CHECK(hyperbolic_density(DiskPoint(0.5)) == Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(hyperbolic_density(HalfPlanePoint(Complex(0.25, 9.0))) == 4.0);
}

TEST_CASE("Cayley transform", "[geometry]") {
    CHECK(std::abs(cayley(HalfPlanePoint(1.0)).value()) == 0.0);
    CHECK(cayley_inverse(DiskPoint(0.0)).value() == Complex(1.0, 0.0));
    CHECK(std::abs(cayley(HalfPlanePoint(1e8)).value() - 1.0) < 1e-7);

    std::mt19937_64 g(3);
    for (int i = 0; i < 100; ++i) {
        Complex w = random_hp(g);
        Complex back = cayley_inverse(cayley(HalfPlanePoint(w))).value();
        CHECK(std::abs(back - w) < 1e-13 * std::max(1.0, std::abs(w)));
        Complex z = random_disk(g);
        CHECK(std::abs(cayley(cayley_inverse(DiskPoint(z))).value() - z) < 1e-13);
    }
}

TEST_CASE("angle gadget a(mu)", "[geometry]") {
    CHECK(mu_angle_gadget(Complex(0.0, 1.0)).value() == Approx(1.0).epsilon(1e-15));
    CHECK(mu_angle_gadget(-1.0).value() == 0.0);
    CHECK(mu_angle_gadget(2.0).is_infinite());
    CHECK_THROWS_AS(mu_angle_gadget(0.0), std::invalid_argument);
    CHECK_THROWS_AS(mu_angle_gadget(2.0).value(), std::logic_error);

    // no snapping near the positive axis: large but finite
    auto near = mu_angle_gadget(Complex(1.0, 1e-12));
    REQUIRE_FALSE(near.is_infinite());
    CHECK(near.value() == Approx(2e12).epsilon(1e-6));

    std::mt19937_64 g(17);
    for (int i = 0; i < 100; ++i) {
        Complex mu = random_mu(g);
        double rho = std::exp(static_cast<double>(i % 7) - 3.0);
        CHECK(mu_angle_gadget(rho * mu).value() == Approx(mu_angle_gadget(mu).value()).epsilon(1e-12));
        CHECK(mu_angle_gadget(mu).value() == Approx(1.0 / std::tan(0.5 * std::arg(mu))).epsilon(1e-9));
    }
}

TEST_CASE("cotangent addition", "[geometry]") {
    std::mt19937_64 g(23);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        Complex m1 = random_mu(g), m2 = random_mu(g);
        auto a1 = mu_angle_gadget(m1), a2 = mu_angle_gadget(m2), a12 = mu_angle_gadget(m1 * m2);
        if (a12.is_infinite()) continue;
        auto sum = cot_addition(a1, a2);
        REQUIRE_FALSE(sum.is_infinite());
        double scale = std::max(1.0, std::abs(a12.value()));
        if (std::abs(a1.value() + a2.value()) < 1e-3) continue;
        CHECK(std::abs(sum.value() - a12.value()) < 1e-9 * scale);
        ++checked;
    }
    CHECK(checked > 250);
    CHECK(cot_addition(ExtendedReal::infinity(), ExtendedReal::finite(0.5)).value() == 0.5);
}

TEST_CASE("Mobius L normalization and halving", "[geometry]") {
    std::mt19937_64 g(29);
    for (int i = 0; i < 50; ++i) {
        Complex mu = random_mu(g);
        CHECK(std::abs(mobius_L(HalfPlanePoint(1.0), mu).value() - 1.0) < 1e-14);
        Complex d1 = mobius_L_derivative(HalfPlanePoint(1.0), mu);
        Complex t = std::conj(mu) * d1;
        CHECK(t.real() > 0.0);
        CHECK(std::abs(t.imag()) < 1e-12 * std::abs(t));

        Complex zeta(std::exp(0.1 * i - 2), 0.2 * i - 5);
        CHECK(mobius_L(HalfPlanePoint(zeta), mu).value().real() > 0.0);

        Complex d2 = mobius_L_derivative(HalfPlanePoint(2.0), mu);
        CHECK(mu_angle_gadget(d2).value() == Approx(mu_angle_gadget(mu).value() / 2).epsilon(1e-10).margin(1e-12));
    }
    HalfPlanePoint z(Complex(0.4, -1.5));
    CHECK(mobius_L(z, 2.0).value() == z.value());
    CHECK(std::abs(mobius_L(HalfPlanePoint(1.0), Complex(0.0, 1.0)).value() - 1.0) < 1e-15);
}

TEST_CASE("Stolz sector membership", "[geometry]") {
    StolzSpec s(1.0, M_PI / 4, 0.5);
    CHECK(s.contains(0.9));
    CHECK_FALSE(s.contains(1.0));
    CHECK_FALSE(s.contains(0.2));
    std::mt19937_64 g(31);
    Complex v = std::polar(1.0, 0.7);
    StolzSpec t(v, 1.0, 0.8);
    for (int i = 0; i < 500; ++i) {
        Complex z = random_disk(g);
        // reflection across the ray through the vertex
        Complex mirror = v * std::conj(std::conj(v) * z);
        CHECK(t.contains(z) == t.contains(mirror));
    }
    CHECK_THROWS_AS(StolzSpec(0.5, 0.3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(StolzSpec(1.0, M_PI / 2, 1.0), std::invalid_argument);
}
