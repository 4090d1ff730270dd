#include <catch_amalgamated.hpp>

#include <random>

#include <confbound/distortion.hpp>
#include <confbound/maps.hpp>

using namespace confbound;
using Catch::Approx;

namespace {

std::vector<std::string> catalog_ids() {
    return {"identity",         "rotation:theta=0.7",  "automorphism:b=0.3+0.2i", "power:n=2",
            "power:n=3",        "blaschke2:a=0.5",     "blaschke:zeros=0.2;-0.5i", "constant:c=0.25",
            "blaschke2:a=0",    "automorphism:b=-0.6"};
}

Complex random_disk(std::mt19937_64& g, double rmax = 0.95) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(rmax * std::sqrt(u(g)), 2 * M_PI * u(g));
}

Complex random_hp(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {std::exp(u(g)), 2.0 * u(g)};
}

}  // namespace

TEST_CASE("parse builds disk and half-plane maps", "[maps]") {
    auto phi = SelfMap::parse("z*(z-0.5)/(1-0.5*z)", Domain::disk);
    auto cat = catalog("blaschke2:a=0.5");
    std::mt19937_64 g(1);
    for (int i = 0; i < 50; ++i) {
        Complex z = random_disk(g);
        CHECK(std::abs(phi.eval(z).value - cat.eval(z).value) < 1e-15);
    }
    auto id = SelfMap::parse("z", Domain::disk);
    CHECK(id.eval(Complex(0.3, 0.1)).value == Complex(0.3, 0.1));
    auto G = SelfMap::parse("w/(1+log(1+w))", Domain::half_plane);
    CHECK(G.domain() == Domain::half_plane);
    CHECK_THROWS_AS(SelfMap::parse("w", Domain::disk), expr::ParseError);
}

TEST_CASE("evaluation with derivative", "[maps]") {
    auto sq = catalog("power:n=2");
    auto [v, d] = eval_with_derivative(sq, 0.5);
    CHECK(v == Complex(0.25, 0.0));
    CHECK(d == Complex(1.0, 0.0));
    CHECK(eval_with_derivative(sq, 0.9).second == Complex(1.8, 0.0));
    CHECK_THROWS_AS(eval_with_derivative(sq, 1.0), std::domain_error);

    auto doubling = SelfMap::parse("2*z", Domain::disk);
    CHECK_THROWS_AS(doubling.eval(Complex(0.7, 0.0)), DomainEscape);
}

TEST_CASE("dual derivative matches central differences", "[maps]") {
    std::mt19937_64 g(4);
    const double h = 1e-6;
    for (const auto& id : catalog_ids()) {
        auto m = catalog(id);
        for (int i = 0; i < 20; ++i) {
            Complex z = random_disk(g, 0.9);
            Complex d = m.eval(z).deriv;
            Complex fd = (m.eval(z + h).value - m.eval(z - h).value) / (2 * h);
            CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
        }
    }
}

TEST_CASE("iterates", "[maps]") {
    auto sq = catalog("power:n=2");
    CHECK(iterate(sq, 3).eval(Complex(0.9)).value.real() == Approx(0.43046721).epsilon(1e-14));
    auto it0 = iterate(sq, 0);
    CHECK(it0.eval(Complex(0.1, 0.2)).value == Complex(0.1, 0.2));
    for (double x : {0.1, 0.5, 0.8}) CHECK(iterate(sq, 2).eval(Complex(x)).deriv.real() == Approx(4 * x * x * x).epsilon(1e-14));
    CHECK_THROWS_AS(iterate(sq, -1), std::invalid_argument);
}

TEST_CASE("chain rule through composition", "[maps]") {
    std::mt19937_64 g(6);
    auto f = catalog("blaschke2:a=0.5"), h = catalog("automorphism:b=0.3+0.2i");
    auto fh = compose(f, h);
    for (int i = 0; i < 100; ++i) {
        Complex z = random_disk(g);
        Complex expect = f.eval(h.eval(z).value).deriv * h.eval(z).deriv;
        CHECK(std::abs(fh.eval(z).deriv - expect) < 1e-11 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("self-map validation", "[maps]") {
    auto aut = validate_self_map(catalog("automorphism:b=0.5"));
    CHECK(aut.valid);
    CHECK(aut.certificate.kind == Certificate::Kind::analytic);

    auto bad = validate_self_map(SelfMap::parse("2*z", Domain::disk));
    REQUIRE_FALSE(bad.valid);
    REQUIRE(bad.violation);
    CHECK(std::abs(bad.violation->witness) > 0.5);
    CHECK(std::abs(bad.violation->witness) < 0.7);

    auto G = validate_self_map(SelfMap::parse("w/(1+log(1+w))", Domain::half_plane));
    CHECK(G.valid);
    CHECK(G.certificate.kind == Certificate::Kind::sampled);
    CHECK_FALSE(G.certificate.grid.empty());

    auto parsed = validate_self_map(SelfMap::parse("z*(z-0.5)/(1-0.5*z)", Domain::disk));
    CHECK(parsed.valid);
    CHECK(parsed.certificate.max_observed < 1.0);
    CHECK_FALSE(validate_self_map(SelfMap::parse("w-1", Domain::half_plane)).valid);
}

TEST_CASE("half-plane conjugation", "[maps]") {
    std::mt19937_64 g(9);
    auto F = conjugate_to_halfplane(catalog("power:n=2"), 1.0);
    auto Fid = conjugate_to_halfplane(catalog("identity"), 1.0);
    for (int i = 0; i < 100; ++i) {
        Complex w = random_hp(g);
        Complex closed = (w * w + 1.0) / (2.0 * w);
        CHECK(std::abs(F.eval(w).value - closed) < 1e-12 * std::max(1.0, std::abs(closed)));
        CHECK(std::abs(Fid.eval(w).value - w) < 1e-12 * std::max(1.0, std::abs(w)));
    }
    auto phi = catalog("blaschke2:a=0.5");
    auto Fphi = conjugate_to_halfplane(phi, 1.0);
    auto back = conjugate_to_disk(Fphi, 1.0);
    for (int i = 0; i < 100; ++i) {
        Complex w = random_hp(g);
        Complex z = geo::cayley(w);
        CHECK(std::abs(hyperbolic_distortion(phi, z) - hyperbolic_distortion(Fphi, w)) < 1e-11);
        CHECK(std::abs(back.eval(z).value - phi.eval(z).value) < 1e-11);
    }
    Complex s = std::polar(1.0, 2.0);
    auto R = rotate_to_one(phi, s);
    CHECK(std::abs(R.eval(Complex(0.2, 0.1)).value - std::conj(s) * phi.eval(s * Complex(0.2, 0.1)).value) < 1e-15);
    CHECK_THROWS_AS(conjugate_to_halfplane(phi, 0.5), std::invalid_argument);
}

TEST_CASE("Blaschke products are unimodular on the circle", "[maps]") {
    auto phi = catalog("blaschke2:a=0.5");
    for (int k = 0; k < 360; ++k) {
        Complex e = std::polar(1.0, 2 * M_PI * k / 360.0);
        // linear extrapolation from two interior radii
        Complex a = phi.eval((1.0 - 1e-9) * e).value, b = phi.eval((1.0 - 2e-9) * e).value;
        CHECK(std::abs(std::abs(2.0 * a - b) - 1.0) < 1e-12);
    }
}

TEST_CASE("catalog rejects bad parameters", "[maps]") {
    CHECK_THROWS_AS(catalog("automorphism:b=1"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("power:n=0"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("blaschke2:a=1.2"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("hp:affine:lambda=-1"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("nosuch"), std::invalid_argument);
    for (const auto& id : {"hp:affine:lambda=0.5,c=1", "hp:z2", "hp:sqrt:c=2", "hp:log-slow", "hp:coth-premodel"})
        CHECK(catalog(id).domain() == Domain::half_plane);
}
