#include <catch_amalgamated.hpp>

#include <random>

#include <confbound/kernel.hpp>

using namespace confbound;
using Catch::Approx;

namespace {

const std::vector<std::string>& maps() {
    static const std::vector<std::string> ids{"identity", "rotation:theta=0.4", "automorphism:b=0.5",
                                              "power:n=2", "power:n=3", "blaschke2:a=0.5",
                                              "blaschke:zeros=0.2;-0.5i", "constant:c=0", "constant:c=0.3i"};
    return ids;
}

DiskPoint random_point(std::mt19937_64& g, double depth = 5.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return DiskPoint(std::polar(std::tanh(0.5 * depth * u(g)), 2 * M_PI * u(g)));
}

}  // namespace

TEST_CASE("kernel values", "[kernel]") {
    std::mt19937_64 g(41);
    auto id = catalog("identity"), zero = catalog("constant:c=0"), sq = catalog("power:n=2");
    for (int i = 0; i < 50; ++i) {
        DiskPoint z = random_point(g), w = random_point(g);
        CHECK(std::abs(kernel_eval(id, z, w) - 1.0) < 1e-12);
        Complex szego = 1.0 / (1.0 - std::conj(w.value()) * z.value());
        CHECK(std::abs(kernel_eval(zero, z, w) - szego) < 1e-12 * std::abs(szego));
    }
    CHECK(kernel_eval(zero, DiskPoint(0.0), DiskPoint(0.0)) == Complex(1.0, 0.0));
    CHECK(std::abs(kernel_eval(sq, DiskPoint(0.5), DiskPoint(0.5)) - 1.25) < 1e-15);
    CHECK(kernel_point(sq, DiskPoint(0.5)).norm_sq == Approx(1.25).epsilon(1e-15));
}

TEST_CASE("kernel is Hermitian and Cauchy-Schwarz holds", "[kernel]") {
    std::mt19937_64 g(42);
    for (const auto& s : maps()) {
        auto m = catalog(s);
        for (int i = 0; i < 200; ++i) {
            DiskPoint z = random_point(g), w = random_point(g);
            Complex a = kernel_eval(m, z, w), b = kernel_eval(m, w, z);
            CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::max(1.0, std::abs(a)));
            CHECK(std::abs(normalized_inner_product(m, z, w)) <= 1.0 + 1e-13);
            CHECK(std::abs(normalized_inner_product(m, z, z)) == Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("normalized inner product against the Julia-type quotient", "[kernel]") {
    auto sq = catalog("power:n=2");
    auto ratio = [&](const SelfMap& m, Complex z, Complex w) {
        Complex fz = m.eval(z).value, fw = m.eval(w).value;
        return geo::one_minus_rho2_disk(z, w) / geo::one_minus_rho2_disk(fz, fw);
    };
    CHECK(std::norm(normalized_inner_product(sq, DiskPoint(0.3), DiskPoint(0.6))) ==
          Approx(ratio(sq, 0.3, 0.6)).epsilon(1e-12));
    for (int i = 0; i < 10; ++i) CHECK(normalized_inner_product(catalog("identity"), DiskPoint(0.1 * i), DiskPoint(-0.05 * i)) == Complex(1.0, 0.0));

    std::mt19937_64 g(43);
    for (int i = 0; i < 10000; ++i) {
        auto m = catalog(maps()[i % maps().size()]);
        DiskPoint z = random_point(g, 4.0), w = random_point(g, 4.0);
        double lhs = std::norm(normalized_inner_product(m, z, w));
        CHECK(std::abs(lhs - ratio(m, z, w)) < 1e-12 * std::max(1.0, lhs));
    }
}

TEST_CASE("Gram matrices are positive semidefinite", "[kernel]") {
    std::mt19937_64 g(44);
    auto one = gram_matrix(catalog("power:n=2"), {DiskPoint(0.4)});
    CHECK(one.matrix.rows() == 1);
    CHECK(one.matrix(0, 0).real() > 0.0);
    CHECK(one.psd);

    std::vector<DiskPoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(random_point(g));
    CHECK(gram_matrix(catalog("power:n=2"), pts).psd);

    auto id = gram_matrix(catalog("identity"), pts);
    CHECK(id.psd);
    CHECK(id.rank == 1);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(std::abs(id.matrix(i, j) - 1.0) < 1e-12);

    for (const auto& s : maps()) {
        for (int n : {2, 6, 12}) {
            std::vector<DiskPoint> p;
            for (int i = 0; i < n; ++i) p.push_back(random_point(g, 3.0));
            INFO(s << " n=" << n);
            CHECK(gram_matrix(catalog(s), p).psd);
        }
    }
    CHECK_THROWS_AS(gram_matrix(catalog("identity"), {}), std::invalid_argument);
    CHECK_THROWS_AS(gram_matrix(catalog("identity"), {DiskPoint(0.1), DiskPoint(0.1)}), std::invalid_argument);
}

TEST_CASE("delta pseudometric", "[kernel]") {
    std::mt19937_64 g(45);
    auto zero = catalog("constant:c=0");
    for (int i = 0; i < 200; ++i) {
        DiskPoint z = random_point(g), w = random_point(g);
        CHECK(std::abs(delta_pseudometric(zero, z, w) - pseudo_hyperbolic_distance(z, w)) < 1e-13);
    }
    CHECK(delta_pseudometric(catalog("power:n=2"), DiskPoint(0.3), DiskPoint(0.3)) == 0.0);
    for (int i = 0; i < 1000; ++i) {
        auto m = catalog(maps()[i % maps().size()]);
        DiskPoint a = random_point(g), b = random_point(g), c = random_point(g);
        double ab = delta_pseudometric(m, a, b), bc = delta_pseudometric(m, b, c), ac = delta_pseudometric(m, a, c);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ac <= ab + bc + 1e-10);
    }
}

TEST_CASE("chain inequality", "[kernel]") {
    auto id = catalog("identity");
    auto c = chain_inequality_check(id, 0.3, Complex(0.1, 0.5));
    CHECK(c.holds());
    CHECK(std::abs(c.log_ratio) < 1e-15);
    CHECK(std::abs(c.difference) < 1e-15);
    CHECK(std::abs(c.root) < 1e-15);
    auto same = chain_inequality_check(catalog("power:n=2"), 0.4, 0.4);
    CHECK(same.holds());
    CHECK(same.log_ratio == 0.0);

    std::mt19937_64 g(46);
    for (int i = 0; i < 1000; ++i) {
        auto m = catalog(maps()[i % maps().size()]);
        CHECK(chain_inequality_check(m, random_point(g), random_point(g)).holds());
    }
}

TEST_CASE("chain inequality needs constant 2 near the diagonal", "[kernel]") {
    // z^2 near 0: difference ~ 2 eps, root ~ eps
    auto r = chain_inequality_check(catalog("power:n=2"), 1e-3, -1e-3);
    CHECK(r.holds());
    CHECK_FALSE(r.unit_constant_ok);
    CHECK(r.difference / r.root == Approx(2.0).epsilon(1e-3));
}

TEST_CASE("kernel boundary conditions", "[kernel]") {
    auto aut = kernel_boundary_condition(catalog("automorphism:b=0.5"), 1.0);
    CHECK(aut.c.verdict == Verdict::holds);
    CHECK(aut.c_second.verdict == Verdict::holds);
    auto phi = kernel_boundary_condition(catalog("blaschke2:a=0.5"), 1.0);
    CHECK(phi.c.verdict == Verdict::holds);
    CHECK(phi.c_second.verdict == Verdict::holds);
    auto G = kernel_boundary_condition(conjugate_to_disk(catalog("hp:log-slow")), 1.0);
    CHECK(G.c_second.verdict == Verdict::fails);
    CHECK(G.c.verdict != Verdict::holds);
    CHECK_FALSE(G.c_second.evidence_csv.empty());
}

TEST_CASE("kernel thresholds leave a 10x margin on strong maps", "[kernel]") {
    BoundaryOptions o;
    o.kernel_liminf_threshold = 10 * BoundaryOptions{}.kernel_liminf_threshold;
    for (const char* id : {"identity", "power:n=2", "automorphism:b=0.5", "blaschke2:a=0.5", "rotation:theta=1"}) {
        auto r = kernel_boundary_condition(catalog(id), 1.0, o);
        CHECK(r.c_prime.verdict == Verdict::holds);
        CHECK(r.c_second.verdict == Verdict::holds);
    }
    // a threshold above 1 cannot be met
    o.kernel_liminf_threshold = 0.9999;
    auto r = kernel_boundary_condition(catalog("power:n=2"), 1.0, o);
    CHECK(r.c_second.verdict == Verdict::fails);
}
