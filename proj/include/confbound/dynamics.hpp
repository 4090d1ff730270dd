#pragma once

// Forward and backward iteration: Denjoy-Wolff point, boundary fixed points,
// backward orbits at a repulsive point, pre-model regularity and the
// asymptotic step of a regular backward orbit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "boundary.hpp"

namespace confbound {

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DenjoyWolff {
    Complex point;
    bool interior = false;
    bool converged = false;
    int iterations = 0;
    std::string diagnostic;
};

inline DenjoyWolff denjoy_wolff(const SelfMap& m, int max_iterations = 20000) {
    require_disk(m, "denjoy_wolff");
    DenjoyWolff out;
    std::vector<QComplex> z{QComplex(0), QComplex(QReal(0.5)), QComplex(QReal(0), QReal(-0.5))};
    auto diameter = [&] {
        QReal d = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) d = boost::multiprecision::fmax(d, geo::distance_disk(z[i], z[j]));
        return d;
    };
    for (int it = 1; it <= max_iterations; ++it) {
        for (auto& p : z) p = m.eval(p).value;
        out.iterations = it;
        bool near_boundary = std::all_of(z.begin(), z.end(), [](const QComplex& p) {
            return num::abs(p) > QReal(1) - QReal(1e-9);
        });
        if (near_boundary) {
            QComplex c = z[0] / QComplex(num::abs(z[0]));
            out.point = num::to_double(c);
            out.converged = true;
            return out;
        }
        if (diameter() < QReal(1e-9)) {
            out.converged = true;
            out.interior = true;
            break;
        }
    }
    if (!out.converged) {
        out.point = num::to_double(z[0]);
        out.diagnostic = "iterates do not contract (rotation-like map)";
        return out;
    }
    QComplex p = z[0];
    for (int k = 0; k < 50; ++k) {
        Dual<QComplex> r = m.eval(p);
        QComplex den = r.deriv - QComplex(1);
        if (num::abs(den) == QReal(0)) break;
        QComplex step = (r.value - p) / den;
        p -= step;
        if (num::abs(step) < QReal(1e-30)) break;
    }
    out.point = num::to_double(p);
    return out;
}

enum class FixedPointType { attracting, neutral, repulsive, super_repulsive };

inline const char* fixed_point_type_name(FixedPointType t) {
    switch (t) {
        case FixedPointType::attracting: return "attracting";
        case FixedPointType::neutral: return "neutral";
        case FixedPointType::repulsive: return "repulsive";
        default: return "super-repulsive";
    }
}

struct BoundaryFixedPoint {
    Complex sigma;
    double derivative = 0;  // infinity for super-repulsive points
    FixedPointType type = FixedPointType::neutral;
};

namespace detail {

// arg(phi(r e^{it}) e^{-it}) near the circle
inline double boundary_twist(const SelfMap& m, double t) {
    QReal r = QReal(1) - QReal(1e-12);
    QComplex u(boost::multiprecision::cos(QReal(t)), boost::multiprecision::sin(QReal(t)));
    QComplex v = m.eval(u * QComplex(r)).value;
    return num::to_double(num::arg(v * num::conj(u)));
}

inline double boundary_gap(const SelfMap& m, double t) {
    QReal r = QReal(1) - QReal(1e-12);
    QComplex u(boost::multiprecision::cos(QReal(t)), boost::multiprecision::sin(QReal(t)));
    return num::to_double(num::abs(m.eval(u * QComplex(r)).value - u));
}

}  // namespace detail

// Sign changes of the boundary twist on a grid, refined by bisection. Tangential
// touches without a sign change are missed at any resolution.
inline std::vector<BoundaryFixedPoint> boundary_fixed_points(const SelfMap& m, int resolution = 720,
                                                             const BoundaryOptions& o = {}) {
    require_disk(m, "boundary_fixed_points");
    if (resolution < 8) throw std::invalid_argument("resolution must be at least 8");
    std::vector<double> roots;
    // cells offset by half a step so that +-1 are not grid nodes
    std::vector<double> theta(resolution), h(resolution);
    for (int i = 0; i < resolution; ++i) {
        theta[i] = -M_PI + 2 * M_PI * (i + 0.5) / resolution;
        h[i] = detail::boundary_twist(m, theta[i]);
    }
    for (int i = 0; i < resolution; ++i) {
        int j = (i + 1) % resolution;
        double a = theta[i], b = j == 0 ? theta[0] + 2 * M_PI : theta[j], ha = h[i];
        if (std::abs(h[j] - h[i]) > M_PI) continue;  // branch jump of arg
        if (h[i] * h[j] > 0) continue;
        for (int k = 0; k < 80 && b - a > 1e-15; ++k) {
            double c = 0.5 * (a + b), hc = detail::boundary_twist(m, c);
            if (hc == 0.0) a = b = c;
            else if ((hc < 0) == (ha < 0)) {
                a = c;
                ha = hc;
            } else {
                b = c;
            }
        }
        double t = 0.5 * (a + b);
        roots.push_back(t > M_PI ? t - 2 * M_PI : t);
    }
    std::vector<BoundaryFixedPoint> out;
    for (double t : roots) {
        if (detail::boundary_gap(m, t) > 1e-6) continue;  // twist vanishes but the modulus is off
        Complex s = std::polar(1.0, t);
        if (std::abs(s.imag()) < 1e-13) s = Complex(s.real() > 0 ? 1.0 : -1.0, 0.0);
        bool dup = std::any_of(out.begin(), out.end(), [&](const BoundaryFixedPoint& p) {
            return std::abs(p.sigma - s) < 1e-9;
        });
        if (dup) continue;
        BoundaryFixedPoint p;
        p.sigma = s;
        try {
            AngularDerivative a = angular_derivative(m, s, o.path(s, 0.0), o.trend, o.unimodular_tol);
            if (a.infinite) {
                p.derivative = std::numeric_limits<double>::infinity();
                p.type = FixedPointType::super_repulsive;
            } else {
                p.derivative = a.modulus;
                p.type = std::abs(a.modulus - 1.0) <= 1e-6 ? FixedPointType::neutral
                         : a.modulus < 1.0                ? FixedPointType::attracting
                                                          : FixedPointType::repulsive;
            }
        } catch (const MissingBoundaryValue&) {
            continue;
        }
        out.push_back(p);
    }
    return out;
}

struct BackwardOrbit {
    std::vector<DiskPoint> points;
    std::vector<QComplex> exact;  // same points in quad precision
    std::vector<double> steps;    // k(z_n, z_{n+1})
    std::vector<double> residuals;
    bool regular = false;
    bool steps_monotone = true;
    bool truncated = false;
    std::optional<Complex> limit_point;
    Complex sigma;
    double derivative_at_sigma = 0;
    std::uint64_t seed = 0;
    int restarts = 0;
    std::string diagnostic;
};

namespace detail {

inline std::optional<QComplex> newton_preimage(const SelfMap& m, QComplex target, QComplex seed) {
    QComplex z = seed;
    for (int it = 0; it < 80; ++it) {
        if (!(num::abs(z) < QReal(1))) return std::nullopt;
        Dual<QComplex> r = m.eval_unchecked(z);
        if (num::abs(r.deriv) == QReal(0)) return std::nullopt;
        QComplex step = (r.value - target) / r.deriv;
        // damp steps that would leave the disk
        while (!(num::abs(z - step) < QReal(1)) && num::abs(step) > QReal(1e-40)) step *= QComplex(QReal(0.5));
        z -= step;
        if (num::abs(step) <= QReal(1e-30)) break;
    }
    if (num::abs(z) < QReal(1) && num::abs(m.eval_unchecked(z).value - target) < QReal(1e-24)) return z;
    return std::nullopt;
}

// All roots of P - t Q from the companion matrix, nearest to the seed.
inline std::optional<QComplex> companion_preimage(const expr::Rational& r, QComplex target, QComplex seed) {
    Complex t = num::to_double(target);
    expr::Poly p(std::max(r.num.size(), r.den.size()), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < r.num.size(); ++i) p[i] += r.num[i];
    for (std::size_t i = 0; i < r.den.size(); ++i) p[i] -= t * r.den[i];
    while (p.size() > 1 && std::abs(p.back()) < 1e-300) p.pop_back();
    int d = static_cast<int>(p.size()) - 1;
    if (d < 1) return std::nullopt;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p[i] / p[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) return std::nullopt;
    Complex s = num::to_double(seed), best;
    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        Complex z = es.eigenvalues()(i);
        if (std::abs(z) < 1.0 && std::abs(z - s) < dist) {
            dist = std::abs(z - s);
            best = z;
        }
    }
    if (!std::isfinite(dist)) return std::nullopt;
    return num::to_quad(best);
}

}  // namespace detail

// z_{n+1} solves phi(z_{n+1}) = z_n; Newton seeded on the linearization at sigma.
inline BackwardOrbit backward_orbit(const SelfMap& m, DiskPoint z0, Complex sigma, int length,
                                    std::uint64_t seed = 1, const BoundaryOptions& o = {}) {
    require_disk(m, "backward_orbit");
    require_unimodular(sigma);
    if (length < 2) throw std::invalid_argument("orbit length must be at least 2");
    AngularDerivative a = angular_derivative(m, sigma, o.path(sigma, 0.0), o.trend, o.unimodular_tol);
    if (a.infinite || !(a.modulus > 1.0 + 1e-9))
        throw std::invalid_argument("backward_orbit needs a repulsive boundary fixed point");
    BackwardOrbit orb;
    orb.sigma = sigma;
    orb.derivative_at_sigma = a.modulus;
    orb.seed = seed;
    QComplex s = boundary_point_quad(sigma), lam(QReal(a.modulus));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 1.0);
    auto rational = expr::rational_form(m.root());
    orb.exact.push_back(num::to_quad(z0.value()));
    orb.points.push_back(z0);
    for (int n = 0; n + 1 < length; ++n) {
        QComplex zn = orb.exact.back();
        QComplex guess = s + (zn - s) / lam;
        std::optional<QComplex> next = detail::newton_preimage(m, zn, guess);
        auto accept = [&](const std::optional<QComplex>& c) {
            return c && num::abs(m.eval_unchecked(*c).value - zn) < QReal(1e-10) &&
                   num::abs(*c - s) < num::abs(zn - s);
        };
        if (!accept(next) && rational) {
            auto r = detail::companion_preimage(*rational, zn, guess);
            if (r) next = detail::newton_preimage(m, zn, *r);
        }
        for (int k = 0; k < 8 && !accept(next); ++k) {
            ++orb.restarts;
            QReal scale = QReal(0.1) * num::abs(guess - s);
            QComplex g = guess + QComplex(scale * QReal(jitter(rng)), scale * QReal(jitter(rng)));
            next = detail::newton_preimage(m, zn, g);
        }
        if (!accept(next)) {
            orb.truncated = true;
            orb.diagnostic = "Newton failed at step " + std::to_string(n + 1);
            break;
        }
        Complex d = num::to_double(*next);
        if (!(std::abs(d) < 1.0)) {
            orb.truncated = true;
            orb.diagnostic = "orbit reached double-precision boundary at step " + std::to_string(n + 1);
            break;
        }
        orb.residuals.push_back(num::to_double(num::abs(m.eval_unchecked(*next).value - zn)));
        orb.steps.push_back(num::to_double(geo::distance_disk(zn, *next)));
        orb.exact.push_back(*next);
        orb.points.emplace_back(d);
    }
    for (std::size_t i = 0; i + 1 < orb.steps.size(); ++i)
        if (orb.steps[i] > orb.steps[i + 1] + 1e-9) orb.steps_monotone = false;
    if (!orb.steps.empty()) {
        double sup = *std::max_element(orb.steps.begin(), orb.steps.end());
        bool bounded = sup < orb.steps.back() + 1e-6;
        bool escapes = num::abs(orb.exact.back() - s) < QReal(1e-6);
        orb.regular = bounded && escapes && orb.steps.size() >= 2;
        if (escapes) orb.limit_point = sigma;
    }
    return orb;
}

enum class PreModelVerdict { regular, irregular, undecided };

inline const char* premodel_verdict_name(PreModelVerdict v) {
    switch (v) {
        case PreModelVerdict::regular: return "regular";
        case PreModelVerdict::irregular: return "irregular";
        default: return "undecided";
    }
}

struct PreModelReport {
    Complex sigma;
    double derivative = 0;  // phi'(sigma) > 1
    double lambda = 0;
    int n0 = 0;
    double mu = 0;
    std::vector<double> products;      // D_h phi^m(z_{n0+m}), m = 1..
    std::vector<double> increments;    // products - mu
    std::vector<double> partial_sums;
    double rho_measured = 0, rho_formula = 0, theta = 0;
    PreModelVerdict verdict = PreModelVerdict::undecided;
    std::string rule;
    double mu_shifted = 0;  // mu recomputed from n0 + 1, mapped back by D_h phi(z_{n0+1})
    bool stable = false;    // verdict and mu unchanged by the shift
};

struct StepLimit {
    double rho_measured = 0;
    double rho_formula = 0;
    double theta = 0;
};

inline StepLimit step_limit_check(const BackwardOrbit& orbit, double derivative, std::optional<double> theta = {}) {
    if (orbit.steps.size() < 4) throw InsufficientData("insufficient orbit");
    StepLimit r;
    r.rho_measured = num::to_double(extrapolate_limit(orbit.steps).value);
    if (theta) {
        r.theta = *theta;
    } else {
        QComplex s = boundary_point_quad(orbit.sigma);
        std::vector<double> args;
        for (const QComplex& z : orbit.exact) args.push_back(num::to_double(num::arg(QComplex(1) - num::conj(s) * z)));
        r.theta = num::to_double(extrapolate_limit(unwrap(args)).value);
    }
    Complex e = std::polar(1.0, 2.0 * r.theta);
    r.rho_formula = 2.0 * std::atanh((derivative - 1.0) / std::abs(e * derivative + 1.0));
    return r;
}

namespace detail {

struct MuFit {
    std::vector<QReal> products;
    QReal mu;
};

inline MuFit mu_products(const SelfMap& m, const BackwardOrbit& orbit, int n0) {
    MuFit f;
    QReal prod(1);
    for (std::size_t j = n0 + 1; j < orbit.exact.size(); ++j) {
        prod *= distortion_value(m, orbit.exact[j]);
        f.products.push_back(prod);
    }
    f.mu = extrapolate_limit(f.products).value;
    return f;
}

inline PreModelVerdict summability(const std::vector<double>& inc, const TrendThresholds& t, std::string& rule) {
    std::vector<double> mag;
    for (double v : inc) mag.push_back(std::abs(v));
    SeriesVerdict s = decide_series(mag);
    if (s.verdict == Convergence::convergent) {
        rule = s.rule;
        return PreModelVerdict::regular;
    }
    std::vector<double> idx, val;
    for (std::size_t i = mag.size() / 2; i < mag.size(); ++i)
        if (mag[i] > 0) {
            idx.push_back(static_cast<double>(i + 1));
            val.push_back(mag[i]);
        }
    if (val.size() < 4) {
        rule = "too few significant increments";
        return PreModelVerdict::undecided;
    }
    LineFit f = fit_log(idx, val, true);
    if (f.slope < t.summable_slope) {
        rule = "power-law increments with summable slope";
        return PreModelVerdict::regular;
    }
    if (s.verdict == Convergence::divergent || f.slope > -1.0) {
        rule = "increments not summable (tail slope " + std::to_string(f.slope) + ")";
        return PreModelVerdict::irregular;
    }
    rule = "tail slope between summability thresholds";
    return PreModelVerdict::undecided;
}

}  // namespace detail

inline PreModelReport premodel_analysis(const SelfMap& m, const BackwardOrbit& orbit,
                                        const TrendThresholds& t = {}) {
    require_disk(m, "premodel_analysis");
    PreModelReport r;
    r.sigma = orbit.sigma;
    r.derivative = orbit.derivative_at_sigma;
    r.lambda = r.derivative;
    int n = static_cast<int>(orbit.exact.size());
    int n0 = 0;
    for (int i = 0; i < n; ++i)
        if (!(num::to_double(num::abs(m.eval(orbit.exact[i]).deriv)) > 1e-12)) n0 = i;
    r.n0 = n0;
    if (n - 1 - n0 < 12) throw InsufficientData("insufficient orbit");
    auto fit = detail::mu_products(m, orbit, n0);
    r.mu = num::to_double(fit.mu);
    QReal sum(0);
    for (const QReal& p : fit.products) {
        r.products.push_back(num::to_double(p));
        QReal d = p - fit.mu;
        sum += d;
        r.increments.push_back(num::to_double(d));
        r.partial_sums.push_back(num::to_double(sum));
    }
    r.verdict = detail::summability(r.increments, t, r.rule);
    if (r.derivative > 1.0 && orbit.steps.size() >= 4) {
        StepLimit s = step_limit_check(orbit, r.derivative);
        r.rho_measured = s.rho_measured;
        r.rho_formula = s.rho_formula;
        r.theta = s.theta;
    }
    // The limit for n0 + 1 is mu / D_h phi(z_{n0+1}).
    if (n - 2 - n0 >= 12) {
        auto shifted = detail::mu_products(m, orbit, n0 + 1);
        r.mu_shifted = num::to_double(shifted.mu * distortion_value(m, orbit.exact[n0 + 1]));
        std::vector<double> inc;
        for (const QReal& p : shifted.products) inc.push_back(num::to_double(p - shifted.mu));
        std::string rule;
        r.stable = detail::summability(inc, t, rule) == r.verdict && std::abs(r.mu_shifted - r.mu) < 2e-4;
        if (!r.stable && r.verdict != PreModelVerdict::undecided) {
            r.verdict = PreModelVerdict::undecided;
            r.rule += "; verdict changes when n0 is shifted";
        }
    }
    return r;
}

// max over a sector grid of |f(F(z)) - F(lambda z)| / max(1, |F(lambda z)|)
inline double functional_equation_residual(const SelfMap& f, const SelfMap& F, double lambda, int samples = 400) {
    if (f.domain() != Domain::half_plane || F.domain() != Domain::half_plane)
        throw std::invalid_argument("functional_equation_residual needs half-plane maps");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    int side = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    double worst = 0;
    for (int i = 0; i < side; ++i) {
        double radius = std::exp(std::log(0.5) + (std::log(50.0) - std::log(0.5)) * i / (side - 1));
        for (int j = 0; j < side; ++j) {
            double angle = -M_PI / 3 + (2 * M_PI / 3) * j / (side - 1);
            QComplex z = num::to_quad(std::polar(radius, angle));
            QComplex lhs = f.eval(F.eval(z).value).value;
            QComplex rhs = F.eval(z * QComplex(QReal(lambda))).value;
            double res = num::to_double(num::abs(lhs - rhs) / boost::multiprecision::fmax(QReal(1), num::abs(rhs)));
            worst = std::max(worst, res);
        }
    }
    return worst;
}

}  // namespace confbound
