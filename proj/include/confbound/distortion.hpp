#pragma once

// Hyperbolic distortion D_h, difference quotients, Schwarz-Pick refinements,
// the integral I(phi, sigma) and its discrete counterparts.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "extrapolation.hpp"
#include "maps.hpp"
#include "path.hpp"

namespace confbound {

// Numerator and denominator of D_h so that 1 - D_h can be formed without
// subtracting two nearly equal quotients.
template <class C> struct DistortionParts {
    real_t<C> top;     // (1-|z|^2)|phi'|  or  Re z |F'|
    real_t<C> bottom;  // 1-|phi|^2        or  Re F
};

template <class C> DistortionParts<C> distortion_parts(const SelfMap& m, const C& p) {
    Dual<C> r = m.eval(p);
    if (m.domain() == Domain::disk)
        return {num::one_minus_mod2(p) * num::abs(r.deriv), num::one_minus_mod2(r.value)};
    return {num::re(p) * num::abs(r.deriv), num::re(r.value)};
}

template <class C> real_t<C> distortion_value(const SelfMap& m, const C& p) {
    auto d = distortion_parts(m, p);
    return d.top / d.bottom;
}

template <class C> real_t<C> distortion_defect(const SelfMap& m, const C& p) {
    auto d = distortion_parts(m, p);
    return (d.bottom - d.top) / d.bottom;
}

inline void require_interior(const SelfMap& m, Complex p) {
    if (!is_interior(m.domain(), p)) throw std::domain_error("point must be interior");
}

inline double hyperbolic_distortion(const SelfMap& m, Complex p) {
    require_interior(m, p);
    return distortion_value(m, p);
}

inline void require_disk(const SelfMap& m, const char* op) {
    if (m.domain() != Domain::disk)
        throw std::invalid_argument(std::string(op) + " requires a disk map");
}

// phi*(z,w) = [(1 - conj(w) z)/(z - w)] [(phi(z) - phi(w))/(1 - conj(phi(w)) phi(z))]
template <class C> C difference_quotient(const SelfMap& m, const C& z, const C& w) {
    C fz = m.eval(z).value, fw = m.eval(w).value;
    return ((C(1) - num::conj(w) * z) / (z - w)) * ((fz - fw) / (C(1) - num::conj(fw) * fz));
}

inline Complex hyperbolic_difference_quotient(const SelfMap& m, Complex z, Complex w) {
    require_disk(m, "hyperbolic_difference_quotient");
    require_interior(m, z);
    require_interior(m, w);
    if (z == w) throw std::invalid_argument("coincident points: use hyperbolic_derivative");
    return difference_quotient(m, z, w);
}

inline Complex hyperbolic_derivative(const SelfMap& m, Complex w) {
    require_disk(m, "hyperbolic_derivative");
    require_interior(m, w);
    Dual<Complex> r = m.eval(w);
    return num::one_minus_mod2(w) * r.deriv / num::one_minus_mod2(r.value);
}

struct SandwichBounds {
    double lower = 0, middle = 0, upper = 0;
    bool ordered = true;
};

// e^{-k} sinh(k) delta <= k(z,w) - k(phi z, phi w) <= e^{k} sinh(k) delta,
// delta = 1 - D_h phi(w), k = k(z,w).
inline SandwichBounds sandwich_bounds(const SelfMap& m, Complex z, Complex w, double slack = 1e-10) {
    require_disk(m, "sandwich_bounds");
    require_interior(m, z);
    require_interior(m, w);
    QComplex zq = num::to_quad(z), wq = num::to_quad(w);
    QReal k = geo::distance_disk(zq, wq);
    QReal kk = geo::distance_disk(m.eval(zq).value, m.eval(wq).value);
    // Schwarz-Pick gives delta >= 0; clamp rounding below zero
    QReal delta = boost::multiprecision::fmax(QReal(0), distortion_defect(m, wq));
    SandwichBounds b;
    b.lower = num::to_double(num::exp(-k) * boost::multiprecision::sinh(k) * delta);
    b.middle = num::to_double(k - kk);
    b.upper = num::to_double(num::exp(k) * boost::multiprecision::sinh(k) * delta);
    b.ordered = b.lower <= b.middle + slack && b.middle <= b.upper + slack;
    return b;
}

// D_h > 1 - 1e-12 at five fixed probe points.
inline bool looks_like_automorphism(const SelfMap& m) {
    const Complex probes[] = {{0.0, 0.0}, {0.5, 0.0}, {0.0, -0.3}, {-0.4, 0.45}, {0.2, 0.6}};
    for (Complex p : probes) {
        Complex q = m.domain() == Domain::disk ? p : geo::cayley_inverse(p);
        if (!(distortion_value(m, q) > 1.0 - 1e-12)) return false;
    }
    return true;
}

struct GolusinResult {
    bool distance_bound = false;  // k(D_h(z), D_h(w)) <= 2 k(z,w)
    bool ratio_bound = false;     // e^{-2k} <= (1-D_h(z))/(1-D_h(w)) <= e^{2k}
    double distortion_distance = 0;
    double twice_distance = 0;
    double ratio = 1, lower = 1, upper = 1;
    bool holds() const { return distance_bound && ratio_bound; }
};

inline GolusinResult golusin_bounds(const SelfMap& m, Complex z, Complex w, double slack = 1e-10) {
    require_disk(m, "golusin_bounds");
    require_interior(m, z);
    require_interior(m, w);
    if (looks_like_automorphism(m))
        throw std::invalid_argument("golusin_bounds: automorphism input (both sides degenerate)");
    GolusinResult g;
    double k = geo::distance_disk(z, w);
    double dz = distortion_value(m, z), dw = distortion_value(m, w);
    g.distortion_distance = geo::distance_disk(Complex(dz, 0.0), Complex(dw, 0.0));
    g.twice_distance = 2.0 * k;
    g.distance_bound = g.distortion_distance <= g.twice_distance + slack;
    double ez = distortion_defect(m, z), ew = distortion_defect(m, w);
    g.ratio = ez / ew;
    g.lower = std::exp(-2.0 * k);
    g.upper = std::exp(2.0 * k);
    g.ratio_bound = g.ratio >= g.lower * (1 - slack) && g.ratio <= g.upper * (1 + slack);
    return g;
}

struct ProfileSample {
    Complex point;
    double u = 0;  // hyperbolic distance from the origin
    double r = 0;  // |z|
    double dh = 0;
    double residual = 0;  // 1 - D_h
};

struct DistortionProfile {
    ApproachPath path;
    std::vector<ProfileSample> samples;
    std::optional<double> extrapolated_limit;
    bool decided = false;
    Decision decision;  // D_h -> 1 along the path
};

inline DistortionProfile radial_profile(const SelfMap& m, Complex sigma, const ApproachPath& path,
                                        const TrendThresholds& t = {}) {
    require_unimodular(sigma);
    if (std::abs(path.vertex() - sigma) > 1e-12)
        throw std::invalid_argument("path vertex must equal sigma");
    DistortionProfile prof{path, {}, std::nullopt, false, {}};
    std::vector<QReal> values;
    std::vector<double> depth, residual;
    for (int n = 0; n < path.length(); ++n) {
        QComplex zq = m.domain() == Domain::disk ? path.disk_point(n) : path.halfplane_point(n);
        auto parts = distortion_parts(m, zq);
        QReal defect = (parts.bottom - parts.top) / parts.bottom;
        ProfileSample s;
        s.point = num::to_double(zq);
        s.u = path.depth(n);
        s.r = num::to_double(num::abs(path.disk_point(n)));
        s.residual = num::to_double(defect);
        s.dh = num::to_double(parts.top / parts.bottom);
        prof.samples.push_back(s);
        values.push_back(parts.top / parts.bottom);
        depth.push_back(s.u);
        residual.push_back(std::abs(s.residual));
    }
    auto lim = extrapolate_limit(values);
    prof.decision = decide_vanishing(depth, residual, t);
    if (lim.converged) {
        prof.extrapolated_limit = num::to_double(lim.value);
        prof.decided = true;
    } else {
        prof.extrapolated_limit = num::to_double(values.back());
        prof.decided = false;
    }
    return prof;
}

namespace detail {

template <class F>
double integrate_adaptive(F& f, double a, double b, double abs_tol, double rel_tol, int depth) {
    double err = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    // Boost's estimate never drops below a rounding floor of order eps |v|.
    double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(v);
    if (depth <= 0 || err <= std::max({abs_tol, rel_tol * std::abs(v), floor})) return v;
    double mid = 0.5 * (a + b);
    return integrate_adaptive(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1) +
           integrate_adaptive(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1);
}

}  // namespace detail

// Adaptive 15-point Gauss-Kronrod; stops on an absolute or relative error bound.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-13) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, abs_tol, rel_tol);
    return detail::integrate_adaptive(f, a, b, abs_tol, rel_tol, 24);
}

inline double quadrature_selftest() {
    return integrate([](double x) { return 2.0 * (1.0 - x) / ((1.0 + x) * (1.0 + x) * (1.0 + x)); },
                     0.0, 1.0);
}

struct IntegralEstimate {
    double value = 0;
    double tail_bound = 0;
    Convergence verdict = Convergence::undecided;
    std::vector<double> shells;
    double ratio = 0;
    std::string rule;
};

namespace detail {

inline QComplex radial_point(const SelfMap& m, Complex sigma, double u) {
    QReal uq(u);
    if (m.domain() != Domain::disk) return QComplex(num::exp(uq));
    QReal t = QReal(2) / (num::exp(uq) + QReal(1));
    return boundary_point_quad(sigma) * QComplex(QReal(1) - t);
}

// Zeros of phi' on the radius put a kink |phi'| into the integrand; GK15
// then needs thousands of bisections. Locate local minima of |phi'| on
// [a, b] that are small against their neighbours and refine them.
inline std::vector<double> derivative_kinks(const SelfMap& m, Complex sigma, double a, double b) {
    const int n = 32;
    const double h = (b - a) / n;
    auto at = [&](int i) { return std::max(0.0, a + h * i); };
    auto modulus = [&](double u) { return num::to_double(num::abs(m.eval(radial_point(m, sigma, u)).deriv)); };
    // one cell of padding on each side so minima next to a or b are seen
    std::vector<double> g(n + 3);
    for (int i = -1; i <= n + 1; ++i) g[i + 1] = modulus(at(i));
    std::vector<double> out;
    for (int i = 0; i <= n; ++i) {
        double c = g[i + 1], l = g[i], r = g[i + 2];
        if (!(c <= l && c <= r) || !(c < 0.5 * std::max(l, r))) continue;
        double lo = at(i - 1), hi = at(i + 1);
        for (int it = 0; it < 80; ++it) {
            double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (modulus(m1) < modulus(m2)) hi = m2;
            else lo = m1;
        }
        double k = 0.5 * (lo + hi);
        if (k > a && k < b) out.push_back(k);
    }
    return out;
}

}  // namespace detail

// 1 - D_h at hyperbolic depth u along the radius to sigma (disk), or at
// x = e^u on the real axis (half-plane, i.e. the radius to infinity).
inline double radial_defect_at_depth(const SelfMap& m, Complex sigma, double u) {
    return num::to_double(distortion_defect(m, detail::radial_point(m, sigma, u)));
}

// I(phi, sigma) = int_0^inf (1 - D_h phi(tanh(u/2) sigma)) du over unit shells.
inline IntegralEstimate integral_I(const SelfMap& m, Complex sigma, int shells = 32,
                                   const SeriesThresholds& s = {}) {
    if (shells < 4) throw std::invalid_argument("integral_I requires at least 4 shells");
    require_unimodular(sigma);
    IntegralEstimate est;
    if (m.is_known_automorphism()) {
        est.shells.assign(shells, 0.0);
        est.verdict = Convergence::convergent;
        est.rule = "automorphism";
        return est;
    }
    for (int n = 0; n < shells; ++n) {
        auto f = [&](double u) { return radial_defect_at_depth(m, sigma, u); };
        std::vector<double> cuts{static_cast<double>(n)};
        for (double k : detail::derivative_kinks(m, sigma, n, n + 1)) cuts.push_back(k);
        cuts.push_back(n + 1.0);
        double c = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) c += integrate(f, cuts[i], cuts[i + 1], 1e-12, 1e-12);
        est.shells.push_back(c);
    }
    for (double c : est.shells) est.value += c;
    SeriesVerdict v = decide_series(est.shells, s);
    est.verdict = v.verdict;
    est.ratio = v.ratio;
    est.tail_bound = v.tail_bound;
    est.rule = v.rule;
    return est;
}

struct DiscreteSumResult {
    double S = 0;
    double I = 0;
    double ratio = 0;
    double lower = 0, upper = 0;
    bool within = false;
    bool vacuous = false;  // S == 0 or a divergent side: bounds say nothing
    Convergence sum_verdict = Convergence::undecided;
    Convergence integral_verdict = Convergence::undecided;
};

// S = sum_{n<terms} (1 - D_h phi(psi_b^n(0))), psi_b^n(0) = tanh(n artanh b).
inline DiscreteSumResult discrete_sum_S(const SelfMap& m, double b, int terms, int shells = 32) {
    require_disk(m, "discrete_sum_S");
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("discrete_sum_S requires 0 < b < 1");
    if (terms < 1) throw std::invalid_argument("discrete_sum_S requires terms >= 1");
    DiscreteSumResult r;
    std::vector<double> t;
    QReal step = num::atanh(QReal(b));
    for (int n = 0; n < terms; ++n) {
        // 1 - tanh(u) = 2/(e^{2u} + 1); past 1e-30 the point is numerically on the circle
        QReal gap = QReal(2) / (num::exp(QReal(2) * step * n) + QReal(1));
        if (gap < QReal(1e-30)) break;
        t.push_back(num::to_double(distortion_defect(m, QComplex(QReal(1) - gap))));
    }
    for (double v : t) r.S += v;
    r.sum_verdict = decide_series(t).verdict;
    IntegralEstimate I = integral_I(m, 1.0, shells);
    r.I = I.value;
    r.integral_verdict = I.verdict;
    r.lower = 2.0 * b / ((1.0 + b) * (1.0 + b));
    r.upper = 2.0 * b / ((1.0 - b) * (1.0 - b));
    r.vacuous = !(r.S > 0.0) || r.sum_verdict != Convergence::convergent ||
                r.integral_verdict != Convergence::convergent;
    if (!r.vacuous) {
        r.ratio = r.I / r.S;
        r.within = r.ratio >= r.lower && r.ratio <= r.upper;
    }
    return r;
}

struct HalfPlaneSumResult {
    double sum = 0;
    std::vector<double> terms;
    SeriesVerdict verdict;
};

// sum_{n=1}^{terms} (1 - D_h F(lambda^n zeta0))
inline HalfPlaneSumResult discrete_sum_halfplane(const SelfMap& f, Complex zeta0, double lambda, int terms) {
    if (f.domain() != Domain::half_plane)
        throw std::invalid_argument("discrete_sum_halfplane requires a half-plane map");
    if (!(lambda > 1.0)) throw std::invalid_argument("discrete_sum_halfplane requires lambda > 1");
    if (!(zeta0.real() > 0.0)) throw std::domain_error("zeta0 must lie in the half-plane");
    HalfPlaneSumResult r;
    QComplex z = num::to_quad(zeta0);
    for (int n = 1; n <= terms; ++n) {
        QComplex p = z * boost::multiprecision::pow(QReal(lambda), n);
        r.terms.push_back(num::to_double(distortion_defect(f, p)));
    }
    for (double v : r.terms) r.sum += v;
    r.verdict = decide_series(r.terms);
    return r;
}

}  // namespace confbound
