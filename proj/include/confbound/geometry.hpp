#pragma once

// Hyperbolic geometry of the unit disk D and the right half-plane H.

#include <cmath>
#include <stdexcept>
#include <string>

#include "precision.hpp"

namespace confbound {

class DiskPoint {
public:
    explicit DiskPoint(Complex value) : value_(value) {
        if (!(std::abs(value) < 1.0))
            throw std::domain_error("DiskPoint requires |z| < 1");
    }
    Complex value() const { return value_; }
    operator Complex() const { return value_; }

private:
    Complex value_;
};

class HalfPlanePoint {
public:
    explicit HalfPlanePoint(Complex value) : value_(value) {
        if (!(value.real() > 0.0) || !std::isfinite(value.imag()))
            throw std::domain_error("HalfPlanePoint requires Re w > 0");
    }
    Complex value() const { return value_; }
    operator Complex() const { return value_; }

private:
    Complex value_;
};

inline bool is_unimodular(Complex sigma, double tol = 1e-12) {
    return std::abs(std::abs(sigma) - 1.0) <= tol;
}

inline void require_unimodular(Complex sigma, const char* what = "boundary point") {
    if (!is_unimodular(sigma))
        throw std::invalid_argument(std::string(what) + " must be unimodular");
}

// A unimodular double lifted to quad and renormalized there, so that it is
// unimodular to quad precision rather than to double rounding.
inline QComplex boundary_point_quad(Complex sigma) {
    QComplex q = num::to_quad(sigma);
    return q / QComplex(num::abs(q));
}

// Angular sector at a boundary vertex: |z - sigma| < radius and
// |arg(1 - conj(sigma) z)| < aperture.
class StolzSpec {
public:
    StolzSpec(Complex vertex, double aperture, double radius)
        : vertex_(vertex), aperture_(aperture), radius_(radius) {
        require_unimodular(vertex, "Stolz vertex");
        if (!(aperture > 0.0 && aperture < M_PI / 2))
            throw std::invalid_argument("Stolz aperture must lie in (0, pi/2)");
        if (!(radius > 0.0)) throw std::invalid_argument("Stolz radius must be positive");
    }
    Complex vertex() const { return vertex_; }
    double aperture() const { return aperture_; }
    double radius() const { return radius_; }

    bool contains(Complex z) const {
        if (!(std::abs(z) < 1.0)) return false;
        if (!(std::abs(z - vertex_) < radius_)) return false;
        Complex t = 1.0 - std::conj(vertex_) * z;
        return std::abs(std::arg(t)) < aperture_;
    }

private:
    Complex vertex_;
    double aperture_;
    double radius_;
};

namespace geo {

// 1 - rho(z,w)^2 = (1-|z|^2)(1-|w|^2)/|1 - conj(w) z|^2, free of cancellation.
template <class C> real_t<C> one_minus_rho2_disk(const C& z, const C& w) {
    return num::one_minus_mod2(z) * num::one_minus_mod2(w) /
           num::norm(C(1) - num::conj(w) * z);
}

template <class C> real_t<C> rho_disk(const C& z, const C& w) {
    return num::abs(z - w) / num::abs(C(1) - num::conj(w) * z);
}

// k = log((1+rho)/(1-rho)) = 2 log1p(rho) - log(1 - rho^2).
template <class C> real_t<C> distance_disk(const C& z, const C& w) {
    using R = real_t<C>;
    R rho = rho_disk(z, w);
    if (rho == R(0)) return R(0);
    return R(2) * num::log1p(rho) - num::log(one_minus_rho2_disk(z, w));
}

template <class C> real_t<C> one_minus_rho2_halfplane(const C& z, const C& w) {
    return real_t<C>(4) * num::re(z) * num::re(w) / num::norm(z + num::conj(w));
}

template <class C> real_t<C> rho_halfplane(const C& z, const C& w) {
    return num::abs(z - w) / num::abs(z + num::conj(w));
}

template <class C> real_t<C> distance_halfplane(const C& z, const C& w) {
    using R = real_t<C>;
    R rho = rho_halfplane(z, w);
    if (rho == R(0)) return R(0);
    return R(2) * num::log1p(rho) - num::log(one_minus_rho2_halfplane(z, w));
}

// T(w) = (w-1)/(w+1) maps H onto D, and T^{-1}(z) = (1+z)/(1-z).
template <class C> C cayley(const C& w) { return (w - C(1)) / (w + C(1)); }
template <class C> C cayley_inverse(const C& z) { return (C(1) + z) / (C(1) - z); }

}  // namespace geo

inline double pseudo_hyperbolic_distance(DiskPoint z, DiskPoint w) {
    return geo::rho_disk(z.value(), w.value());
}

inline double hyperbolic_distance_disk(DiskPoint z, DiskPoint w) {
    return geo::distance_disk(z.value(), w.value());
}

inline double hyperbolic_distance_halfplane(HalfPlanePoint z, HalfPlanePoint w) {
    return geo::distance_halfplane(z.value(), w.value());
}

inline double hyperbolic_density(DiskPoint z) {
    return 2.0 / num::one_minus_mod2(z.value());
}

inline double hyperbolic_density(HalfPlanePoint w) { return 1.0 / w.value().real(); }

inline DiskPoint cayley(HalfPlanePoint w) { return DiskPoint(geo::cayley(w.value())); }

inline HalfPlanePoint cayley_inverse(DiskPoint z) {
    return HalfPlanePoint(geo::cayley_inverse(z.value()));
}

// Real number or the formal value +infinity. Arithmetic on the sentinel is
// never performed implicitly; callers branch on is_infinite() first.
class ExtendedReal {
public:
    static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
    static ExtendedReal infinity() { return ExtendedReal(0.0, true); }
    bool is_infinite() const { return infinite_; }
    double value() const {
        if (infinite_) throw std::logic_error("ExtendedReal: value() on infinity");
        return value_;
    }

private:
    ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

// a(mu) = Im mu / (|mu| - Re mu) = cot(arg(mu)/2), with a = infinity exactly
// when mu is a positive real.
inline ExtendedReal mu_angle_gadget(Complex mu) {
    if (mu == Complex(0.0, 0.0)) throw std::invalid_argument("a(mu) requires mu != 0");
    double x = mu.real(), y = mu.imag();
    if (y == 0.0 && x > 0.0) return ExtendedReal::infinity();
    double m = std::abs(mu);
    if (x > 0.0) return ExtendedReal::finite((m + x) / y);
    return ExtendedReal::finite(y / (m - x));
}

// Cotangent addition: a(mu1 mu2) from a(mu1), a(mu2).
inline ExtendedReal cot_addition(ExtendedReal a1, ExtendedReal a2) {
    if (a1.is_infinite()) return a2;
    if (a2.is_infinite()) return a1;
    double s = a1.value() + a2.value();
    if (s == 0.0) return ExtendedReal::infinity();
    return ExtendedReal::finite((a1.value() * a2.value() - 1.0) / s);
}

// L(zeta; mu) = (1 + i a zeta)/(i a + zeta), normalized by L(1) = 1.
template <class C> C mobius_L_value(const C& zeta, ExtendedReal a) {
    if (a.is_infinite()) return zeta;
    C ia(real_t<C>(0), real_t<C>(a.value()));
    return (C(1) + ia * zeta) / (ia + zeta);
}

template <class C> C mobius_L_derivative_value(const C& zeta, ExtendedReal a) {
    if (a.is_infinite()) return C(1);
    C ia(real_t<C>(0), real_t<C>(a.value()));
    C d = ia + zeta;
    return -C(real_t<C>(1.0 + a.value() * a.value())) / (d * d);
}

inline HalfPlanePoint mobius_L(HalfPlanePoint zeta, Complex mu) {
    return HalfPlanePoint(mobius_L_value(zeta.value(), mu_angle_gadget(mu)));
}

inline Complex mobius_L_derivative(HalfPlanePoint zeta, Complex mu) {
    return mobius_L_derivative_value(zeta.value(), mu_angle_gadget(mu));
}

}  // namespace confbound
