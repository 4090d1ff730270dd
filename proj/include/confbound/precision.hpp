#pragma once

// Scalar types and a uniform numeric vocabulary over double and __float128.
// Near-boundary quantities lose roughly one digit per unit of hyperbolic
// depth, so the boundary and dynamics modules evaluate in quad precision.

#include <cmath>
#include <complex>
#include <limits>

#include <boost/multiprecision/complex128.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

namespace confbound {

using Complex = std::complex<double>;
using QReal = boost::multiprecision::float128;
using QComplex = boost::multiprecision::complex128;

template <class C> struct real_of;
template <> struct real_of<Complex> { using type = double; };
template <> struct real_of<QComplex> { using type = QReal; };
template <class C> using real_t = typename real_of<C>::type;

namespace num {

inline double re(const Complex& z) { return z.real(); }
inline double im(const Complex& z) { return z.imag(); }
inline Complex conj(const Complex& z) { return std::conj(z); }
inline double abs(const Complex& z) { return std::abs(z); }
inline double arg(const Complex& z) { return std::arg(z); }
inline double norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }
inline Complex exp(const Complex& z) { return std::exp(z); }
inline Complex log(const Complex& z) { return std::log(z); }
inline Complex sqrt(const Complex& z) { return std::sqrt(z); }

inline QReal re(const QComplex& z) { return boost::multiprecision::real(z); }
inline QReal im(const QComplex& z) { return boost::multiprecision::imag(z); }
inline QComplex conj(const QComplex& z) { return boost::multiprecision::conj(z); }
inline QReal abs(const QComplex& z) { return boost::multiprecision::abs(z); }
inline QReal arg(const QComplex& z) { return boost::multiprecision::arg(z); }
inline QReal norm(const QComplex& z) {
    QReal a = re(z), b = im(z);
    return a * a + b * b;
}
inline QComplex exp(const QComplex& z) { return boost::multiprecision::exp(z); }
inline QComplex log(const QComplex& z) { return boost::multiprecision::log(z); }
inline QComplex sqrt(const QComplex& z) { return boost::multiprecision::sqrt(z); }

inline double abs(double x) { return std::fabs(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double exp(double x) { return std::exp(x); }
inline double expm1(double x) { return std::expm1(x); }
inline double atanh(double x) { return std::atanh(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }

inline QReal abs(const QReal& x) { return boost::multiprecision::fabs(x); }
inline QReal sqrt(const QReal& x) { return boost::multiprecision::sqrt(x); }
inline QReal log(const QReal& x) { return boost::multiprecision::log(x); }
inline QReal log1p(const QReal& x) { return boost::multiprecision::log1p(x); }
inline QReal exp(const QReal& x) { return boost::multiprecision::exp(x); }
inline QReal expm1(const QReal& x) { return boost::multiprecision::expm1(x); }
inline QReal atanh(const QReal& x) { return boost::multiprecision::atanh(x); }
inline QReal tanh(const QReal& x) { return boost::multiprecision::tanh(x); }
inline QReal atan2(const QReal& y, const QReal& x) { return boost::multiprecision::atan2(y, x); }

inline double to_double(double x) { return x; }
inline double to_double(const QReal& x) { return x.convert_to<double>(); }
inline Complex to_double(const Complex& z) { return z; }
inline Complex to_double(const QComplex& z) { return {to_double(re(z)), to_double(im(z))}; }

inline QReal to_quad(double x) { return QReal(x); }
inline QReal to_quad(const QReal& x) { return x; }
inline QComplex to_quad(const Complex& z) { return QComplex(QReal(z.real()), QReal(z.imag())); }
inline QComplex to_quad(const QComplex& z) { return z; }

template <class C> C make(real_t<C> re_part, real_t<C> im_part) { return C(re_part, im_part); }

// Lift a double-precision complex into C.
template <class C> C lift(const Complex& z) {
    if constexpr (std::is_same_v<C, Complex>)
        return z;
    else
        return to_quad(z);
}

template <class R> R pi() {
    if constexpr (std::is_same_v<R, double>)
        return 3.14159265358979323846;
    else
        return boost::math::constants::pi<QReal>();
}

template <class R> R epsilon() { return std::numeric_limits<R>::epsilon(); }

// 1 - |z|^2 without squaring away the small factor.
template <class C> real_t<C> one_minus_mod2(const C& z) {
    real_t<C> a = abs(z);
    return (real_t<C>(1) - a) * (real_t<C>(1) + a);
}

}  // namespace num
}  // namespace confbound
