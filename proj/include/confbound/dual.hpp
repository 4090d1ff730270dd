#pragma once

// Forward-mode dual numbers over a complex scalar: value + eps * deriv, eps^2 = 0.

#include "precision.hpp"

namespace confbound {

template <class C> struct Dual {
    C value{};
    C deriv{};

    Dual() = default;
    Dual(C v, C d) : value(v), deriv(d) {}

    static Dual variable(const C& v) { return Dual(v, C(1)); }
    static Dual constant(const C& v) { return Dual(v, C(0)); }
};

template <class C> Dual<C> operator+(const Dual<C>& a, const Dual<C>& b) {
    return {a.value + b.value, a.deriv + b.deriv};
}
template <class C> Dual<C> operator-(const Dual<C>& a, const Dual<C>& b) {
    return {a.value - b.value, a.deriv - b.deriv};
}
template <class C> Dual<C> operator-(const Dual<C>& a) { return {-a.value, -a.deriv}; }
template <class C> Dual<C> operator*(const Dual<C>& a, const Dual<C>& b) {
    return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}
template <class C> Dual<C> operator/(const Dual<C>& a, const Dual<C>& b) {
    C q = a.value / b.value;
    return {q, (a.deriv - q * b.deriv) / b.value};
}

template <class C> Dual<C> exp(const Dual<C>& a) {
    C e = num::exp(a.value);
    return {e, e * a.deriv};
}
template <class C> Dual<C> log(const Dual<C>& a) { return {num::log(a.value), a.deriv / a.value}; }
template <class C> Dual<C> sqrt(const Dual<C>& a) {
    C s = num::sqrt(a.value);
    return {s, a.deriv / (C(2) * s)};
}

// Integer power by binary exponentiation; negative exponents invert.
template <class C> Dual<C> pow(const Dual<C>& a, int n) {
    if (n < 0) return Dual<C>::constant(C(1)) / pow(a, -n);
    Dual<C> result = Dual<C>::constant(C(1));
    Dual<C> base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

}  // namespace confbound
