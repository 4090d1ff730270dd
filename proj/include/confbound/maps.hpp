#pragma once

// Holomorphic self-maps of D or H: representation, catalog, validation,
// iteration and Cayley conjugation.

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "geometry.hpp"

namespace confbound {

enum class Domain { disk, half_plane };

inline const char* domain_name(Domain d) { return d == Domain::disk ? "disk" : "half-plane"; }
inline const char* variable_name(Domain d) { return d == Domain::disk ? "z" : "w"; }

inline Domain parse_domain(std::string_view s) {
    if (s == "disk" || s == "D") return Domain::disk;
    if (s == "half-plane" || s == "halfplane" || s == "H") return Domain::half_plane;
    throw std::invalid_argument("unknown domain '" + std::string(s) + "'");
}

template <class C> bool is_interior(Domain d, const C& p) {
    using R = real_t<C>;
    if (d == Domain::disk) return num::norm(p) < R(1);
    return num::re(p) > R(0) && num::abs(num::im(p)) < std::numeric_limits<R>::infinity();
}

class DomainEscape : public std::runtime_error {
public:
    DomainEscape(Complex point, Complex value)
        : std::runtime_error("map leaves its domain"), point_(point), value_(value) {}
    Complex point() const { return point_; }
    Complex value() const { return value_; }

private:
    Complex point_;
    Complex value_;
};

struct Certificate {
    enum class Kind { analytic, sampled };
    Kind kind = Kind::sampled;
    double max_observed = 0.0;  // max |phi| (disk) or min Re F scaled (half-plane)
    std::string grid;
};

inline const char* certificate_name(Certificate::Kind k) {
    return k == Certificate::Kind::analytic ? "analytic" : "sampled";
}

struct Violation {
    Complex witness;
    Complex value;
    std::string description;
};

struct ValidationResult {
    bool valid = false;
    Certificate certificate;
    std::optional<Violation> violation;
};

class SelfMap {
public:
    SelfMap(expr::NodePtr root, Domain domain, std::string family = "expression",
            std::optional<Certificate> certificate = std::nullopt, bool automorphism = false)
        : root_(std::move(root)), domain_(domain), family_(std::move(family)),
          certificate_(std::move(certificate)), automorphism_(automorphism) {}

    static SelfMap parse(std::string_view text, Domain domain) {
        return SelfMap(expr::parse(text, variable_name(domain)), domain);
    }

    const expr::Node& root() const { return *root_; }
    const expr::NodePtr& root_ptr() const { return root_; }
    Domain domain() const { return domain_; }
    const std::string& family() const { return family_; }
    const std::optional<Certificate>& certificate() const { return certificate_; }
    bool is_known_automorphism() const { return automorphism_; }
    std::string expression() const { return expr::print(*root_, variable_name(domain_)); }

    SelfMap with_certificate(Certificate c) const {
        SelfMap m = *this;
        m.certificate_ = std::move(c);
        return m;
    }

    // Value and derivative; throws DomainEscape when the image leaves the domain.
    template <class C> Dual<C> eval(const C& p) const {
        Dual<C> r = expr::evaluate(*root_, Dual<C>::variable(p));
        if (!is_interior(domain_, r.value))
            throw DomainEscape(num::to_double(p), num::to_double(r.value));
        return r;
    }

    // Evaluation without the domain check (for boundary extrapolation).
    template <class C> Dual<C> eval_unchecked(const C& p) const {
        return expr::evaluate(*root_, Dual<C>::variable(p));
    }

private:
    expr::NodePtr root_;
    Domain domain_;
    std::string family_;
    std::optional<Certificate> certificate_;
    bool automorphism_;
};

inline std::pair<Complex, Complex> eval_with_derivative(const SelfMap& m, Complex p) {
    if (!is_interior(m.domain(), p))
        throw std::domain_error("evaluation point must be interior");
    Dual<Complex> r = m.eval(p);
    return {r.value, r.deriv};
}

inline SelfMap compose(const SelfMap& outer, const SelfMap& inner) {
    if (outer.domain() != inner.domain())
        throw std::invalid_argument("compose requires maps on the same domain");
    bool aut = outer.is_known_automorphism() && inner.is_known_automorphism();
    std::optional<Certificate> cert;
    if (outer.certificate() && inner.certificate() &&
        outer.certificate()->kind == Certificate::Kind::analytic &&
        inner.certificate()->kind == Certificate::Kind::analytic)
        cert = Certificate{Certificate::Kind::analytic, 0.0, "composition of certified maps"};
    return SelfMap(expr::compose(outer.root_ptr(), inner.root_ptr()), outer.domain(),
                   "compose(" + outer.family() + "," + inner.family() + ")", cert, aut);
}

inline SelfMap iterate(const SelfMap& m, int n) {
    if (n < 0) throw std::invalid_argument("iterate requires n >= 0");
    Certificate analytic{Certificate::Kind::analytic, 0.0, "identity"};
    SelfMap result(expr::variable(), m.domain(), "identity", analytic, true);
    for (int k = 0; k < n; ++k) result = k == 0 ? m : compose(m, result);
    if (n > 1)
        result = SelfMap(result.root_ptr(), m.domain(),
                         "iterate(" + m.family() + "," + std::to_string(n) + ")",
                         result.certificate(), result.is_known_automorphism());
    return result;
}

namespace detail {

inline expr::NodePtr c(Complex v) { return expr::constant(v); }
// exp(i theta) as a node: evaluated in the working precision, so the factor
// stays unimodular to that precision instead of to double rounding
inline expr::NodePtr unit(double theta) {
    return expr::unary(expr::Op::exp, expr::constant(Complex(0.0, theta)));
}
inline expr::NodePtr mul(expr::NodePtr a, expr::NodePtr b) {
    return expr::binary(expr::Op::mul, std::move(a), std::move(b));
}
inline expr::NodePtr add(expr::NodePtr a, expr::NodePtr b) {
    return expr::binary(expr::Op::add, std::move(a), std::move(b));
}
inline expr::NodePtr sub(expr::NodePtr a, expr::NodePtr b) {
    return expr::binary(expr::Op::sub, std::move(a), std::move(b));
}
inline expr::NodePtr div(expr::NodePtr a, expr::NodePtr b) {
    return expr::binary(expr::Op::div, std::move(a), std::move(b));
}

// (x - a)/(1 - conj(a) x)
inline expr::NodePtr blaschke_factor(const expr::NodePtr& x, Complex a) {
    if (a == Complex(0.0, 0.0)) return x;
    return div(sub(x, c(a)), sub(c(1.0), mul(c(std::conj(a)), x)));
}

inline std::map<std::string, std::string> parse_params(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("catalog parameter '" + std::string(item) +
                                        "' must be key=value");
        out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
        pos = end + 1;
    }
    return out;
}

inline Complex param(const std::map<std::string, std::string>& p, const std::string& key,
                     std::optional<Complex> fallback = std::nullopt) {
    auto it = p.find(key);
    if (it == p.end()) {
        if (fallback) return *fallback;
        throw std::invalid_argument("missing catalog parameter '" + key + "'");
    }
    return expr::parse_constant(it->second);
}

inline double real_param(const std::map<std::string, std::string>& p, const std::string& key,
                         std::optional<double> fallback = std::nullopt) {
    std::optional<Complex> fb;
    if (fallback) fb = Complex(*fallback, 0.0);
    Complex v = param(p, key, fb);
    if (v.imag() != 0.0) throw std::invalid_argument("parameter '" + key + "' must be real");
    return v.real();
}

inline std::vector<Complex> list_param(const std::map<std::string, std::string>& p,
                                       const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("missing catalog parameter '" + key + "'");
    std::vector<Complex> out;
    std::string_view s = it->second;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t end = s.find(';', pos);
        if (end == std::string_view::npos) end = s.size();
        out.push_back(expr::parse_constant(s.substr(pos, end - pos)));
        pos = end + 1;
    }
    return out;
}

}  // namespace detail

// Catalog ids: family[:key=value[,key=value...]]
//   disk: identity, rotation:theta, automorphism:b, power:n, blaschke2:a,
//         blaschke:zeros=a1;a2;...[,theta], constant:c
//   half-plane: hp:affine:lambda,c  hp:z2  hp:sqrt:c  hp:log-slow  hp:coth-premodel
inline SelfMap catalog(std::string_view id) {
    using namespace detail;
    std::string_view family = id, rest;
    bool hp = id.substr(0, 3) == "hp:";
    std::string_view body = hp ? id.substr(3) : id;
    std::size_t colon = body.find(':');
    family = body.substr(0, colon);
    if (colon != std::string_view::npos) rest = body.substr(colon + 1);
    auto p = parse_params(rest);
    Certificate analytic{Certificate::Kind::analytic, 0.0, "closed form"};
    std::string name(id);
    auto x = expr::variable();

    if (!hp) {
        if (family == "identity") return SelfMap(x, Domain::disk, name, analytic, true);
        if (family == "rotation") {
            double theta = real_param(p, "theta");
            return SelfMap(mul(unit(theta), x), Domain::disk, name, analytic, true);
        }
        if (family == "automorphism") {
            Complex b = param(p, "b");
            if (!(std::abs(b) < 1.0)) throw std::invalid_argument("automorphism requires |b| < 1");
            // psi_b(z) = (z + b)/(1 + conj(b) z)
            return SelfMap(div(add(x, c(b)), add(c(1.0), mul(c(std::conj(b)), x))), Domain::disk,
                           name, analytic, true);
        }
        if (family == "power") {
            double n = real_param(p, "n");
            if (n < 1 || n != std::floor(n) || n > 64)
                throw std::invalid_argument("power requires integer n in [1, 64]");
            return SelfMap(expr::power(x, static_cast<int>(n)), Domain::disk, name, analytic,
                           n == 1);
        }
        if (family == "blaschke2") {
            double a = real_param(p, "a");
            if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("blaschke2 requires 0 <= a < 1");
            // phi_a(z) = z (z - a)/(1 - a z)
            return SelfMap(mul(x, blaschke_factor(x, a)), Domain::disk, name, analytic, false);
        }
        if (family == "blaschke") {
            auto zeros = list_param(p, "zeros");
            double theta = real_param(p, "theta", 0.0);
            expr::NodePtr e;
            for (Complex a : zeros) {
                if (!(std::abs(a) < 1.0)) throw std::invalid_argument("Blaschke zeros need |a| < 1");
                auto f = blaschke_factor(x, a);
                e = e ? mul(e, f) : f;
            }
            if (theta != 0.0) e = mul(unit(theta), e);
            return SelfMap(e, Domain::disk, name, analytic, zeros.size() == 1);
        }
        if (family == "constant") {
            Complex v = param(p, "c");
            if (!(std::abs(v) < 1.0)) throw std::invalid_argument("constant requires |c| < 1");
            return SelfMap(c(v), Domain::disk, name, analytic, false);
        }
    } else {
        if (family == "affine") {
            double lambda = real_param(p, "lambda", 1.0);
            Complex shift = param(p, "c", Complex(0.0, 0.0));
            if (!(lambda > 0.0) || shift.real() < 0.0)
                throw std::invalid_argument("hp:affine requires lambda > 0 and Re c >= 0");
            return SelfMap(add(mul(c(lambda), x), c(shift)), Domain::half_plane, name, analytic,
                           shift.real() == 0.0);
        }
        if (family == "z2")
            return SelfMap(div(add(expr::power(x, 2), c(1.0)), mul(c(2.0), x)), Domain::half_plane,
                           name, analytic, false);
        if (family == "sqrt") {
            double k = real_param(p, "c", 1.0);
            if (!(k > 0.0)) throw std::invalid_argument("hp:sqrt requires c > 0");
            return SelfMap(add(x, mul(c(k), expr::unary(expr::Op::sqrt, x))), Domain::half_plane,
                           name, analytic, false);
        }
        if (family == "log-slow") {
            auto log1 = expr::unary(expr::Op::log, add(c(1.0), x));
            return SelfMap(div(x, add(c(1.0), log1)), Domain::half_plane, name, analytic, false);
        }
        if (family == "coth-premodel") {
            // coth(1/(2w)) = (1 + exp(-1/w))/(1 - exp(-1/w))
            auto e = expr::unary(expr::Op::exp, expr::unary(expr::Op::neg, div(c(1.0), x)));
            return SelfMap(div(add(c(1.0), e), sub(c(1.0), e)), Domain::half_plane, name, analytic,
                           false);
        }
    }
    throw std::invalid_argument("unknown catalog family '" + std::string(id) + "'");
}

// Sampled check of phi(D) in D: 64 rings up to radius 1 - 1e-4 (disk), or a
// log-spaced polar grid in H with |w| in [1e-4, 1e6].
inline ValidationResult validate_self_map(const SelfMap& m, int samples = 4096) {
    if (samples <= 0) throw std::invalid_argument("validate_self_map requires samples > 0");
    if (m.certificate() && m.certificate()->kind == Certificate::Kind::analytic)
        return {true, *m.certificate(), std::nullopt};
    ValidationResult out;
    double extreme = m.domain() == Domain::disk ? 0.0 : std::numeric_limits<double>::infinity();
    int rings = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    int per_ring = std::max(4, samples / rings);
    std::ostringstream grid;
    auto check = [&](Complex p) -> bool {
        Dual<Complex> r = m.eval_unchecked(p);
        Complex v = r.value;
        bool finite = std::isfinite(v.real()) && std::isfinite(v.imag());
        if (!finite || !is_interior(m.domain(), v)) {
            out.violation = Violation{p, v, "image leaves the domain"};
            return false;
        }
        if (m.domain() == Domain::disk)
            extreme = std::max(extreme, std::abs(v));
        else
            extreme = std::min(extreme, v.real() / p.real());
        return true;
    };
    if (m.domain() == Domain::disk) {
        grid << rings << " rings x " << per_ring << " points, radius in [0, 1-1e-4]";
        for (int k = 0; k < rings; ++k) {
            // rings spaced uniformly in hyperbolic radius
            double umax = std::log((2.0 - 1e-4) / 1e-4);
            double r = std::tanh(0.5 * umax * k / (rings - 1));
            if (k == rings - 1) r = 1.0 - 1e-4;
            for (int j = 0; j < per_ring; ++j) {
                Complex p = std::polar(r, 2.0 * M_PI * (j + 0.5 * (k % 2)) / per_ring);
                if (!check(p)) return out;
            }
        }
    } else {
        grid << rings << " moduli x " << per_ring << " angles, |w| in [1e-4, 1e6]";
        for (int k = 0; k < rings; ++k) {
            double mod = std::pow(10.0, -4.0 + 10.0 * k / (rings - 1));
            for (int j = 0; j < per_ring; ++j) {
                double ang = -M_PI / 2 + M_PI * (j + 0.5) / per_ring;
                if (!check(std::polar(mod, ang))) return out;
            }
        }
    }
    out.valid = true;
    out.certificate = Certificate{Certificate::Kind::sampled, extreme, grid.str()};
    return out;
}

// Half-plane conjugate F(w) = T^{-1}(conj(sigma) phi(sigma T(w))) at sigma.
inline SelfMap conjugate_to_halfplane(const SelfMap& m, Complex sigma) {
    if (m.domain() != Domain::disk) throw std::invalid_argument("conjugate_to_halfplane needs a disk map");
    require_unimodular(sigma);
    using namespace detail;
    auto w = expr::variable();
    auto t = div(sub(w, c(1.0)), add(w, c(1.0)));
    auto inner = sigma == Complex(1.0, 0.0) ? t : mul(c(sigma), t);
    auto image = expr::compose(m.root_ptr(), inner);
    if (sigma != Complex(1.0, 0.0)) image = mul(c(std::conj(sigma)), image);
    auto out = expr::compose(div(add(c(1.0), w), sub(c(1.0), w)), image);
    return SelfMap(out, Domain::half_plane, "halfplane(" + m.family() + ")", m.certificate(),
                   m.is_known_automorphism());
}

// Disk conjugate phi(z) = sigma T(F(T^{-1}(conj(sigma) z))); sigma corresponds to infinity.
inline SelfMap conjugate_to_disk(const SelfMap& m, Complex sigma = 1.0) {
    if (m.domain() != Domain::half_plane) throw std::invalid_argument("conjugate_to_disk needs a half-plane map");
    require_unimodular(sigma);
    using namespace detail;
    auto z = expr::variable();
    auto pre = sigma == Complex(1.0, 0.0) ? z : mul(c(std::conj(sigma)), z);
    auto tinv = expr::compose(div(add(c(1.0), z), sub(c(1.0), z)), pre);
    auto image = expr::compose(m.root_ptr(), tinv);
    auto out = expr::compose(div(sub(z, c(1.0)), add(z, c(1.0))), image);
    if (sigma != Complex(1.0, 0.0)) out = mul(c(sigma), out);
    return SelfMap(out, Domain::disk, "disk(" + m.family() + ")", m.certificate(),
                   m.is_known_automorphism());
}

// z -> conj(s) phi(s z): moves the boundary point s to 1.
inline SelfMap rotate_to_one(const SelfMap& m, Complex s) {
    if (m.domain() != Domain::disk) throw std::invalid_argument("rotate_to_one needs a disk map");
    using namespace detail;
    auto z = expr::variable();
    auto out = mul(c(std::conj(s)), expr::compose(m.root_ptr(), mul(c(s), z)));
    return SelfMap(out, Domain::disk, "rotated(" + m.family() + ")", m.certificate(),
                   m.is_known_automorphism());
}

}  // namespace confbound
