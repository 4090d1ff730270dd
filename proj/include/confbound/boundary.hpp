#pragma once

// Boundary behaviour at sigma: angular limits and derivatives, Julia and
// Visser-Ostrowski quotients, the weak and strong condition batteries, the
// consolidated classification and the preimage trace of [R, inf).

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conditions.hpp"
#include "distortion.hpp"
#include "kernel.hpp"

namespace confbound {

class MissingBoundaryValue : public std::runtime_error {
public:
    explicit MissingBoundaryValue(Complex estimate)
        : std::runtime_error("missing boundary value: angular limit is not unimodular"),
          estimate_(estimate) {}
    Complex estimate() const { return estimate_; }

private:
    Complex estimate_;
};

struct PathSample {
    QComplex z;
    QComplex f;
    QComplex df;
    double depth;
};

inline std::vector<PathSample> sample_path(const SelfMap& m, const ApproachPath& p) {
    std::vector<PathSample> out;
    for (int n = 0; n < p.length(); ++n) {
        QComplex z = p.disk_point(n);
        Dual<QComplex> r = m.eval(z);
        out.push_back({z, r.value, r.deriv, p.depth(n)});
    }
    return out;
}

struct AngularLimit {
    QComplex value_q;
    Complex value;
    double confidence = 0;  // max pairwise distance of per-aperture limits and tails
    bool converged = false;
    bool unimodular = false;
    std::vector<Complex> per_aperture;
};

inline AngularLimit angular_limit(const SelfMap& m, const ApproachPath& path, double unimodular_tol = 1e-6,
                                  double cauchy_tol = 1e-7) {
    require_disk_map(m);
    AngularLimit out;
    double beta = path.aperture();
    std::vector<ApproachPath> paths{path, beta != 0.0 ? path.mirrored() : path.with_aperture(M_PI / 4)};
    std::vector<QComplex> limits;
    double tail = 0;
    bool all_converged = true;
    for (const ApproachPath& p : paths) {
        std::vector<QComplex> vals;
        for (int n = 0; n < p.length(); ++n) vals.push_back(m.eval(p.disk_point(n)).value);
        auto lim = extrapolate_limit(vals);
        limits.push_back(lim.value);
        tail = std::max(tail, lim.tail_change);
        all_converged = all_converged && (lim.converged || lim.tail_change <= cauchy_tol);
        out.per_aperture.push_back(num::to_double(lim.value));
    }
    out.value_q = limits.front();
    out.value = num::to_double(out.value_q);
    double spread = 0;
    for (std::size_t i = 0; i < limits.size(); ++i)
        for (std::size_t j = i + 1; j < limits.size(); ++j)
            spread = std::max(spread, num::to_double(num::abs(limits[i] - limits[j])));
    out.confidence = std::max(spread, tail);
    out.converged = all_converged && spread <= cauchy_tol;
    out.unimodular = out.converged && std::abs(num::to_double(num::abs(out.value_q)) - 1.0) <= unimodular_tol;
    return out;
}

struct JuliaProfile {
    std::vector<double> depth;
    std::vector<double> values;  // (1 - |phi(z_n)|)/(1 - |z_n|)
    double liminf = 0;
    Decision decision;  // holds: finite liminf
};

inline JuliaProfile julia_quotient_profile(const SelfMap& m, const ApproachPath& path,
                                           const TrendThresholds& t = {}) {
    require_disk_map(m);
    JuliaProfile j;
    std::vector<QReal> vals;
    for (const PathSample& s : sample_path(m, path)) {
        QReal q = (QReal(1) - num::abs(s.f)) / (QReal(1) - num::abs(s.z));
        vals.push_back(q);
        j.values.push_back(num::to_double(q));
        j.depth.push_back(s.depth);
    }
    j.decision = decide_finite(j.depth, j.values, t);
    auto lim = extrapolate_limit(vals);
    auto tail = detail::tail_of(j.values);
    j.liminf = lim.converged ? num::to_double(lim.value) : *std::min_element(tail.begin(), tail.end());
    return j;
}

struct AngularDerivative {
    bool infinite = false;
    bool decided = false;
    Complex value;          // finite estimate
    double modulus = 0;
    Complex derivative_limit;  // limit of phi'(z_n)
    bool cross_check = false;  // quotient and phi' limits agree
    Complex boundary_value;
    Decision decision;
    std::vector<double> depth;
    std::vector<double> quotient_moduli;
};

// Limit of (phi(z_n) - omega)/(z_n - sigma) along the path.
inline AngularDerivative angular_derivative(const SelfMap& m, Complex sigma, const ApproachPath& path,
                                            const TrendThresholds& t = {}, double unimodular_tol = 1e-6) {
    require_disk_map(m);
    require_unimodular(sigma);
    AngularLimit lim = angular_limit(m, path, unimodular_tol);
    if (!lim.unimodular) throw MissingBoundaryValue(lim.value);
    QComplex omega = lim.value_q / QComplex(num::abs(lim.value_q));
    QComplex s = boundary_point_quad(sigma);
    AngularDerivative a;
    a.boundary_value = num::to_double(omega);
    std::vector<QComplex> quot, deriv;
    for (const PathSample& p : sample_path(m, path)) {
        QComplex q = (p.f - omega) / (p.z - s);
        quot.push_back(q);
        deriv.push_back(p.df);
        a.depth.push_back(p.depth);
        a.quotient_moduli.push_back(num::to_double(num::abs(q)));
    }
    a.decision = decide_finite(a.depth, a.quotient_moduli, t);
    a.decided = a.decision.verdict != Verdict::undecided;
    if (a.decision.verdict == Verdict::fails) {
        a.infinite = true;
        a.modulus = std::numeric_limits<double>::infinity();
        return a;
    }
    auto ql = extrapolate_limit(quot), dl = extrapolate_limit(deriv);
    a.value = num::to_double(ql.value);
    a.modulus = std::abs(a.value);
    a.derivative_limit = num::to_double(dl.value);
    a.cross_check = std::abs(a.value - a.derivative_limit) <= 1e-6 * std::max(1.0, a.modulus);
    return a;
}

struct VisserOstrowski {
    Complex value;
    Decision decision;  // quotient -> 1
    std::vector<double> depth, residual;
};

inline VisserOstrowski visser_ostrowski(const SelfMap& m, Complex sigma, const ApproachPath& path,
                                        QComplex omega, const TrendThresholds& t = {}) {
    require_disk_map(m);
    VisserOstrowski v;
    QComplex s = boundary_point_quad(sigma);
    std::vector<QComplex> vals;
    for (const PathSample& p : sample_path(m, path)) {
        QComplex q = (p.z - s) * p.df / (p.f - omega);
        vals.push_back(q);
        v.depth.push_back(p.depth);
        v.residual.push_back(num::to_double(num::abs(q - QComplex(1))));
    }
    v.value = num::to_double(extrapolate_limit(vals).value);
    v.decision = decide_vanishing(v.depth, v.residual, t);
    return v;
}

inline VisserOstrowski visser_ostrowski(const SelfMap& m, Complex sigma, const ApproachPath& path,
                                        const TrendThresholds& t = {}) {
    AngularLimit lim = angular_limit(m, path);
    if (!lim.unimodular) throw MissingBoundaryValue(lim.value);
    return visser_ostrowski(m, sigma, path, lim.value_q / QComplex(num::abs(lim.value_q)), t);
}

struct WeakConformality {
    double arg_limit = 0;  // lim arg((1 - conj(omega) phi(z))/(1 - conj(sigma) z))
    Decision arg_decision;  // arg -> 0
    double argderiv_limit = 0;  // lim arg phi'(z), unwrapped
    Decision argderiv_decision;
    bool derivative_nonvanishing = false;
    double tail_winding = 0;
    std::vector<double> depth, args, argderivs;
};

inline std::vector<double> unwrap(const std::vector<double>& a) {
    std::vector<double> out(a);
    for (std::size_t i = 1; i < out.size(); ++i) {
        double d = out[i] - out[i - 1];
        d -= 2 * M_PI * std::round(d / (2 * M_PI));
        out[i] = out[i - 1] + d;
    }
    return out;
}

inline WeakConformality weak_conformality_arg(const SelfMap& m, Complex sigma, const ApproachPath& path,
                                              QComplex omega, const TrendThresholds& t = {}) {
    require_disk_map(m);
    WeakConformality w;
    QComplex s = boundary_point_quad(sigma);
    std::vector<double> raw_d, abs_args;
    bool nonvanishing = true;
    auto samples = sample_path(m, path);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const PathSample& p = samples[i];
        QComplex r = (QComplex(1) - num::conj(omega) * p.f) / (QComplex(1) - num::conj(s) * p.z);
        w.args.push_back(num::to_double(num::arg(r)));
        abs_args.push_back(std::abs(w.args.back()));
        w.depth.push_back(p.depth);
        raw_d.push_back(num::to_double(num::arg(p.df)));
        if (i >= samples.size() / 2 && !(num::to_double(num::abs(p.df)) > 1e-12)) nonvanishing = false;
    }
    w.argderivs = unwrap(raw_d);
    w.arg_limit = w.args.back();
    w.arg_decision = decide_vanishing(w.depth, abs_args, t);
    w.derivative_nonvanishing = nonvanishing;
    auto tail = detail::tail_of(w.argderivs);
    w.tail_winding = *std::max_element(tail.begin(), tail.end()) - *std::min_element(tail.begin(), tail.end());
    w.argderiv_limit = w.argderivs.back();
    if (!nonvanishing)
        w.argderiv_decision = {Verdict::fails, "derivative vanishes near the vertex"};
    else if (w.tail_winding > M_PI / 2)
        w.argderiv_decision = {Verdict::undecided, "tail winding exceeds pi/2"};
    else
        w.argderiv_decision = decide_cauchy(w.depth, w.argderivs, t);
    return w;
}

enum class BatteryStatus { holds, fails, inconsistent, undecided };

inline const char* battery_name(BatteryStatus s) {
    switch (s) {
        case BatteryStatus::holds: return "holds";
        case BatteryStatus::fails: return "fails";
        case BatteryStatus::inconsistent: return "inconsistent";
        default: return "undecided";
    }
}

// The conditions of one battery are equivalent, so any decided verdict
// speaks for the battery; decided verdicts in both directions are a contradiction.
inline BatteryStatus battery_status(const std::vector<ConditionResult>& conds) {
    bool any_hold = false, any_fail = false;
    for (const auto& c : conds) {
        any_hold = any_hold || c.verdict == Verdict::holds;
        any_fail = any_fail || c.verdict == Verdict::fails;
    }
    if (any_hold && any_fail) return BatteryStatus::inconsistent;
    if (any_hold) return BatteryStatus::holds;
    if (any_fail) return BatteryStatus::fails;
    return BatteryStatus::undecided;
}

namespace detail {

inline ConditionResult make_condition(const std::string& id, const Decision& d, std::string evidence) {
    return {id, d.verdict, d.rule, std::move(evidence)};
}

inline ConditionResult no_boundary_value(const std::string& id) {
    return {id, Verdict::fails, "no unimodular boundary value", "family,n,depth,value\n"};
}

struct BoundaryContext {
    ApproachPath radial;
    ApproachPath up;
    ApproachPath down;
    AngularLimit limit;
    QComplex omega;
};

inline BoundaryContext context(const SelfMap& m, Complex sigma, const BoundaryOptions& o) {
    BoundaryContext c{o.path(sigma, 0.0), o.path(sigma, o.aperture), o.path(sigma, -o.aperture), {}, {}};
    c.limit = angular_limit(m, c.radial, o.unimodular_tol, o.limit_tol);
    c.omega = c.limit.unimodular ? c.limit.value_q / QComplex(num::abs(c.limit.value_q)) : c.limit.value_q;
    return c;
}

// Sequences of a two-point quantity over pair families.
template <class F>
Decision pair_condition(const SelfMap& m, const std::vector<PairFamily>& fams, EvidenceTable& ev,
                        const TrendThresholds& t, F&& residual_of) {
    std::vector<std::pair<std::string, Decision>> parts;
    for (const PairFamily& f : fams) {
        std::vector<double> depth, res;
        for (const PairSample& s : pair_samples(f)) {
            double r = residual_of(m, s.z, s.w);
            depth.push_back(s.depth);
            res.push_back(r);
            ev.add(f.name, s.n, s.depth, r);
        }
        parts.emplace_back(f.name, decide_vanishing(depth, res, t));
    }
    return combine_all(parts);
}

inline Decision distortion_along(const SelfMap& m, const ApproachPath& p, EvidenceTable& ev,
                                 const std::string& name, const TrendThresholds& t) {
    std::vector<double> depth, res;
    for (int n = 0; n < p.length(); ++n) {
        QComplex z = p.disk_point(n);
        double r = std::abs(num::to_double(distortion_defect(m, z)));
        depth.push_back(p.depth(n));
        res.push_back(r);
        ev.add(name, n, depth.back(), r);
    }
    return decide_vanishing(depth, res, t);
}

}  // namespace detail

// Weak conformality battery at sigma.
inline std::vector<ConditionResult> theorem1_battery(const SelfMap& m, Complex sigma,
                                                     const BoundaryOptions& o = {}) {
    require_disk_map(m);
    require_unimodular(sigma);
    auto ctx = detail::context(m, sigma, o);
    const auto& t = o.trend;
    std::vector<ConditionResult> out;

    {  // (a) radial D_h -> 1
        EvidenceTable ev;
        Decision d = detail::distortion_along(m, ctx.radial, ev, "radial", t);
        out.push_back(detail::make_condition("T1a", d, ev.str()));
    }
    {  // (b) k(phi z, phi w)/k(z, w) -> 1 over paired sequences
        EvidenceTable ev;
        auto fams = pair_families(sigma, o, false);
        Decision d = detail::pair_condition(m, fams, ev, t, [](const SelfMap& f, const QComplex& z, const QComplex& w) {
            QReal k = geo::distance_disk(z, w);
            QReal kk = geo::distance_disk(f.eval(z).value, f.eval(w).value);
            return num::to_double(num::abs(QReal(1) - kk / k));
        });
        d.rule += " (sampled pairs)";
        out.push_back(detail::make_condition("T1b", d, ev.str()));
    }
    if (!ctx.limit.unimodular) {
        out.push_back(detail::no_boundary_value("T1c"));
    } else {  // (c) weak conformality
        EvidenceTable ev;
        std::vector<std::pair<std::string, Decision>> parts;
        for (auto& [name, p] : {std::pair{std::string("radial"), ctx.radial}, {std::string("aperture"), ctx.up}}) {
            auto w = weak_conformality_arg(m, sigma, p, ctx.omega, t);
            for (std::size_t i = 0; i < w.args.size(); ++i) ev.add(name, static_cast<int>(i), w.depth[i], w.args[i]);
            parts.emplace_back(name, w.arg_decision);
        }
        out.push_back(detail::make_condition("T1c", combine_all(parts), ev.str()));
    }
    {  // (a') D_h -> 1 along a bounded-step non-tangential sequence
        EvidenceTable ev;
        Decision d = detail::distortion_along(m, ctx.up, ev, "aperture", t);
        out.push_back(detail::make_condition("T1a'", d, ev.str()));
    }
    {  // (b') consecutive-step quotient -> 1
        EvidenceTable ev;
        std::vector<double> depth, res;
        for (int n = 0; n + 1 < ctx.up.length(); ++n) {
            QComplex z = ctx.up.disk_point(n), w = ctx.up.disk_point(n + 1);
            QReal k = geo::distance_disk(z, w);
            QReal kk = geo::distance_disk(m.eval(z).value, m.eval(w).value);
            double r = num::to_double(num::abs(QReal(1) - kk / k));
            depth.push_back(ctx.up.depth(n + 1));
            res.push_back(r);
            ev.add("aperture", n, depth.back(), r);
        }
        out.push_back(detail::make_condition("T1b'", decide_vanishing(depth, res, t), ev.str()));
    }
    if (!ctx.limit.unimodular) {
        out.push_back(detail::no_boundary_value("T1c'"));
        out.push_back(detail::no_boundary_value("VO"));
        return out;
    }
    {  // (c') angular limits of phi and of arg phi'
        EvidenceTable ev;
        std::vector<std::pair<std::string, Decision>> parts;
        std::vector<std::vector<double>> traces;
        std::vector<double> depth;
        for (auto& [name, p] : {std::pair{std::string("radial"), ctx.radial}, {std::string("upper"), ctx.up},
                                {std::string("lower"), ctx.down}}) {
            auto w = weak_conformality_arg(m, sigma, p, ctx.omega, t);
            for (std::size_t i = 0; i < w.argderivs.size(); ++i)
                ev.add(name, static_cast<int>(i), w.depth[i], w.argderivs[i]);
            parts.emplace_back(name, w.argderiv_decision);
            traces.push_back(w.argderivs);
            depth = w.depth;
        }
        Decision d = combine_all(parts);
        // each path converging is not enough: the limit must not depend on the path
        if (d.verdict == Verdict::holds) {
            std::vector<double> spread(depth.size(), 0.0);
            for (std::size_t i = 0; i < depth.size(); ++i)
                for (const auto& tr : traces) {
                    double e = tr[i] - traces.front()[i];
                    e -= 2 * M_PI * std::round(e / (2 * M_PI));
                    spread[i] = std::max(spread[i], std::abs(e));
                }
            Decision sd = decide_vanishing(depth, spread, t);
            if (sd.verdict != Verdict::holds)
                d = {sd.verdict, "spread of arg phi' across paths: " + sd.rule};
        }
        out.push_back(detail::make_condition("T1c'", d, ev.str()));
    }
    {  // Visser-Ostrowski quotient -> 1
        EvidenceTable ev;
        std::vector<std::pair<std::string, Decision>> parts;
        for (auto& [name, p] : {std::pair{std::string("radial"), ctx.radial}, {std::string("aperture"), ctx.up}}) {
            auto v = visser_ostrowski(m, sigma, p, ctx.omega, t);
            for (std::size_t i = 0; i < v.residual.size(); ++i)
                ev.add(name, static_cast<int>(i), v.depth[i], v.residual[i]);
            parts.emplace_back(name, v.decision);
        }
        out.push_back(detail::make_condition("VO", combine_all(parts), ev.str()));
    }
    return out;
}

// Strong conformality battery at sigma.
inline std::vector<ConditionResult> theorem2_battery(const SelfMap& m, Complex sigma,
                                                     const BoundaryOptions& o = {}) {
    require_disk_map(m);
    require_unimodular(sigma);
    auto ctx = detail::context(m, sigma, o);
    const auto& t = o.trend;
    std::vector<ConditionResult> out;

    {  // (a) integral of the distortion defect
        IntegralEstimate I = integral_I(m, sigma, o.shells, o.series);
        std::ostringstream ev;
        ev.precision(17);
        ev << "shell_index,contribution\n";
        for (std::size_t i = 0; i < I.shells.size(); ++i) ev << i << ',' << I.shells[i] << '\n';
        Verdict v = I.verdict == Convergence::convergent   ? Verdict::holds
                    : I.verdict == Convergence::divergent ? Verdict::fails
                                                          : Verdict::undecided;
        out.push_back({"T2a", v, std::string(convergence_name(I.verdict)) + ": " + I.rule, ev.str()});
    }
    auto fams = pair_families(sigma, o, false);
    {  // (b) k(z,w) - k(phi z, phi w) -> 0
        EvidenceTable ev;
        Decision d = detail::pair_condition(m, fams, ev, t, [](const SelfMap& f, const QComplex& z, const QComplex& w) {
            return num::to_double(num::abs(geo::distance_disk(z, w) -
                                           geo::distance_disk(f.eval(z).value, f.eval(w).value)));
        });
        d.rule += " (sampled pairs)";
        out.push_back(detail::make_condition("T2b", d, ev.str()));
    }
    {  // (b') radial version
        EvidenceTable ev;
        std::vector<PairFamily> radial{{"radial(n,n+1)", ctx.radial, ctx.radial, PairFamily::Index::same},
                                       {"radial(n,n/2)", ctx.radial, ctx.radial, PairFamily::Index::half}};
        // The same-index family on one path is empty; pair consecutive points instead.
        std::vector<std::pair<std::string, Decision>> parts;
        {
            std::vector<double> depth, res;
            for (int n = 1; n + 1 < ctx.radial.length(); ++n) {
                QComplex z = ctx.radial.disk_point(n + 1), w = ctx.radial.disk_point(n);
                double r = num::to_double(num::abs(geo::distance_disk(z, w) -
                                                    geo::distance_disk(m.eval(z).value, m.eval(w).value)));
                depth.push_back(ctx.radial.depth(n + 1));
                res.push_back(r);
                ev.add(radial[0].name, n, depth.back(), r);
            }
            parts.emplace_back(radial[0].name, decide_vanishing(depth, res, t));
        }
        {
            std::vector<double> depth, res;
            for (const PairSample& s : pair_samples(radial[1])) {
                double r = num::to_double(num::abs(geo::distance_disk(s.z, s.w) -
                                                    geo::distance_disk(m.eval(s.z).value, m.eval(s.w).value)));
                depth.push_back(s.depth);
                res.push_back(r);
                ev.add(radial[1].name, s.n, s.depth, r);
            }
            parts.emplace_back(radial[1].name, decide_vanishing(depth, res, t));
        }
        out.push_back(detail::make_condition("T2b'", combine_all(parts), ev.str()));
    }
    {  // (b'') (1 - rho(phi z, phi w)^2)/(1 - rho(z,w)^2) -> 1
        EvidenceTable ev;
        Decision d = detail::pair_condition(m, fams, ev, t, [](const SelfMap& f, const QComplex& z, const QComplex& w) {
            QReal x = geo::one_minus_rho2_disk(f.eval(z).value, f.eval(w).value) / geo::one_minus_rho2_disk(z, w);
            return num::to_double(num::abs(x - QReal(1)));
        });
        d.rule += " (sampled pairs)";
        out.push_back(detail::make_condition("T2b''", d, ev.str()));
    }
    {  // (b''') liminf of the same quotient with w0 = 0 is finite
        EvidenceTable ev;
        std::vector<std::pair<std::string, Decision>> parts;
        QComplex f0 = m.eval(QComplex(0)).value;
        for (auto& [name, p] : {std::pair{std::string("radial"), ctx.radial}, {std::string("aperture"), ctx.up}}) {
            std::vector<double> depth, vals;
            for (int n = 0; n < p.length(); ++n) {
                QComplex z = p.disk_point(n);
                QReal x = geo::one_minus_rho2_disk(m.eval(z).value, f0) / geo::one_minus_rho2_disk(z, QComplex(0));
                depth.push_back(p.depth(n));
                vals.push_back(num::to_double(x));
                ev.add(name, n, depth.back(), vals.back());
            }
            parts.emplace_back(name, decide_finite(depth, vals, t));
        }
        Decision d = combine_any(parts);
        d.rule += " (w0 = 0)";
        out.push_back(detail::make_condition("T2b'''", d, ev.str()));
    }
    {  // (c), (c'), (c'') reproducing kernel conditions
        KernelBoundaryResult k = kernel_boundary_condition(m, sigma, o);
        out.push_back(k.c);
        out.push_back(k.c_prime);
        out.push_back(k.c_second);
    }
    if (!ctx.limit.unimodular) {
        out.push_back(detail::no_boundary_value("T2d"));
        out.push_back(detail::no_boundary_value("T2d-julia"));
        return out;
    }
    {  // (d) finite angular derivative
        AngularDerivative a = angular_derivative(m, sigma, ctx.radial, t, o.unimodular_tol);
        EvidenceTable ev;
        for (std::size_t i = 0; i < a.quotient_moduli.size(); ++i)
            ev.add("radial", static_cast<int>(i), a.depth[i], a.quotient_moduli[i]);
        Decision d = a.decision;
        if (d.verdict == Verdict::fails) d.rule = "infinite angular derivative: " + d.rule;
        out.push_back(detail::make_condition("T2d", d, ev.str()));
    }
    {  // Julia quotient liminf finite
        JuliaProfile j = julia_quotient_profile(m, ctx.radial, t);
        EvidenceTable ev;
        for (std::size_t i = 0; i < j.values.size(); ++i) ev.add("radial", static_cast<int>(i), j.depth[i], j.values[i]);
        out.push_back(detail::make_condition("T2d-julia", j.decision, ev.str()));
    }
    return out;
}

enum class Classification { strong, weak_only, none, inconclusive };

inline const char* classification_name(Classification c) {
    switch (c) {
        case Classification::strong: return "strong";
        case Classification::weak_only: return "weak-only";
        case Classification::none: return "none";
        default: return "inconclusive";
    }
}

struct ConformalityReport {
    std::string map_expression;
    std::string map_family;
    Domain map_domain = Domain::disk;
    Complex sigma;
    Complex boundary_value;
    double boundary_confidence = 0;
    bool boundary_unimodular = false;
    std::optional<AngularDerivative> angular_derivative;
    Classification classification = Classification::inconclusive;
    std::string diagnostic;
    BatteryStatus weak_status = BatteryStatus::undecided;
    BatteryStatus strong_status = BatteryStatus::undecided;
    std::vector<ConditionResult> conditions;
};

inline ConformalityReport classify(const SelfMap& input, Complex sigma, const BoundaryOptions& o = {}) {
    require_unimodular(sigma);
    const SelfMap m = input.domain() == Domain::disk ? input : conjugate_to_disk(input, 1.0);
    ConformalityReport r;
    r.map_expression = input.expression();
    r.map_family = input.family();
    r.map_domain = input.domain();
    r.sigma = sigma;
    auto ctx = detail::context(m, sigma, o);
    r.boundary_value = num::to_double(ctx.omega);
    r.boundary_confidence = ctx.limit.confidence;
    r.boundary_unimodular = ctx.limit.unimodular;
    auto t1 = theorem1_battery(m, sigma, o);
    auto t2 = theorem2_battery(m, sigma, o);
    r.weak_status = battery_status(t1);
    r.strong_status = battery_status(t2);
    r.conditions = t1;
    r.conditions.insert(r.conditions.end(), t2.begin(), t2.end());
    if (ctx.limit.unimodular) {
        try {
            r.angular_derivative = angular_derivative(m, sigma, ctx.radial, o.trend, o.unimodular_tol);
        } catch (const MissingBoundaryValue&) {
        }
    }
    auto t1a = std::find_if(t1.begin(), t1.end(), [](const ConditionResult& c) { return c.id == "T1a"; });
    if (!ctx.limit.unimodular) {
        r.classification = Classification::none;
        r.diagnostic = "boundary value is not unimodular";
    } else if (t1a != t1.end() && t1a->verdict == Verdict::fails && r.weak_status != BatteryStatus::inconsistent) {
        r.classification = Classification::none;
        r.diagnostic = "radial distortion limit below 1";
    } else if (r.weak_status == BatteryStatus::inconsistent || r.strong_status == BatteryStatus::inconsistent) {
        r.classification = Classification::inconclusive;
        r.diagnostic = std::string("contradictory verdicts in the ") +
                       (r.weak_status == BatteryStatus::inconsistent ? "weak" : "strong") + " battery";
    } else if (r.strong_status == BatteryStatus::holds && r.weak_status == BatteryStatus::holds) {
        r.classification = Classification::strong;
    } else if (r.strong_status == BatteryStatus::holds) {
        r.classification = Classification::inconclusive;
        r.diagnostic = "strong battery holds but weak battery does not";
    } else if (r.weak_status == BatteryStatus::holds && r.strong_status == BatteryStatus::fails) {
        r.classification = Classification::weak_only;
    } else if (r.weak_status == BatteryStatus::fails) {
        r.classification = Classification::none;
        r.diagnostic = "weak battery fails";
    } else {
        r.classification = Classification::inconclusive;
        r.diagnostic = std::string("weak battery ") + battery_name(r.weak_status) + ", strong battery " +
                       battery_name(r.strong_status);
    }
    return r;
}

struct GammaSample {
    double s = 0;      // arc length from gamma(0)
    Complex point;     // gamma(s)
    double target = 0; // F(gamma(s)), real
    double imag_residual = 0;
};

struct GammaTrace {
    std::vector<GammaSample> samples;
    bool truncated = false;
    std::string diagnostic;
    double max_relative_imag = 0;   // |Im F(gamma)| / max(1, |F(gamma)|)
    bool targets_increasing = true;
    Decision re_ratio;   // Re gamma(s)/s -> 1
    Decision arg_decay;  // arg gamma(s) -> 0
    double max_k_to_axis = 0;  // sup_{s >= max(1, R)} k_H(gamma(s), s)
};

// Preimage of [R, inf) under F by predictor (dgamma/dt = 1/F'(gamma)) and
// Newton corrector on F(gamma) = t, with t growing geometrically.
inline GammaTrace trace_gamma(const SelfMap& F, double R, int steps, double growth = 0.1,
                              const TrendThresholds& th = {}) {
    if (F.domain() != Domain::half_plane) throw std::invalid_argument("trace_gamma needs a half-plane map");
    if (!(R > 0.0)) throw std::invalid_argument("trace_gamma requires R > 0");
    if (steps < 2) throw std::invalid_argument("trace_gamma requires steps >= 2");
    GammaTrace out;
    auto newton = [&](QComplex g, QReal target, bool& ok) {
        ok = false;
        for (int it = 0; it < 60; ++it) {
            if (!(num::re(g) > QReal(0))) return g;
            Dual<QComplex> r = F.eval_unchecked(g);
            QComplex step = (r.value - QComplex(target)) / r.deriv;
            g -= step;
            if (num::abs(step) <= QReal(1e-28) * boost::multiprecision::fmax(QReal(1), num::abs(g))) {
                ok = num::re(g) > QReal(0);
                return g;
            }
        }
        return g;
    };
    bool ok = false;
    QComplex g = newton(QComplex(QReal(R)), QReal(R), ok);
    if (!ok) {
        out.truncated = true;
        out.diagnostic = "Newton failed at the initial point";
        return out;
    }
    QReal t(R), arc(0);
    QComplex prev = g;
    auto record = [&](const QComplex& p, const QReal& target) {
        QComplex v = F.eval_unchecked(p).value;
        GammaSample s;
        s.s = num::to_double(arc);
        s.point = num::to_double(p);
        s.target = num::to_double(num::re(v));
        s.imag_residual = num::to_double(num::im(v));
        out.max_relative_imag = std::max(out.max_relative_imag,
                                         std::abs(s.imag_residual) / std::max(1.0, std::abs(s.target)));
        if (!out.samples.empty() && !(s.target > out.samples.back().target)) out.targets_increasing = false;
        (void)target;
        out.samples.push_back(s);
    };
    record(g, t);
    double h = growth;
    for (int k = 0; k < steps && !out.truncated;) {
        QReal next = t * QReal(1.0 + h);
        QComplex pred = g + (next - t) / F.eval_unchecked(g).deriv;
        QComplex corr = newton(pred, next, ok);
        if (!ok || num::abs(corr - pred) > QReal(0.5) * num::abs(pred - g) + QReal(1e-20)) {
            h *= 0.5;
            if (h < 1e-8) {
                out.truncated = true;
                out.diagnostic = "Newton corrector diverged";
            }
            continue;
        }
        // arc length by the trapezoid rule on |gamma'| = |1/F'|
        QReal speed0 = QReal(1) / num::abs(F.eval_unchecked(g).deriv);
        QReal speed1 = QReal(1) / num::abs(F.eval_unchecked(corr).deriv);
        arc += QReal(0.5) * (speed0 + speed1) * (next - t);
        prev = g;
        g = corr;
        t = next;
        record(g, t);
        ++k;
        h = std::min(growth, h * 2);
    }
    (void)prev;
    std::vector<double> s, ratio_res, args;
    for (const auto& p : out.samples) {
        if (p.s < 1.0) continue;
        s.push_back(p.s);
        ratio_res.push_back(std::abs(p.point.real() / p.s - 1.0));
        args.push_back(std::abs(std::arg(p.point)));
        if (p.s >= std::max(1.0, R))
            out.max_k_to_axis = std::max(out.max_k_to_axis, geo::distance_halfplane(p.point, Complex(p.s, 0.0)));
    }
    out.re_ratio = decide_vanishing(s, ratio_res, th);
    out.arg_decay = decide_vanishing(s, args, th);
    return out;
}

}  // namespace confbound
