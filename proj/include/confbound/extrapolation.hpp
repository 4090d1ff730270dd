#pragma once

// Sequence limits and tail-trend decision rules.
//
// Every rule returns a verdict plus the name of the rule that fired, so a
// report can show why a condition was decided. Thresholds live in
// TrendThresholds and are configurable.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "precision.hpp"

namespace confbound {

enum class Verdict { holds, fails, undecided };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        default: return "undecided";
    }
}

struct Decision {
    Verdict verdict = Verdict::undecided;
    std::string rule;
};

struct TrendThresholds {
    double abs_tol = 1e-7;         // tail below this counts as converged
    double plateau_floor = 1e-4;   // residual floor for "does not vanish"
    double min_r2 = 0.9;           // goodness of fit for trend rules
    double power_decay = -0.5;     // log-log slope that counts as decay
    double plateau_slope = -0.2;   // log-log slope above which decay has stalled
    double geometric_rate = -0.2;  // slope of log(residual) vs depth for geometric decay
    double summable_slope = -1.5;  // log-log slope of increments that counts as summable
    double growth_slope = 0.3;     // log-log slope that counts as growth to infinity
    double big = 1e6;              // absolute blow-up threshold
    int monotone_run = 10;         // samples of monotone growth confirming blow-up
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int count = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    f.count = static_cast<int>(std::min(x.size(), y.size()));
    if (f.count < 2) return f;
    double mx = 0, my = 0;
    for (int i = 0; i < f.count; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= f.count;
    my /= f.count;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < f.count; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

// Fit log(y) against x (or log x) over the positive entries.
inline LineFit fit_log(const std::vector<double>& x, const std::vector<double>& y, bool log_x) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (y[i] > 0.0 && std::isfinite(y[i]) && (!log_x || x[i] > 0.0)) {
            xs.push_back(log_x ? std::log(x[i]) : x[i]);
            ys.push_back(std::log(y[i]));
        }
    }
    return fit_line(xs, ys);
}

template <class T> struct LimitEstimate {
    T value{};
    bool extrapolated = false;  // Richardson correction applied
    bool converged = false;     // geometric fit accepted or tail stationary
    double ratio = 0.0;         // fitted geometric ratio of increments
    double r2 = 0.0;
    double tail_change = 0.0;   // |x_N - x_{N-1}|
};

// Limit of x_n assuming x_n = L + c r^n eventually. The ratio r is fitted
// from the increments; the correction is skipped when R^2 < min_r2.
template <class T>
LimitEstimate<T> extrapolate_limit(const std::vector<T>& x, int window = 12,
                                   double min_r2 = 0.99) {
    LimitEstimate<T> out;
    if (x.empty()) return out;
    out.value = x.back();
    if (x.size() < 3) return out;
    std::size_t n = x.size();
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), n - 1);
    std::vector<double> idx, mag;
    for (std::size_t k = n - w; k < n; ++k) {
        double d = num::to_double(num::abs(x[k] - x[k - 1]));
        idx.push_back(static_cast<double>(k));
        mag.push_back(d);
    }
    out.tail_change = mag.back();
    double scale = std::max(1.0, num::to_double(num::abs(x.back())));
    bool stationary = std::all_of(mag.end() - std::min<std::size_t>(3, mag.size()), mag.end(),
                                  [&](double d) { return d <= 1e-30 * scale; });
    if (stationary) {
        out.converged = true;
        out.ratio = 0.0;
        out.r2 = 1.0;
        return out;
    }
    LineFit f = fit_log(idx, mag, false);
    out.r2 = f.r2;
    out.ratio = std::exp(f.slope);
    if (f.count >= 4 && f.r2 >= min_r2 && out.ratio < 0.95) {
        using R = decltype(num::abs(x.back() - x.back()));
        R r = R(out.ratio);
        out.value = x.back() + (x.back() - x[n - 2]) * (r / (R(1) - r));
        out.extrapolated = true;
        out.converged = true;
    }
    return out;
}

namespace detail {

template <class T> std::vector<T> tail_of(const std::vector<T>& v, std::size_t min_len = 8) {
    std::size_t len = std::max(min_len, v.size() / 2);
    len = std::min(len, v.size());
    return std::vector<T>(v.end() - len, v.end());
}

inline bool monotone_increasing(const std::vector<double>& v, int run) {
    if (static_cast<int>(v.size()) < run) return false;
    for (std::size_t i = v.size() - run + 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

}  // namespace detail

// residual(depth) -> 0 ?
inline Decision decide_vanishing(const std::vector<double>& depth, const std::vector<double>& residual,
                                 const TrendThresholds& t = {}) {
    auto u = detail::tail_of(depth), e = detail::tail_of(residual);
    if (e.empty()) return {Verdict::undecided, "no samples"};
    for (double v : e)
        if (!std::isfinite(v)) return {Verdict::undecided, "non-finite residual"};
    double emax = *std::max_element(e.begin(), e.end());
    double emin = *std::min_element(e.begin(), e.end());
    if (emax <= t.abs_tol) return {Verdict::holds, "tail below tolerance"};
    LineFit ex = fit_log(u, e, false), pw = fit_log(u, e, true);
    bool shrinking = e.back() < e.front();
    if (ex.count >= 4 && ex.r2 >= t.min_r2 && ex.slope <= t.geometric_rate && shrinking)
        return {Verdict::holds, "geometric decay"};
    if (pw.count >= 4 && pw.r2 >= t.min_r2 && pw.slope <= t.power_decay && shrinking)
        return {Verdict::holds, "power-law decay"};
    if (emin >= t.plateau_floor && pw.slope >= t.plateau_slope)
        return {Verdict::fails, pw.slope > -t.plateau_slope ? "residual grows" : "residual plateau"};
    return {Verdict::undecided, "no rule fired"};
}

// x(depth) converges to a finite value (holds) or grows without bound (fails)?
inline Decision decide_finite(const std::vector<double>& depth, const std::vector<double>& x,
                              const TrendThresholds& t = {}) {
    auto u = detail::tail_of(depth), v = detail::tail_of(x);
    if (v.size() < 4) return {Verdict::undecided, "too few samples"};
    for (double a : v)
        if (!std::isfinite(a)) return {Verdict::fails, "non-finite values"};
    std::vector<double> d, ud;
    for (std::size_t i = 1; i < v.size(); ++i) {
        d.push_back(std::abs(v[i] - v[i - 1]));
        ud.push_back(u[i]);
    }
    double scale = std::max(1.0, std::abs(v.back()));
    double dmax = *std::max_element(d.begin(), d.end());
    if (dmax <= t.abs_tol * scale) return {Verdict::holds, "Cauchy tail below tolerance"};
    std::vector<double> mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    if (std::abs(v.back()) >= t.big && detail::monotone_increasing(mags, t.monotone_run))
        return {Verdict::fails, "monotone growth beyond threshold"};
    LineFit gx = fit_log(u, mags, true);
    if (gx.count >= 4 && gx.r2 >= t.min_r2 && gx.slope >= t.growth_slope &&
        mags.back() > mags.front())
        return {Verdict::fails, "power-law growth"};
    LineFit ex = fit_log(ud, d, false), pw = fit_log(ud, d, true);
    if (ex.count >= 4 && ex.r2 >= t.min_r2 && ex.slope <= t.geometric_rate)
        return {Verdict::holds, "geometric increments"};
    if (pw.count >= 4 && pw.r2 >= t.min_r2 && pw.slope <= t.summable_slope)
        return {Verdict::holds, "summable increments"};
    return {Verdict::undecided, "no rule fired"};
}

// x(depth) is a Cauchy sequence (holds) or keeps moving (fails)?
inline Decision decide_cauchy(const std::vector<double>& depth, const std::vector<double>& x,
                              const TrendThresholds& t = {}) {
    auto u = detail::tail_of(depth), v = detail::tail_of(x);
    if (v.size() < 4) return {Verdict::undecided, "too few samples"};
    std::vector<double> d, ud;
    for (std::size_t i = 1; i < v.size(); ++i) {
        d.push_back(std::abs(v[i] - v[i - 1]));
        ud.push_back(u[i]);
    }
    for (double a : d)
        if (!std::isfinite(a)) return {Verdict::undecided, "non-finite values"};
    double dmax = *std::max_element(d.begin(), d.end());
    double dmin = *std::min_element(d.begin(), d.end());
    double scale = std::max(1.0, std::abs(v.back()));
    if (dmax <= t.abs_tol * scale) return {Verdict::holds, "Cauchy tail below tolerance"};
    LineFit ex = fit_log(ud, d, false), pw = fit_log(ud, d, true);
    if (ex.count >= 4 && ex.r2 >= t.min_r2 && ex.slope <= t.geometric_rate)
        return {Verdict::holds, "geometric increments"};
    if (pw.count >= 4 && pw.r2 >= t.min_r2 && pw.slope <= t.summable_slope)
        return {Verdict::holds, "summable increments"};
    if (dmin >= t.plateau_floor && pw.slope >= t.plateau_slope)
        return {Verdict::fails, "increments do not decay"};
    return {Verdict::undecided, "no rule fired"};
}

enum class Convergence { convergent, divergent, undecided };

inline const char* convergence_name(Convergence c) {
    switch (c) {
        case Convergence::convergent: return "convergent";
        case Convergence::divergent: return "divergent";
        default: return "undecided";
    }
}

struct SeriesVerdict {
    Convergence verdict = Convergence::undecided;
    double ratio = 1.0;
    double tail_bound = 0.0;
    std::string rule;
};

struct SeriesThresholds {
    double negligible = 1e-15;  // terms below this are rounding noise
    double max_ratio = 0.95;
    int min_terms = 8;
    double divergence_floor = 1e-4;
    double min_r2 = 0.9;
};

// Convergence of sum_n t_n from its terms: geometric tail fit over the last
// significant terms, or a positive floor across the last half.
inline SeriesVerdict decide_series(const std::vector<double>& terms, const SeriesThresholds& s = {}) {
    SeriesVerdict out;
    if (terms.empty()) {
        out.rule = "no terms";
        return out;
    }
    std::size_t half = terms.size() / 2;
    std::vector<double> tail(terms.begin() + half, terms.end());
    double tmax = 0.0, tmin = std::numeric_limits<double>::infinity();
    for (double v : tail) {
        tmax = std::max(tmax, std::abs(v));
        tmin = std::min(tmin, v);
    }
    if (tmax <= s.negligible) {
        out.verdict = Convergence::convergent;
        out.ratio = 0.0;
        out.tail_bound = s.negligible * static_cast<double>(tail.size());
        out.rule = "negligible tail";
        return out;
    }
    if (tmin >= s.divergence_floor) {
        out.verdict = Convergence::divergent;
        out.rule = "terms bounded below across last half";
        return out;
    }
    // last significant run of at least min_terms entries
    std::vector<double> idx, val;
    for (std::size_t i = terms.size(); i-- > 0;) {
        if (terms[i] > s.negligible) {
            idx.insert(idx.begin(), static_cast<double>(i));
            val.insert(val.begin(), terms[i]);
            if (static_cast<int>(idx.size()) >= s.min_terms) break;
        }
    }
    if (static_cast<int>(idx.size()) < s.min_terms) {
        out.rule = "too few significant terms";
        return out;
    }
    LineFit f = fit_log(idx, val, false);
    out.ratio = std::exp(f.slope);
    if (f.r2 >= s.min_r2 && out.ratio < s.max_ratio) {
        out.verdict = Convergence::convergent;
        out.tail_bound = val.back() * out.ratio / (1.0 - out.ratio) +
                         s.negligible * static_cast<double>(terms.size());
        out.rule = "geometric tail";
        return out;
    }
    out.rule = "no rule fired";
    return out;
}

}  // namespace confbound
