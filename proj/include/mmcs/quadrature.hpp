#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace mmcs {

struct QuadratureOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    int max_depth = 28;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;   // accumulated bisection error estimate
    bool converged = true;
    long evaluations = 0;

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        abs_error += o.abs_error;
        converged = converged && o.converged;
        evaluations += o.evaluations;
        return *this;
    }
};

namespace detail {

// 15-point Gauss-Legendre nodes/weights on [-1,1]
inline constexpr double kGlNodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
inline constexpr double kGlWeights[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

template <class F>
double gl_panel(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 15; ++i) acc += kGlWeights[i] * f(mid + half * kGlNodes[i]);
    return acc * half;
}

template <class F>
void adapt(F&& f, double a, double b, double whole, double tol, int depth,
           const QuadratureOptions& opt, QuadratureResult& out) {
    double mid = 0.5 * (a + b);
    double left = gl_panel(f, a, mid);
    double right = gl_panel(f, mid, b);
    out.evaluations += 30;
    double err = std::abs(left + right - whole);
    // below this, the panel difference is double-rounding noise, not signal
    double noise = 64.0 * 2.220446049250313e-16 * (std::abs(left) + std::abs(right));
    if (err <= tol || err <= noise || depth >= opt.max_depth) {
        out.value += left + right;
        out.abs_error += err;
        if (depth >= opt.max_depth && err > tol && err > noise) out.converged = false;
        return;
    }
    adapt(f, a, mid, left, tol * 0.5, depth + 1, opt, out);
    adapt(f, mid, b, right, tol * 0.5, depth + 1, opt, out);
}

}  // namespace detail

// Adaptive composite Gauss-Legendre on [a,b]; panels are pre-split at the given
// breakpoints (integrand kinks), then bisected until the local error estimate
// meets max(abs_tol, rel_tol * |estimate|).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
                           const QuadratureOptions& opt = {}) {
    QuadratureResult out;
    if (!(b > a)) return out;
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double coarse = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) coarse += detail::gl_panel(f, cuts[i], cuts[i + 1]);
    double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double whole = detail::gl_panel(f, cuts[i], cuts[i + 1]);
        out.evaluations += 15;
        detail::adapt(f, cuts[i], cuts[i + 1], whole, tol / static_cast<double>(cuts.size()), 0,
                      opt, out);
    }
    return out;
}

// Integral over [a, inf) via the rational map t = a + S u/(1-u), which folds
// the whole half-line onto u in [0,1) and turns power-law tails (t^-p, p > 1)
// into integrands vanishing smoothly at u = 1. The scale S places t = a + S at
// u = 1/2; 0 picks one from the breakpoints. Gauss-Legendre nodes never touch
// the endpoints, so f is only ever evaluated at finite t.
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, std::span<const double> breakpoints = {},
                                       double scale = 0.0, const QuadratureOptions& opt = {}) {
    double s = scale;
    if (s <= 0.0) {
        s = 1.0;
        for (double c : breakpoints) s = std::max(s, c - a);
        s = std::max(s, 0.25 * a);
    }
    auto g = [&](double u) {
        double om = 1.0 - u;
        double t = a + s * u / om;
        return f(t) * s / (om * om);
    };
    std::vector<double> cuts;
    cuts.reserve(breakpoints.size() + 1);
    for (double c : breakpoints)
        if (c > a) cuts.push_back((c - a) / (c - a + s));
    cuts.push_back(0.5);
    return integrate(g, 0.0, 1.0, cuts, opt);
}

}  // namespace mmcs
