#pragma once

#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "fdd2d/errors.hpp"
#include "fdd2d/zipf.hpp" // detail::KahanSum

namespace fdd2d {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

inline void validate(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw invalid_parameter_error("quadrature: tolerances must be > 0");
    if (spec.max_subdivisions < 1)
        throw invalid_parameter_error("quadrature: max_subdivisions must be >= 1");
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (positive half).
inline constexpr double gk15_nodes[8] = {
    0.9914553711208126392069, 0.9491079123427585245262,
    0.8648644233597690727897, 0.7415311855993944398639,
    0.5860872354676911302941, 0.4058451513773971669066,
    0.2077849550078984676007, 0.0};
inline constexpr double gk15_kronrod_w[8] = {
    0.0229353220105292249637, 0.0630920926299785532907,
    0.1047900103222501838399, 0.1406532597155259187452,
    0.1690047266392679028266, 0.1903505780647854099133,
    0.2044329400752988924142, 0.2094821410847278280130};
inline constexpr double gk15_gauss_w[4] = {
    0.1294849661688696932706, 0.2797053914892766679015,
    0.3818300505051189449504, 0.4179591836734693877551};

struct Segment {
    double a, b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// One Gauss-Kronrod panel with the QUADPACK-style error estimate.
template <typename F>
Segment gk15_panel(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    // Node k maps to center +/- half*gk15_nodes[k]; index 7 is the center.
    for (int k = 0; k < 7; ++k) {
        fv[k] = f(center - half * gk15_nodes[k]);
        fv[14 - k] = f(center + half * gk15_nodes[k]);
    }
    fv[7] = f(center);

    double resk = gk15_kronrod_w[7] * fv[7];
    double resg = gk15_gauss_w[3] * fv[7];
    for (int k = 0; k < 7; ++k) {
        resk += gk15_kronrod_w[k] * (fv[k] + fv[14 - k]);
        if (k % 2 == 1)
            resg += gk15_gauss_w[k / 2] * (fv[k] + fv[14 - k]);
    }

    const double reskh = 0.5 * resk;
    double resasc = gk15_kronrod_w[7] * std::abs(fv[7] - reskh);
    for (int k = 0; k < 7; ++k)
        resasc += gk15_kronrod_w[k] *
                  (std::abs(fv[k] - reskh) + std::abs(fv[14 - k] - reskh));

    double err = std::abs(resk - resg) * half;
    resasc *= half;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));

    return Segment{a, b, resk * half, err};
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
// Subdivides the segment with the largest error estimate until the summed
// estimate meets max(abs_tol, rel_tol*|result|).
template <typename F>
QuadratureResult integrate_finite(F&& f, double a, double b,
                                  const QuadratureSpec& spec = {}) {
    validate(spec);
    if (!(a < b))
        throw invalid_parameter_error("quadrature: requires a < b");

    std::priority_queue<detail::Segment> segments;
    detail::Segment first = detail::gk15_panel(f, a, b);
    if (!std::isfinite(first.value) || !std::isfinite(first.error))
        throw divergence_error("quadrature: integrand is not finite on the interval");

    double total = first.value;
    double total_err = first.error;
    segments.push(first);

    int splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (splits >= spec.max_subdivisions)
            throw convergence_error(
                "quadrature: subdivision budget exhausted", total, total_err);
        const detail::Segment worst = segments.top();
        segments.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw convergence_error(
                "quadrature: interval collapsed below machine resolution",
                total, total_err);
        const detail::Segment left = detail::gk15_panel(f, worst.a, mid);
        const detail::Segment right = detail::gk15_panel(f, mid, worst.b);
        if (!std::isfinite(left.value) || !std::isfinite(right.value))
            throw divergence_error("quadrature: integrand is not finite on the interval");
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
        ++splits;
    }

    // Re-sum the segment values once with compensation; the incremental total
    // above accumulates cancellation over thousands of splits.
    detail::KahanSum value, err;
    while (!segments.empty()) {
        value.add(segments.top().value);
        err.add(segments.top().error);
        segments.pop();
    }
    return QuadratureResult{value.value(), err.value(), splits};
}

// Integral of f over [0, inf), via the map tau = t/(1-t) onto t in [0, 1):
//   int_0^inf f(tau) dtau = int_0^1 f(t/(1-t)) / (1-t)^2 dt.
// Panel nodes are interior, so f is never evaluated at infinity. The
// integrand must be continuous on [0, inf) and absolutely integrable.
template <typename F>
QuadratureResult integrate_semi_infinite(F&& f, const QuadratureSpec& spec = {}) {
    auto mapped = [&f](double t) {
        // Panel nodes of a shrinking rightmost interval can round onto
        // t = 1; evaluate at the closest interior point instead so a
        // divergent tail shows up as budget exhaustion, not NaN.
        if (t >= 1.0) t = std::nextafter(1.0, 0.0);
        const double one_minus = 1.0 - t;
        const double tau = t / one_minus;
        return f(tau) / (one_minus * one_minus);
    };
    return integrate_finite(mapped, 0.0, 1.0, spec);
}

} // namespace fdd2d
