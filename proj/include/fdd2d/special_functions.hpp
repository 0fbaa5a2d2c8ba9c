#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "fdd2d/errors.hpp"

namespace fdd2d {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240;

// 1/sin(x). Rejects evaluation where sin vanishes.
inline double csc(double x) {
    const double s = std::sin(x);
    if (s == 0.0)
        throw pole_error("csc: pole at multiple of pi");
    return 1.0 / s;
}

namespace detail {

// Auxiliary functions for the trigonometric integrals at x > 4:
//   Si(x) = pi/2 - f(x) cos(x) - g(x) sin(x)
//   Ci(x) = f(x) sin(x) - g(x) cos(x)
// where f(x) = int_0^inf sin(t)/(x+t) dt and g(x) = int_0^inf cos(t)/(x+t) dt.
// Rational fits in 1/x^2, good to ~1e-16 for x >= 4 (the widely used
// Chebyshev-Pade coefficients, e.g. GalSim / Wikipedia trig-integral page).
inline void si_ci_aux(double x, double& f, double& g) {
    const double y = 1.0 / (x * x);
    f = (1.0 +
         y * (7.44437068161936700618e2 +
         y * (1.96396372895146869801e5 +
         y * (2.37750310125431834034e7 +
         y * (1.43073403821274636888e9 +
         y * (4.33736238870432522765e10 +
         y * (6.40533830574022022911e11 +
         y * (4.20968180571076940208e12 +
         y * (1.00795182980368574617e13 +
         y * (4.94816688199951963482e12 +
         y * (-4.94701168645415959931e11))))))))))) /
        (x * (1.0 +
         y * (7.46437068161927678031e2 +
         y * (1.97865247031583951450e5 +
         y * (2.41535670165126845144e7 +
         y * (1.47478952192985464958e9 +
         y * (4.58595115847765779830e10 +
         y * (7.08501308149515401563e11 +
         y * (5.06084464593475076774e12 +
         y * (1.43468549171581016479e13 +
         y * (1.11535493509914254097e13)))))))))));
    g = y * (1.0 +
        y * (8.1359520115168615e2 +
        y * (2.35239181626478200e5 +
        y * (3.12557570795778731e7 +
        y * (2.06297595146763354e9 +
        y * (6.83052205423625007e10 +
        y * (1.09049528450362786e12 +
        y * (7.57664583257834349e12 +
        y * (1.81004487464664575e13 +
        y * (6.43291613143049485e12 +
        y * (-1.36517137670871689e12))))))))))) /
        (1.0 +
        y * (8.19595201151451564e2 +
        y * (2.40036752835578777e5 +
        y * (3.26026661647090822e7 +
        y * (2.23355543278099360e9 +
        y * (7.87465017341829930e10 +
        y * (1.39866710696414565e12 +
        y * (1.17164723371736605e13 +
        y * (4.01839087307656620e13 +
        y * (3.99653257887490811e13))))))))));
}

} // namespace detail

// Sine integral Si(x) = int_0^x sin(t)/t dt for x >= 0.
// Maclaurin series up to x = 4, auxiliary-function form beyond; the two
// regimes agree to ~1e-15 at the seam.
inline double sine_integral(double x) {
    if (!(x >= 0.0))
        throw invalid_parameter_error("sine_integral: x must be >= 0");
    if (x <= 4.0) {
        const double x2 = x * x;
        double term = x;
        double sum = x;
        for (std::size_t k = 0; k < 64; ++k) {
            const double kk = static_cast<double>(2 * k);
            term *= -x2 * (kk + 1.0) / ((kk + 2.0) * (kk + 3.0) * (kk + 3.0));
            sum += term;
            if (std::abs(term) <= std::numeric_limits<double>::epsilon() * std::abs(sum))
                break;
        }
        return sum;
    }
    double f, g;
    detail::si_ci_aux(x, f, g);
    return M_PI / 2.0 - f * std::cos(x) - g * std::sin(x);
}

// Cosine integral ci(x) = -int_x^inf cos(t)/t dt for x > 0.
// Series gamma + ln(x) + sum_k (-x^2)^k / (2k (2k)!) up to x = 4,
// auxiliary-function form beyond. Logarithmically singular at 0.
inline double cosine_integral(double x) {
    if (!(x > 0.0))
        throw invalid_parameter_error(
            "cosine_integral: x must be > 0 (log singularity at 0)");
    if (x <= 4.0) {
        const double x2 = x * x;
        double term = -x2 / 4.0;
        double sum = term;
        for (std::size_t k = 1; k < 64; ++k) {
            const double kk = static_cast<double>(2 * k);
            term *= -x2 * kk / ((kk + 2.0) * (kk + 2.0) * (kk + 1.0));
            sum += term;
            if (std::abs(term) <= std::numeric_limits<double>::epsilon() * std::abs(sum))
                break;
        }
        return euler_gamma + std::log(x) + sum;
    }
    double f, g;
    detail::si_ci_aux(x, f, g);
    return f * std::sin(x) - g * std::cos(x);
}

} // namespace fdd2d
