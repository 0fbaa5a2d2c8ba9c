#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "fdd2d/quadrature.hpp"

using namespace fdd2d;

TEST_CASE("basic semi-infinite integrals") {
    const auto exp_decay =
        integrate_semi_infinite([](double t) { return std::exp(-t); });
    CHECK(std::abs(exp_decay.value - 1.0) < 1e-10);
    CHECK(exp_decay.error_estimate < 1e-7);

    const auto inv_square = integrate_semi_infinite(
        [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); });
    CHECK(std::abs(inv_square.value - 1.0) < 1e-10);
}

TEST_CASE("error estimate bounds the true error on known integrals") {
    struct Case {
        const char* name;
        double (*f)(double);
        double truth;
    };
    const Case cases[] = {
        {"exp(-t)", [](double t) { return std::exp(-t); }, 1.0},
        {"(1+t)^-2", [](double t) { return std::pow(1.0 + t, -2.0); }, 1.0},
        {"t exp(-t)", [](double t) { return t * std::exp(-t); }, 1.0},
        {"t^2 exp(-t)", [](double t) { return t * t * std::exp(-t); }, 2.0},
        {"exp(-2t)", [](double t) { return std::exp(-2.0 * t); }, 0.5},
        {"exp(-t^2)", [](double t) { return std::exp(-t * t); },
         std::sqrt(M_PI) / 2.0},
        {"(1+t^2)^-1", [](double t) { return 1.0 / (1.0 + t * t); },
         M_PI / 2.0},
        {"exp(-t) cos t", [](double t) { return std::exp(-t) * std::cos(t); },
         0.5},
        {"exp(-t) sin t", [](double t) { return std::exp(-t) * std::sin(t); },
         0.5},
        {"exp(-sqrt t)", [](double t) { return std::exp(-std::sqrt(t)); },
         2.0},
    };
    for (const auto& c : cases) {
        INFO(c.name);
        const auto r = integrate_semi_infinite(c.f);
        const double err = std::abs(r.value - c.truth);
        CHECK(err < 1e-8 * std::abs(c.truth) + 1e-12);
        CHECK(err <= r.error_estimate + 1e-13);
    }
}

TEST_CASE("finite-interval integration") {
    const auto r = integrate_finite([](double t) { return std::exp(t); }, 0.0,
                                    1.0);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-12);

    // A single Kronrod panel integrates polynomials up to degree 22 exactly;
    // loose tolerances keep the driver from subdividing.
    const auto poly = integrate_finite([](double t) { return std::pow(t, 20.0); },
                                       -1.0, 1.0, {0.9, 0.9, 4});
    CHECK(poly.subdivisions == 0);
    CHECK(std::abs(poly.value - 2.0 / 21.0) < 1e-14);
}

TEST_CASE("divergent integrand exhausts the budget with a typed error") {
    bool caught = false;
    try {
        integrate_semi_infinite([](double t) { return 1.0 / (1.0 + t); },
                                {1e-8, 1e-12, 50});
    } catch (const convergence_error& e) {
        caught = true;
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.best_estimate > 0.0);
        CHECK(e.error_bound > 0.0);
    }
    CHECK(caught);
}

TEST_CASE("invalid specs and intervals are rejected") {
    CHECK_THROWS_AS(
        integrate_finite([](double) { return 0.0; }, 1.0, 0.0),
        invalid_parameter_error);
    CHECK_THROWS_AS(
        integrate_finite([](double) { return 0.0; }, 0.0, 1.0, {0.0, 1e-12, 10}),
        invalid_parameter_error);
    CHECK_THROWS_AS(
        integrate_finite([](double) { return 0.0; }, 0.0, 1.0, {1e-8, 1e-12, 0}),
        invalid_parameter_error);
}

TEST_CASE("non-finite integrands are reported as divergent") {
    CHECK_THROWS_AS(integrate_semi_infinite([](double t) {
                        return t < 1.0
                                   ? std::numeric_limits<double>::infinity()
                                   : 0.0;
                    }),
                    divergence_error);
}

TEST_CASE("tight tolerances drive the achieved accuracy") {
    const QuadratureSpec tight{1e-12, 1e-15, 4000};
    const auto r = integrate_semi_infinite(
        [](double t) { return std::exp(-std::sqrt(t)); }, tight);
    CHECK(std::abs(r.value - 2.0) < 1e-11);
}
