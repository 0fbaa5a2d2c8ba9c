#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fdd2d/analytic.hpp"
#include "fdd2d/caching.hpp"
#include "fdd2d/rng.hpp"

using namespace fdd2d;

namespace {

SystemParams interference_limited() {
    SystemParams p;
    p.lambda = 1e-3;
    p.mu = 0.3;
    p.alpha = 4.0;
    p.beta = 0.0;
    p.rho_d = 0.1;
    p.sigma2 = 0.0;
    p.theta_d = 10.0;
    p.r_d = 10.0;
    return p;
}

CollaborationProbabilities collab_for(double lambda, double gamma_r,
                                      double mu = 0.3) {
    const std::size_t n = expected_demanders(mu, lambda, 500.0);
    if (n < 1) return {0.0, 0.0};
    return collaboration_probabilities(
        build_caching_profile({10000, gamma_r}, 10, n));
}

} // namespace

TEST_CASE("interferer intensity is the thinned density") {
    SystemParams p = interference_limited();
    CollaborationProbabilities collab{0.4, 0.2};
    CHECK(interferer_intensity(p, DuplexMode::fd, collab) ==
          Catch::Approx(0.3 * 0.2 * 1e-3).margin(1e-18));
    CHECK(interferer_intensity(p, DuplexMode::hd, collab) ==
          Catch::Approx(0.3 * 0.4 * 1e-3).margin(1e-18));
    p.mu = 0.0;
    CHECK(interferer_intensity(p, DuplexMode::fd, collab) == 0.0);
}

TEST_CASE("laplace transform limits") {
    const SystemParams p = interference_limited();
    const CollaborationProbabilities collab{0.3, 0.3};
    CHECK(laplace_interference(0.0, p, DuplexMode::hd, collab) == 1.0);

    SystemParams empty = p;
    empty.lambda = 0.0;
    for (double s : {1.0, 1e3, 1e7})
        CHECK(laplace_interference(s, empty, DuplexMode::fd, collab) == 1.0);

    CHECK_THROWS_AS(laplace_interference(-1.0, p, DuplexMode::hd, collab),
                    invalid_parameter_error);
    SystemParams bad = p;
    bad.alpha = 2.0;
    CHECK_THROWS_AS(laplace_interference(1.0, bad, DuplexMode::hd, collab),
                    divergence_error);
}

TEST_CASE("general laplace transform collapses to the alpha=4 form") {
    CounterRng rng(20240809, 0);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        SystemParams p = interference_limited();
        p.lambda = std::pow(10.0, -6.0 + 4.0 * rng.next_uniform());
        p.mu = rng.next_uniform();
        const double s = std::pow(10.0, 2.0 + 5.0 * rng.next_uniform());
        const CollaborationProbabilities collab{rng.next_uniform(),
                                                rng.next_uniform()};
        const DuplexMode mode = i % 2 == 0 ? DuplexMode::hd : DuplexMode::fd;
        const double general = laplace_interference(s, p, mode, collab);
        const double special = laplace_interference_alpha4(s, p, mode, collab);
        if (general > 0.0) {
            CHECK(std::abs(general - special) <= 1e-12 * general);
            ++checked;
        }
    }
    CHECK(checked >= 90); // nearly all draws stay clear of exp underflow
}

TEST_CASE("outage vanishes as the threshold vanishes") {
    SystemParams p = interference_limited();
    p.beta = 1e-5;
    p.theta_d = 1e-12;
    const auto collab = collab_for(p.lambda, 1.2);
    CHECK(outage_probability(p, DuplexMode::fd, collab) < 1e-6);
    CHECK(outage_probability(p, DuplexMode::hd, collab) < 1e-6);
}

TEST_CASE("noise-only outage reduces to the Rayleigh formula") {
    SystemParams p = interference_limited();
    p.lambda = 0.0;
    p.beta = 0.0;
    p.sigma2 = 2e-6;
    const CollaborationProbabilities collab{0.0, 0.0};
    const double expected =
        1.0 - std::exp(-p.theta_d * std::pow(p.r_d, p.alpha) * p.sigma2 /
                       p.rho_d);
    CHECK(outage_probability(p, DuplexMode::hd, collab) ==
          Catch::Approx(expected).margin(1e-15));
}

TEST_CASE("FD outage sits above HD outage across densities") {
    for (double lambda : {1e-5, 1e-4, 1e-3, 1e-2}) {
        SystemParams p = interference_limited();
        p.lambda = lambda;
        p.beta = 1e-5;
        p.theta_d = db_to_linear(10.0);
        const auto collab = collab_for(lambda, 1.2);
        const double hd = outage_probability(p, DuplexMode::hd, collab);
        const double fd = outage_probability(p, DuplexMode::fd, collab);
        CHECK(fd >= hd);
    }
}

TEST_CASE("outage is monotone in the driving parameters") {
    const auto base_collab = collab_for(1e-3, 1.2);
    auto outage_at = [&](auto setter) {
        SystemParams p = interference_limited();
        p.beta = 1e-5;
        p.sigma2 = 1e-7;
        setter(p);
        return outage_probability(p, DuplexMode::fd, base_collab);
    };

    double prev = -1.0;
    for (double lambda : {1e-5, 1e-4, 5e-4, 1e-3, 5e-3}) {
        const double v = outage_at([&](SystemParams& p) { p.lambda = lambda; });
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1.0;
    for (double mu : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        const double v = outage_at([&](SystemParams& p) { p.mu = mu; });
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1.0;
    for (double theta : {0.1, 1.0, 5.0, 10.0, 100.0}) {
        const double v = outage_at([&](SystemParams& p) { p.theta_d = theta; });
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1.0;
    for (double beta : {0.0, 1e-6, 1e-5, 1e-4, 1e-3}) {
        const double v = outage_at([&](SystemParams& p) { p.beta = beta; });
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1.0;
    for (double sigma2 : {0.0, 2.5e-6, 5e-6, 7.5e-6, 1e-5}) {
        const double v = outage_at([&](SystemParams& p) { p.sigma2 = sigma2; });
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1.0;
    for (double rd : {5.0, 10.0, 15.0, 20.0, 30.0}) {
        const double v = outage_at([&](SystemParams& p) { p.r_d = rd; });
        CHECK(v >= prev);
        prev = v;
    }
    // more power helps only against noise
    prev = 2.0;
    for (double rho : {0.01, 0.1, 1.0, 10.0}) {
        const double v = outage_at([&](SystemParams& p) { p.rho_d = rho; });
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("one minus outage factorizes into the fade and interference terms") {
    SystemParams p = interference_limited();
    p.beta = 1e-5;
    p.sigma2 = 2e-6;
    const CollaborationProbabilities collab{0.3, 0.4};
    const double r_alpha = std::pow(p.r_d, p.alpha);
    const double j = std::exp(-p.theta_d * r_alpha *
                              (p.sigma2 + p.beta * p.rho_d) / p.rho_d);
    const double l = laplace_interference(p.theta_d * r_alpha / p.rho_d, p,
                                          DuplexMode::fd, collab);
    CHECK(outage_probability(p, DuplexMode::fd, collab) == 1.0 - j * l);
}

TEST_CASE("outage is invariant to transmit power without noise") {
    const auto collab = collab_for(1e-3, 1.2);
    SystemParams p = interference_limited();
    p.beta = 1e-5;
    p.sigma2 = 0.0;
    p.rho_d = 1e-3;
    const double reference = outage_probability(p, DuplexMode::fd, collab);
    for (double rho : {1e-2, 1e-1, 1.0}) {
        p.rho_d = rho;
        const double v = outage_probability(p, DuplexMode::fd, collab);
        CHECK(std::abs(v - reference) <= 1e-12 * reference);
    }
}

TEST_CASE("spectral efficiency doubles exactly with kappa") {
    SystemParams p = interference_limited();
    const CollaborationProbabilities same{0.3, 0.3};
    const double hd = spectral_efficiency(p, DuplexMode::hd, same);
    const double fd = spectral_efficiency(p, DuplexMode::fd, same);
    CHECK(std::abs(fd - 2.0 * hd) <= 1e-12 * fd);

    const double hd_closed =
        closed_form_se_interference_limited(p, DuplexMode::hd, same);
    const double fd_closed =
        closed_form_se_interference_limited(p, DuplexMode::fd, same);
    CHECK(std::abs(fd_closed - 2.0 * hd_closed) <= 1e-12 * fd_closed);
}

TEST_CASE("noise-only spectral efficiency matches the fading average") {
    SystemParams p = interference_limited();
    p.lambda = 0.0;
    p.sigma2 = 1e-6;
    const CollaborationProbabilities none{0.0, 0.0};
    const double closed = spectral_efficiency(p, DuplexMode::hd, none);
    // Independent route: E[log2(1 + g h)] over the unit-mean exponential
    // fade h, with g the mean received SNR.
    const double g = p.rho_d * std::pow(p.r_d, -p.alpha) / p.sigma2;
    const auto direct = integrate_semi_infinite(
        [g](double h) { return std::log2(1.0 + g * h) * std::exp(-h); },
        {1e-10, 1e-14, 4000});
    CHECK(closed == Catch::Approx(direct.value).epsilon(1e-7));
}

TEST_CASE("closed form agrees with quadrature in the interference-limited regime") {
    SystemParams p = interference_limited();
    const CollaborationProbabilities collab{0.3, 0.3};
    for (DuplexMode mode : {DuplexMode::hd, DuplexMode::fd}) {
        const double quad = spectral_efficiency(p, mode, collab);
        const double closed =
            closed_form_se_interference_limited(p, mode, collab);
        CHECK(std::abs(quad - closed) <= 1e-6 * std::abs(closed));
    }
}

TEST_CASE("closed form rejects out-of-regime parameters") {
    const CollaborationProbabilities collab{0.3, 0.3};
    SystemParams p = interference_limited();
    p.sigma2 = 1e-6;
    CHECK_THROWS_AS(
        closed_form_se_interference_limited(p, DuplexMode::hd, collab),
        invalid_parameter_error);
    p = interference_limited();
    p.alpha = 3.5;
    CHECK_THROWS_AS(
        closed_form_se_interference_limited(p, DuplexMode::hd, collab),
        invalid_parameter_error);
    p = interference_limited();
    p.beta = 1e-5;
    CHECK_THROWS_AS(
        closed_form_se_interference_limited(p, DuplexMode::fd, collab),
        invalid_parameter_error);
    // HD ignores beta, so the closed form still applies there
    CHECK_NOTHROW(
        closed_form_se_interference_limited(p, DuplexMode::hd, collab));
}

TEST_CASE("dense interference drives the rate to zero") {
    SystemParams p = interference_limited();
    const CollaborationProbabilities collab{0.5, 0.5};
    auto se_at = [&](double lambda) {
        SystemParams q = p;
        q.lambda = lambda;
        return closed_form_se_interference_limited(q, DuplexMode::hd, collab);
    };
    const double sparse = se_at(1e-4);
    const double mid = se_at(1e-2);
    const double dense = se_at(1.0);
    CHECK(sparse > mid);
    CHECK(mid > dense);
    CHECK(dense < 0.01);
}

TEST_CASE("spectral efficiency is monotone where interference grows") {
    const auto collab = collab_for(1e-3, 1.2);
    SystemParams p = interference_limited();
    p.beta = 1e-6;
    double prev = 1e300;
    for (double lambda : {1e-5, 1e-4, 5e-4, 1e-3, 5e-3}) {
        SystemParams q = p;
        q.lambda = lambda;
        const double v = spectral_efficiency(q, DuplexMode::fd, collab);
        CHECK(v <= prev);
        prev = v;
    }
    prev = 1e300;
    for (double beta : {0.0, 1e-7, 1e-6, 1e-5, 1e-4}) {
        SystemParams q = p;
        q.beta = beta;
        const double v = spectral_efficiency(q, DuplexMode::fd, collab);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("degenerate attenuation-free spectral efficiency diverges") {
    SystemParams p = interference_limited();
    p.lambda = 0.0;
    p.sigma2 = 0.0;
    p.beta = 0.0;
    const CollaborationProbabilities none{0.0, 0.0};
    CHECK_THROWS_AS(spectral_efficiency(p, DuplexMode::hd, none),
                    divergence_error);
    CHECK_THROWS_AS(
        closed_form_se_interference_limited(p, DuplexMode::hd, none),
        divergence_error);
}

TEST_CASE("sinr composition") {
    SystemParams p = interference_limited();
    p.beta = 0.7;
    p.sigma2 = 1e-6;
    // HD carries no self-interference term at all
    const double hd = sinr_value(p, DuplexMode::hd, 1.0, 0.0);
    CHECK(hd == Catch::Approx(p.rho_d * std::pow(p.r_d, -4.0) / p.sigma2)
                    .epsilon(1e-15));
    // beta = 1 leaks the full transmit power
    p.beta = 1.0;
    p.sigma2 = 0.0;
    const double fd = sinr_value(p, DuplexMode::fd, 2.0, 0.0);
    CHECK(fd == Catch::Approx(2.0 * std::pow(p.r_d, -4.0)).epsilon(1e-15));
    // equal signal and noise
    p.sigma2 = p.rho_d * std::pow(p.r_d, -4.0);
    CHECK(sinr_value(p, DuplexMode::hd, 1.0, 0.0) ==
          Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("system parameter validation") {
    SystemParams p = interference_limited();
    p.alpha = 2.0;
    CHECK_THROWS_AS(validate(p), invalid_parameter_error);
    p = interference_limited();
    p.mu = 1.2;
    CHECK_THROWS_AS(validate(p), invalid_parameter_error);
    p = interference_limited();
    p.beta = -0.1;
    CHECK_THROWS_AS(validate(p), invalid_parameter_error);
    p = interference_limited();
    p.rho_d = 0.0;
    CHECK_THROWS_AS(validate(p), invalid_parameter_error);
    CHECK_NOTHROW(validate(interference_limited()));
}
