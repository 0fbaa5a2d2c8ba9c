#pragma once

#include <cmath>

#include "fdd2d/caching.hpp"
#include "fdd2d/errors.hpp"
#include "fdd2d/params.hpp"
#include "fdd2d/quadrature.hpp"
#include "fdd2d/special_functions.hpp"

namespace fdd2d {

// Density of concurrently transmitting D2D nodes in the given mode:
// independent thinning of the UE field by mu * P_delta.
inline double interferer_intensity(const SystemParams& params, DuplexMode mode,
                                   const CollaborationProbabilities& collab) {
    const double p = mode == DuplexMode::fd ? collab.p_fd : collab.p_hd;
    return params.mu * p * params.lambda;
}

// Laplace transform of the aggregate D2D interference at the origin,
//   L(s) = exp( -(2 pi^2/alpha) mu P_delta lambda (s rho_d)^(2/alpha)
//               csc(2 pi/alpha) ),
// valid for alpha > 2 (the path-loss integral diverges otherwise).
inline double laplace_interference(double s, const SystemParams& params,
                                   DuplexMode mode,
                                   const CollaborationProbabilities& collab) {
    if (!(s >= 0.0))
        throw invalid_parameter_error("laplace_interference: s must be >= 0");
    if (!(params.alpha > 2.0))
        throw divergence_error(
            "laplace_interference: diverges for alpha <= 2");
    const double intensity = interferer_intensity(params, mode, collab);
    if (s == 0.0 || intensity == 0.0) return 1.0;
    const double exponent = (2.0 * M_PI * M_PI / params.alpha) * intensity *
                            std::pow(s * params.rho_d, 2.0 / params.alpha) *
                            csc(2.0 * M_PI / params.alpha);
    return std::exp(-exponent);
}

// alpha = 4 special case: csc(pi/2) = 1 and the exponent collapses to
// -(pi^2/2) mu P_delta lambda sqrt(s rho_d).
inline double
laplace_interference_alpha4(double s, const SystemParams& params,
                            DuplexMode mode,
                            const CollaborationProbabilities& collab) {
    if (!(s >= 0.0))
        throw invalid_parameter_error("laplace_interference: s must be >= 0");
    if (params.alpha != 4.0)
        throw invalid_parameter_error(
            "laplace_interference_alpha4: requires alpha == 4");
    const double intensity = interferer_intensity(params, mode, collab);
    if (s == 0.0 || intensity == 0.0) return 1.0;
    return std::exp(-(M_PI * M_PI / 2.0) * intensity *
                    std::sqrt(s * params.rho_d));
}

// SINR at the typical receiver for one fading/interference draw. Shared by
// the closed forms' derivation checks and the Monte Carlo simulator so both
// sides use literally the same composition:
//   rho_d h R_d^-alpha / (sigma2 + I + 1_FD beta rho_d).
inline double sinr_value(const SystemParams& params, DuplexMode mode,
                         double fade, double interference) {
    const double signal =
        params.rho_d * fade * std::pow(params.r_d, -params.alpha);
    const double denom = params.sigma2 + interference +
                         si_indicator(mode) * params.beta * params.rho_d;
    return signal / denom;
}

// Outage probability of the typical D2D link,
//   1 - J * L(theta_d R_d^alpha / rho_d),
// J = exp(-theta_d R_d^alpha (sigma2 + 1_FD beta rho_d) / rho_d) being the
// Rayleigh noise/self-interference factor.
inline double outage_probability(const SystemParams& params, DuplexMode mode,
                                 const CollaborationProbabilities& collab) {
    validate(params);
    const double r_alpha = std::pow(params.r_d, params.alpha);
    const double att = params.sigma2 + si_indicator(mode) * params.beta * params.rho_d;
    const double j = std::exp(-params.theta_d * r_alpha * att / params.rho_d);
    const double l = laplace_interference(params.theta_d * r_alpha / params.rho_d,
                                          params, mode, collab);
    return 1.0 - j * l;
}

// Ergodic spectral efficiency of the typical link in bits/s/Hz:
//   (kappa/ln 2) int_0^inf exp(-c tau)/(1+tau) L(tau R_d^alpha/rho_d) dtau,
// with c = (sigma2 + 1_FD beta rho_d) R_d^alpha / rho_d. Needs at least one
// attenuation mechanism (noise, residual SI, or interference); otherwise the
// integrand is 1/(1+tau) and the rate is unbounded.
inline double spectral_efficiency(const SystemParams& params, DuplexMode mode,
                                  const CollaborationProbabilities& collab,
                                  const QuadratureSpec& spec = {}) {
    validate(params);
    const double r_alpha = std::pow(params.r_d, params.alpha);
    const double c = (params.sigma2 +
                      si_indicator(mode) * params.beta * params.rho_d) *
                     r_alpha / params.rho_d;
    const double intensity = interferer_intensity(params, mode, collab);
    if (c <= 0.0 && intensity <= 0.0)
        throw divergence_error(
            "spectral_efficiency: no noise, self-interference, or "
            "interference; the Shannon rate is unbounded");
    auto integrand = [&](double tau) {
        return std::exp(-c * tau) / (1.0 + tau) *
               laplace_interference(tau * r_alpha / params.rho_d, params, mode,
                                    collab);
    };
    const QuadratureResult integral = integrate_semi_infinite(integrand, spec);
    return kappa(mode) / std::log(2.0) * integral.value;
}

// Interference-limited fast path (sigma2 = 0, alpha = 4, perfectly canceled
// self-interference):
//   (kappa/ln 2) { [pi - 2 Si(T)] sin(T) - 2 ci(T) cos(T) },
//   T = (pi^2/2) mu P_delta lambda R_d^2.
// HD is accepted for any beta since the SI term carries a zero indicator.
inline double closed_form_se_interference_limited(
    const SystemParams& params, DuplexMode mode,
    const CollaborationProbabilities& collab) {
    validate(params);
    if (params.sigma2 != 0.0)
        throw invalid_parameter_error(
            "closed_form_se: requires sigma2 == 0 (interference limited)");
    if (params.alpha != 4.0)
        throw invalid_parameter_error("closed_form_se: requires alpha == 4");
    if (mode == DuplexMode::fd && params.beta != 0.0)
        throw invalid_parameter_error(
            "closed_form_se: FD requires beta == 0 (perfect SI cancellation)");
    const double t = (M_PI * M_PI / 2.0) *
                     interferer_intensity(params, mode, collab) *
                     params.r_d * params.r_d;
    if (t <= 0.0)
        throw divergence_error(
            "closed_form_se: zero interferer intensity; rate is unbounded");
    const double bracket = (M_PI - 2.0 * sine_integral(t)) * std::sin(t) -
                           2.0 * cosine_integral(t) * std::cos(t);
    return kappa(mode) / std::log(2.0) * bracket;
}

inline LinkMetrics link_metrics(const SystemParams& params, DuplexMode mode,
                                const CollaborationProbabilities& collab,
                                const QuadratureSpec& spec = {}) {
    return LinkMetrics{outage_probability(params, mode, collab),
                       spectral_efficiency(params, mode, collab, spec)};
}

} // namespace fdd2d
