#pragma once

#include <cmath>
#include <string>

#include "fdd2d/errors.hpp"

namespace fdd2d {

enum class DuplexMode { hd, fd };

// Number of simultaneous links a collaborating pair sustains.
constexpr double kappa(DuplexMode mode) {
    return mode == DuplexMode::fd ? 2.0 : 1.0;
}

// Self-interference indicator: only full duplex leaks its own transmit power.
constexpr double si_indicator(DuplexMode mode) {
    return mode == DuplexMode::fd ? 1.0 : 0.0;
}

inline const char* to_string(DuplexMode mode) {
    return mode == DuplexMode::fd ? "fd" : "hd";
}

// Physical-layer parameter set. theta_d is a linear SINR ratio here; dB
// conversion happens at the CLI boundary only.
struct SystemParams {
    double lambda = 1e-3; // UE density, per m^2
    double mu = 0.3;      // fraction of UEs demanding content, in [0,1]
    double alpha = 4.0;   // path-loss exponent, > 2
    double beta = 1e-5;   // residual self-interference-to-power ratio, in [0,1]
    double rho_d = 0.1;   // D2D transmit power, W
    double sigma2 = 0.0;  // noise power, W
    double theta_d = 10.0; // SINR threshold, linear ratio
    double r_d = 10.0;    // typical-link distance, m
};

inline void validate(const SystemParams& p) {
    if (!(p.lambda >= 0.0))
        throw invalid_parameter_error("params: lambda must be >= 0");
    if (!(p.mu >= 0.0) || !(p.mu <= 1.0))
        throw invalid_parameter_error("params: mu must be in [0,1]");
    if (!(p.alpha > 2.0))
        throw invalid_parameter_error("params: alpha must be > 2");
    if (!(p.beta >= 0.0) || !(p.beta <= 1.0))
        throw invalid_parameter_error("params: beta must be in [0,1]");
    if (!(p.rho_d > 0.0))
        throw invalid_parameter_error("params: rho_d must be > 0");
    if (!(p.sigma2 >= 0.0))
        throw invalid_parameter_error("params: sigma2 must be >= 0");
    if (!(p.theta_d > 0.0))
        throw invalid_parameter_error("params: theta_d must be > 0");
    if (!(p.r_d > 0.0))
        throw invalid_parameter_error("params: r_d must be > 0");
}

struct LinkMetrics {
    double outage = 0.0;              // probability
    double spectral_efficiency = 0.0; // bits/s/Hz
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace fdd2d
