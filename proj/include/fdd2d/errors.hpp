#pragma once

#include <stdexcept>
#include <string>

namespace fdd2d {

// Rejected argument values (zero-size library, negative density, ...).
class invalid_parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation request at a pole of the function.
class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The requested quantity is infinite / the defining integral diverges
// for the supplied parameters.
class divergence_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Adaptive quadrature exhausted its subdivision budget. Carries the best
// estimate seen so far together with its error bound.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double best, double err_bound)
        : std::runtime_error(msg), best_estimate(best), error_bound(err_bound) {}

    double best_estimate;
    double error_bound;
};

} // namespace fdd2d
