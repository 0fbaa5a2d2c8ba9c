#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fdd2d/errors.hpp"

namespace fdd2d {

// Rank-based content popularity: a request hits the content of rank w with
// probability proportional to w^(-skew). skew = 0 degenerates to uniform.
struct ZipfModel {
    std::size_t library_size = 1; // m, number of contents
    double skew = 0.0;            // gamma_r >= 0
};

inline void validate(const ZipfModel& model) {
    if (model.library_size == 0)
        throw invalid_parameter_error("zipf: library_size must be >= 1");
    if (!(model.skew >= 0.0))
        throw invalid_parameter_error("zipf: skew must be >= 0");
}

namespace detail {

// Compensated (Kahan) accumulator. Plain summation over 1e6 pmf entries can
// drift past the 1e-12 normalization budget.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace detail

// Probability mass per rank, index k holds rank k+1. Entries are strictly
// positive, non-increasing, and sum to 1 up to rounding.
inline std::vector<double> zipf_pmf(const ZipfModel& model) {
    validate(model);
    std::vector<double> pmf(model.library_size);
    detail::KahanSum norm;
    for (std::size_t j = 0; j < model.library_size; ++j) {
        const double w = std::pow(static_cast<double>(j + 1), -model.skew);
        pmf[j] = w;
        norm.add(w);
    }
    const double h = norm.value();
    for (double& p : pmf) p /= h;
    return pmf;
}

} // namespace fdd2d
