#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fdd2d/errors.hpp"
#include "fdd2d/zipf.hpp"

namespace fdd2d {

// Disjoint rank-ordered cache placement: user i (1-based) holds the contents
// of ranks (i-1)*cache_size+1 .. i*cache_size. Users whose slice starts past
// the library cache nothing.
struct CachingProfile {
    std::size_t n_users = 0;           // N
    std::size_t cache_size = 0;        // contents per user
    std::size_t library_size = 0;      // m
    std::vector<double> per_user_mass; // f(1..N), request mass covered by user i
    double hit_probability = 0.0;      // f_hit = sum_i f(i), snapped to 1 at full coverage
};

struct CollaborationProbabilities {
    double p_hd = 0.0;
    double p_fd = 0.0;
};

inline CachingProfile build_caching_profile(const ZipfModel& model,
                                            std::size_t cache_size,
                                            std::size_t n_users) {
    validate(model);
    if (cache_size == 0)
        throw invalid_parameter_error("caching: cache_size must be >= 1");
    if (cache_size > model.library_size)
        throw invalid_parameter_error("caching: cache_size must be <= library_size");
    if (n_users == 0)
        throw invalid_parameter_error("caching: n_users must be >= 1");

    const std::vector<double> pmf = zipf_pmf(model);
    const std::size_t m = model.library_size;

    CachingProfile profile;
    profile.n_users = n_users;
    profile.cache_size = cache_size;
    profile.library_size = m;
    profile.per_user_mass.assign(n_users, 0.0);

    detail::KahanSum hit;
    for (std::size_t i = 0; i < n_users; ++i) {
        const std::size_t lo = i * cache_size;
        if (lo >= m) break; // library exhausted, remaining users cache nothing
        const std::size_t hi = std::min(lo + cache_size, m);
        detail::KahanSum mass;
        for (std::size_t r = lo; r < hi; ++r) mass.add(pmf[r]);
        profile.per_user_mass[i] = mass.value();
        hit.add(mass.value());
    }
    // Full coverage means every request hits some cache; pin the value so
    // downstream equality checks do not depend on summation rounding.
    profile.hit_probability =
        (n_users * cache_size >= m) ? 1.0 : hit.value();
    return profile;
}

// Expected number of demanding users inside a ball of radius `radius`,
// mu*lambda*pi*radius^2, rounded toward +infinity. Zero only when the
// demander intensity itself is zero.
inline std::size_t expected_demanders(double mu, double lambda, double radius) {
    if (!(mu >= 0.0) || !(mu <= 1.0))
        throw invalid_parameter_error("expected_demanders: mu must be in [0,1]");
    if (!(lambda >= 0.0))
        throw invalid_parameter_error("expected_demanders: lambda must be >= 0");
    if (!(radius > 0.0))
        throw invalid_parameter_error("expected_demanders: radius must be > 0");
    const double mean = mu * lambda * M_PI * radius * radius;
    if (mean == 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(mean));
}

// Probability that user i (1-based) can serve at least one of the other
// N-1 users' requests. The binomial sum over n >= 1 successes collapses to
// 1-(1-f)^(N-1); evaluated in log space so N in the thousands stays exact.
inline double lambda_serve(std::size_t i, const CachingProfile& profile) {
    if (i == 0 || i > profile.n_users)
        throw invalid_parameter_error("lambda_serve: user index out of range");
    if (profile.n_users < 2) return 0.0;
    const double f = profile.per_user_mass[i - 1];
    if (f <= 0.0) return 0.0;
    if (f >= 1.0) return 1.0;
    const double n_others = static_cast<double>(profile.n_users - 1);
    return -std::expm1(n_others * std::log1p(-f));
}

// Per-mode collaboration probabilities:
//   P_delta = sum_i Q_delta(i) * Lambda(i) * f(i)
// with Q_FD(i) = f_hit - f(i) (someone else holds user i's own request) and
// Q_HD(i) = 1 - Q_FD(i).
inline CollaborationProbabilities
collaboration_probabilities(const CachingProfile& profile) {
    CollaborationProbabilities out;
    detail::KahanSum hd, fd;
    for (std::size_t i = 1; i <= profile.n_users; ++i) {
        const double f = profile.per_user_mass[i - 1];
        if (f <= 0.0) continue;
        const double lam = lambda_serve(i, profile);
        double q_fd = profile.hit_probability - f;
        if (q_fd < 0.0) q_fd = 0.0; // guard rounding when f_hit ~ f(i)
        fd.add(q_fd * lam * f);
        hd.add((1.0 - q_fd) * lam * f);
    }
    out.p_hd = hd.value();
    out.p_fd = fd.value();
    return out;
}

} // namespace fdd2d
