#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "fdd2d/errors.hpp"

namespace fdd2d {

namespace detail {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer; passes BigCrush when driven by a counter.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double log_factorial(std::uint64_t k) {
    static const std::array<double, 32> table = [] {
        std::array<double, 32> t{};
        double acc = 0.0;
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            acc += std::log(static_cast<double>(i));
            t[i] = acc;
        }
        return t;
    }();
    if (k < table.size()) return table[k];
    return std::lgamma(static_cast<double>(k) + 1.0);
}

} // namespace detail

// Counter-based stream RNG: output i of a stream is a pure function of
// (master_seed, stream_id, i). Streams can be handed to trials in any order
// or to any thread and still produce identical draws, which is what makes
// the Monte Carlo estimates schedule-independent.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream_id)
        : key_(detail::mix64(detail::mix64(master_seed + detail::golden_gamma) ^
                             (stream_id * detail::golden_gamma + 1))) {}

    std::uint64_t next_u64() {
        counter_ += detail::golden_gamma;
        return detail::mix64(key_ + counter_);
    }

    // Uniform on [0, 1), 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unit-mean exponential via inversion; log1p keeps u -> 0 safe.
    double next_exponential() { return -std::log1p(-next_uniform()); }

    // Poisson draw: sequential inversion for small means, Hormann's PTRS
    // transformed rejection for mean >= 10.
    std::uint64_t next_poisson(double mean) {
        if (!(mean >= 0.0))
            throw invalid_parameter_error("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean < 10.0) return poisson_inversion(mean);
        return poisson_ptrs(mean);
    }

private:
    std::uint64_t poisson_inversion(double mean) {
        std::uint64_t k = 0;
        double p = std::exp(-mean);
        double cdf = p;
        const double u = next_uniform();
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 2000) break; // cdf has numerically saturated
        }
        return k;
    }

    std::uint64_t poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        while (true) {
            const double u = next_uniform() - 0.5;
            const double v = next_uniform();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr)
                return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            const double k = kf;
            if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
                -mean + k * loglam -
                    detail::log_factorial(static_cast<std::uint64_t>(kf)))
                return static_cast<std::uint64_t>(kf);
        }
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace fdd2d
