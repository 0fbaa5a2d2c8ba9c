#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "fdd2d/analytic.hpp"
#include "fdd2d/caching.hpp"
#include "fdd2d/errors.hpp"
#include "fdd2d/params.hpp"
#include "fdd2d/rng.hpp"
#include "fdd2d/zipf.hpp"

namespace fdd2d {

enum class CollabSource { analytic, empirical };

struct SimConfig {
    SystemParams params;
    DuplexMode mode = DuplexMode::hd;
    CollaborationProbabilities collab; // feeds the interferer intensity
    CollabSource collab_source = CollabSource::analytic;
    std::uint64_t trials = 10000;
    std::uint64_t master_seed = 1;
    double window_radius = 0.0; // 0 = default_window_radius()
    unsigned threads = 1;       // 0 = hardware concurrency
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    double radius() const { return std::hypot(x, y); }
};

// One Monte Carlo draw of the typical link.
struct PppRealization {
    std::vector<double> interferer_distances;
    std::vector<double> fading_gains;
    double typical_fade = 0.0;
    double sinr = 0.0;
};

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

struct CollabEstimate {
    EstimateWithError hd;
    EstimateWithError fd;
};

struct TruncationCheck {
    EstimateWithError base_outage;    // default window
    EstimateWithError doubled_outage; // window doubled, coupled draws
    EstimateWithError delta;          // base - doubled, per-trial coupling
};

// Interferers live on a disc around the typical receiver. For path-loss
// exponents near 4 the tail beyond max(20 R_d, 10/sqrt(intensity)) is
// negligible; closer to alpha = 2 the far field decays too slowly for any
// affordable disc. estimate_truncation_bias() measures the residual bias of
// whatever window is in effect; override window_radius when it fires.
inline double default_window_radius(const SystemParams& params,
                                    double intensity) {
    double w = 20.0 * params.r_d;
    if (intensity > 0.0) w = std::max(w, 10.0 / std::sqrt(intensity));
    return w;
}

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

// Runs fn(block_state, trial_index, scratch) for every trial, partitioned
// into fixed-size blocks. Blocks are combined in index order afterwards, so
// results are bit-identical for any thread count or schedule (each trial
// seeds its own RNG stream).
template <typename BlockState, typename Scratch, typename TrialFn>
std::vector<BlockState> run_trial_blocks(std::uint64_t trials,
                                         unsigned threads, TrialFn fn) {
    constexpr std::uint64_t block_size = 8192;
    const std::uint64_t n_blocks = (trials + block_size - 1) / block_size;
    std::vector<BlockState> blocks(n_blocks);
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads),
                                                      std::max<std::uint64_t>(n_blocks, 1)));
    auto worker = [&](unsigned tid) {
        Scratch scratch{};
        for (std::uint64_t b = tid; b < n_blocks; b += n_threads) {
            const std::uint64_t begin = b * block_size;
            const std::uint64_t end = std::min(trials, begin + block_size);
            for (std::uint64_t t = begin; t < end; ++t)
                fn(blocks[b], t, scratch);
        }
    };
    if (n_threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads - 1);
        for (unsigned tid = 1; tid < n_threads; ++tid)
            pool.emplace_back(worker, tid);
        worker(0);
        for (auto& th : pool) th.join();
    }
    return blocks;
}

// Draws a PPP field on the annulus [r_min, r_max] and accumulates the
// aggregate received power rho * h * r^-alpha. Per-point draw order is
// (radius, gain); distances/gains are recorded when keep != nullptr.
inline double accumulate_field(CounterRng& rng, double intensity, double r_min,
                               double r_max, double alpha, double rho,
                               PppRealization* keep) {
    const double area = M_PI * (r_max * r_max - r_min * r_min);
    const std::uint64_t count = rng.next_poisson(intensity * area);
    if (keep != nullptr) {
        keep->interferer_distances.reserve(keep->interferer_distances.size() + count);
        keep->fading_gains.reserve(keep->fading_gains.size() + count);
    }
    const double r_min2 = r_min * r_min;
    const double span2 = r_max * r_max - r_min2;
    const bool alpha_is_4 = alpha == 4.0;
    double sum = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const double r2 = r_min2 + span2 * rng.next_uniform();
        const double gain = rng.next_exponential();
        sum += alpha_is_4 ? gain / (r2 * r2) : gain * std::pow(r2, -0.5 * alpha);
        if (keep != nullptr) {
            keep->interferer_distances.push_back(std::sqrt(r2));
            keep->fading_gains.push_back(gain);
        }
    }
    return rho * sum;
}

inline void validate(const SimConfig& config) {
    fdd2d::validate(config.params);
    if (config.trials == 0)
        throw invalid_parameter_error("sim: trials must be >= 1");
    for (double p : {config.collab.p_hd, config.collab.p_fd})
        if (!(p >= 0.0) || !(p <= 1.0))
            throw invalid_parameter_error(
                "sim: collaboration probabilities must be in [0,1]");
    if (config.window_radius < 0.0)
        throw invalid_parameter_error("sim: window_radius must be >= 0");
}

inline double sim_window(const SimConfig& config, double intensity) {
    return config.window_radius > 0.0
               ? config.window_radius
               : default_window_radius(config.params, intensity);
}

} // namespace detail

// Homogeneous PPP on a disc of the given radius: Poisson count, uniform
// positions (inverse-CDF radius, uniform angle). Deterministic given the
// (seed, stream) pair.
inline std::vector<Point2> sample_ppp_disc(double intensity, double radius,
                                           CounterRng& rng) {
    if (!(intensity >= 0.0))
        throw invalid_parameter_error("ppp: intensity must be >= 0");
    if (!(radius > 0.0))
        throw invalid_parameter_error("ppp: radius must be > 0");
    const std::uint64_t count =
        rng.next_poisson(intensity * M_PI * radius * radius);
    std::vector<Point2> points(count);
    for (auto& p : points) {
        const double r = radius * std::sqrt(rng.next_uniform());
        const double phi = 2.0 * M_PI * rng.next_uniform();
        p.x = r * std::cos(phi);
        p.y = r * std::sin(phi);
    }
    return points;
}

inline std::vector<Point2> sample_ppp_disc(double intensity, double radius,
                                           std::uint64_t seed,
                                           std::uint64_t stream = 0) {
    CounterRng rng(seed, stream);
    return sample_ppp_disc(intensity, radius, rng);
}

// One SINR draw of the typical link: thinned interferer field at intensity
// mu P_delta lambda on the window disc, Rayleigh (unit-mean exponential)
// gains, serving transmitter fixed at distance R_d and excluded from the
// field. Reproducible from (master_seed, trial_index).
inline PppRealization simulate_sinr_trial(const SimConfig& config,
                                          std::uint64_t trial_index) {
    detail::validate(config);
    const double intensity =
        interferer_intensity(config.params, config.mode, config.collab);
    const double window = detail::sim_window(config, intensity);
    CounterRng rng(config.master_seed, trial_index);
    PppRealization real;
    const double interference =
        detail::accumulate_field(rng, intensity, 0.0, window,
                                 config.params.alpha, config.params.rho_d, &real);
    real.typical_fade = rng.next_exponential();
    real.sinr =
        sinr_value(config.params, config.mode, real.typical_fade, interference);
    return real;
}

// Fraction of trials with SINR <= theta_d, with binomial standard error.
inline EstimateWithError estimate_outage(const SimConfig& config) {
    detail::validate(config);
    const double intensity =
        interferer_intensity(config.params, config.mode, config.collab);
    const double window = detail::sim_window(config, intensity);
    const SystemParams& p = config.params;

    struct Block { std::uint64_t count = 0; };
    struct None {};
    auto blocks = detail::run_trial_blocks<Block, None>(
        config.trials, config.threads,
        [&](Block& block, std::uint64_t t, None&) {
            CounterRng rng(config.master_seed, t);
            const double interference = detail::accumulate_field(
                rng, intensity, 0.0, window, p.alpha, p.rho_d, nullptr);
            const double sinr =
                sinr_value(p, config.mode, rng.next_exponential(), interference);
            if (sinr <= p.theta_d) ++block.count;
        });

    std::uint64_t outages = 0;
    for (const auto& b : blocks) outages += b.count;
    const double n = static_cast<double>(config.trials);
    const double frac = static_cast<double>(outages) / n;
    return EstimateWithError{frac, std::sqrt(frac * (1.0 - frac) / n),
                             config.trials};
}

// Sample mean of kappa * log2(1 + SINR) with its standard error.
inline EstimateWithError estimate_spectral_efficiency(const SimConfig& config) {
    detail::validate(config);
    const double intensity =
        interferer_intensity(config.params, config.mode, config.collab);
    const SystemParams& p = config.params;
    const double si_power = si_indicator(config.mode) * p.beta * p.rho_d;
    if (p.sigma2 + si_power <= 0.0 && intensity <= 0.0)
        throw divergence_error(
            "estimate_spectral_efficiency: no attenuation mechanism; "
            "Shannon rate is unbounded");
    const double window = detail::sim_window(config, intensity);
    const double k = kappa(config.mode);

    struct Block {
        detail::KahanSum sum, sum_sq;
    };
    struct None {};
    auto blocks = detail::run_trial_blocks<Block, None>(
        config.trials, config.threads,
        [&](Block& block, std::uint64_t t, None&) {
            CounterRng rng(config.master_seed, t);
            const double interference = detail::accumulate_field(
                rng, intensity, 0.0, window, p.alpha, p.rho_d, nullptr);
            const double sinr =
                sinr_value(p, config.mode, rng.next_exponential(), interference);
            const double v = k * std::log2(1.0 + sinr);
            block.sum.add(v);
            block.sum_sq.add(v * v);
        });

    detail::KahanSum sum, sum_sq;
    for (const auto& b : blocks) {
        sum.add(b.sum.value());
        sum_sq.add(b.sum_sq.value());
    }
    const double n = static_cast<double>(config.trials);
    const double mean = sum.value() / n;
    double var = sum_sq.value() / n - mean * mean;
    if (var < 0.0) var = 0.0;
    if (config.trials > 1) var *= n / (n - 1.0);
    return EstimateWithError{mean, std::sqrt(var / n), config.trials};
}

// Empirical collaboration probabilities. Per trial: Poisson user count on
// the ball of the given radius, disjoint rank-ordered caches, i.i.d. Zipf
// requests, plus one independent probe request. The trial scores the mode of
// the user owning the probe's content (if any):
//   FD  - it can serve someone else's request AND its own request is cached
//         at another user;
//   HD  - it can serve someone else's request only.
// P(probe owner = i) = f(i), so the hit fractions estimate
// sum_i f(i) Lambda(i) Q_delta(i) exactly, with binomial standard errors.
inline CollabEstimate estimate_collaboration(const ZipfModel& zipf,
                                             std::size_t cache_size, double mu,
                                             double lambda, double radius,
                                             std::uint64_t trials,
                                             std::uint64_t master_seed,
                                             unsigned threads = 1) {
    validate(zipf);
    if (cache_size == 0 || cache_size > zipf.library_size)
        throw invalid_parameter_error(
            "estimate_collaboration: cache_size must be in [1, library_size]");
    if (!(mu >= 0.0) || !(mu <= 1.0))
        throw invalid_parameter_error("estimate_collaboration: mu must be in [0,1]");
    if (!(lambda >= 0.0))
        throw invalid_parameter_error("estimate_collaboration: lambda must be >= 0");
    if (!(radius > 0.0))
        throw invalid_parameter_error("estimate_collaboration: radius must be > 0");
    if (trials == 0)
        throw invalid_parameter_error("estimate_collaboration: trials must be >= 1");

    const double mean_users = mu * lambda * M_PI * radius * radius;
    const std::vector<double> pmf = zipf_pmf(zipf);
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0; // guard the binary search against rounding

    constexpr std::uint32_t no_owner = 0xFFFFFFFFu;
    auto draw_owner = [&](CounterRng& rng) {
        const double u = rng.next_uniform();
        const std::size_t rank = static_cast<std::size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        return static_cast<std::uint32_t>(rank / cache_size);
    };

    struct Block {
        std::uint64_t hd = 0;
        std::uint64_t fd = 0;
    };
    struct Scratch {
        std::vector<std::uint32_t> tally;    // requests landing in each cache
        std::vector<std::uint32_t> owner_of; // cache owning each user's request
    };
    auto blocks = detail::run_trial_blocks<Block, Scratch>(
        trials, threads, [&](Block& block, std::uint64_t t, Scratch& s) {
            CounterRng rng(master_seed, t);
            const std::uint64_t n_users = rng.next_poisson(mean_users);
            if (n_users == 0) return;
            const std::size_t n = static_cast<std::size_t>(n_users);
            if (s.tally.size() < n) {
                s.tally.resize(n);
                s.owner_of.resize(n);
            }
            std::fill_n(s.tally.begin(), n, 0u);
            for (std::size_t j = 0; j < n; ++j) {
                const std::uint32_t owner = draw_owner(rng);
                if (owner < n) {
                    s.owner_of[j] = owner;
                    ++s.tally[owner];
                } else {
                    s.owner_of[j] = no_owner;
                }
            }
            const std::uint32_t probe_owner = draw_owner(rng);
            if (probe_owner >= n) return; // probe content cached nowhere
            const std::uint32_t self =
                s.owner_of[probe_owner] == probe_owner ? 1u : 0u;
            const bool serves = s.tally[probe_owner] > self;
            if (!serves) return;
            const bool served = s.owner_of[probe_owner] != no_owner &&
                                s.owner_of[probe_owner] != probe_owner;
            if (served)
                ++block.fd;
            else
                ++block.hd;
        });

    std::uint64_t hd = 0, fd = 0;
    for (const auto& b : blocks) {
        hd += b.hd;
        fd += b.fd;
    }
    const double n = static_cast<double>(trials);
    auto wrap = [&](std::uint64_t count) {
        const double frac = static_cast<double>(count) / n;
        return EstimateWithError{frac, std::sqrt(frac * (1.0 - frac) / n),
                                 trials};
    };
    return CollabEstimate{wrap(hd), wrap(fd)};
}

// Truncation self-test: re-runs the outage estimate with the window doubled,
// coupling each trial's base field with an extra annulus field so the delta
// isolates the truncation bias from the sampling noise.
inline TruncationCheck estimate_truncation_bias(const SimConfig& config) {
    detail::validate(config);
    const double intensity =
        interferer_intensity(config.params, config.mode, config.collab);
    const double window = detail::sim_window(config, intensity);
    const SystemParams& p = config.params;

    struct Block {
        std::uint64_t base = 0;
        std::uint64_t doubled = 0;
        std::uint64_t changed = 0; // |delta| per trial is 0 or 1
        std::int64_t delta = 0;
    };
    struct None {};
    constexpr std::uint64_t annulus_stream_bit = 1ull << 63;
    auto blocks = detail::run_trial_blocks<Block, None>(
        config.trials, config.threads,
        [&](Block& block, std::uint64_t t, None&) {
            CounterRng rng(config.master_seed, t);
            const double inner = detail::accumulate_field(
                rng, intensity, 0.0, window, p.alpha, p.rho_d, nullptr);
            const double fade = rng.next_exponential();
            CounterRng annulus_rng(config.master_seed, t ^ annulus_stream_bit);
            const double outer = detail::accumulate_field(
                annulus_rng, intensity, window, 2.0 * window, p.alpha, p.rho_d,
                nullptr);
            const int base =
                sinr_value(p, config.mode, fade, inner) <= p.theta_d ? 1 : 0;
            const int doubled =
                sinr_value(p, config.mode, fade, inner + outer) <= p.theta_d
                    ? 1
                    : 0;
            block.base += static_cast<std::uint64_t>(base);
            block.doubled += static_cast<std::uint64_t>(doubled);
            block.delta += base - doubled;
            block.changed += static_cast<std::uint64_t>(base != doubled);
        });

    std::uint64_t base = 0, doubled = 0, changed = 0;
    std::int64_t delta = 0;
    for (const auto& b : blocks) {
        base += b.base;
        doubled += b.doubled;
        changed += b.changed;
        delta += b.delta;
    }
    const double n = static_cast<double>(config.trials);
    auto wrap = [&](double count) {
        const double frac = count / n;
        return EstimateWithError{frac, std::sqrt(frac * (1.0 - frac) / n),
                                 config.trials};
    };
    const double mean_delta = static_cast<double>(delta) / n;
    double var_delta =
        static_cast<double>(changed) / n - mean_delta * mean_delta;
    if (var_delta < 0.0) var_delta = 0.0;
    return TruncationCheck{
        wrap(static_cast<double>(base)), wrap(static_cast<double>(doubled)),
        EstimateWithError{mean_delta, std::sqrt(var_delta / n), config.trials}};
}

} // namespace fdd2d
