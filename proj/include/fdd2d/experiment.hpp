#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdd2d/analytic.hpp"
#include "fdd2d/caching.hpp"
#include "fdd2d/errors.hpp"
#include "fdd2d/mc.hpp"
#include "fdd2d/params.hpp"
#include "fdd2d/sweep.hpp"
#include "fdd2d/version.hpp"

namespace fdd2d {

// Everything an experiment run needs. theta_d inside params is linear; the
// CLI converts from dB when it fills this in.
struct ExperimentConfig {
    SystemParams params;
    double gamma_r = 1.2;
    std::size_t library_size = 10000; // m
    std::size_t cache_size = 10;      // contents per user
    double collab_radius = 500.0;     // ball radius for the demander count, m
    double window_radius = 0.0;       // sim truncation disc, 0 = auto
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = hardware concurrency
};

inline std::string canonical_string(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "lambda=" << format_double(c.params.lambda)
       << ";mu=" << format_double(c.params.mu)
       << ";alpha=" << format_double(c.params.alpha)
       << ";beta=" << format_double(c.params.beta)
       << ";rho_d=" << format_double(c.params.rho_d)
       << ";sigma2=" << format_double(c.params.sigma2)
       << ";theta_d=" << format_double(c.params.theta_d)
       << ";r_d=" << format_double(c.params.r_d)
       << ";gamma_r=" << format_double(c.gamma_r)
       << ";library_size=" << c.library_size
       << ";cache_size=" << c.cache_size
       << ";collab_radius=" << format_double(c.collab_radius)
       << ";window_radius=" << format_double(c.window_radius)
       << ";trials=" << c.trials << ";seed=" << c.seed;
    return os.str();
}

inline std::string config_hash(const ExperimentConfig& c) {
    return hash_hex(canonical_string(c));
}

// Analytic collaboration probabilities for the given density/popularity
// point: demander count from the expected-value ball, disjoint rank-ordered
// caches, then the per-mode sums.
inline CollaborationProbabilities
analytic_collab(const ExperimentConfig& config, double lambda, double mu,
                double gamma_r) {
    const std::size_t n =
        expected_demanders(mu, lambda, config.collab_radius);
    if (n < 1) return CollaborationProbabilities{0.0, 0.0};
    const ZipfModel zipf{config.library_size, gamma_r};
    const CachingProfile profile =
        build_caching_profile(zipf, config.cache_size, n);
    return collaboration_probabilities(profile);
}

inline CollaborationProbabilities
analytic_collab(const ExperimentConfig& config) {
    return analytic_collab(config, config.params.lambda, config.params.mu,
                           config.gamma_r);
}

// A sweep axis value applied to the base configuration.
inline ExperimentConfig with_axis_value(const ExperimentConfig& base,
                                        const std::string& axis,
                                        double value) {
    ExperimentConfig c = base;
    if (axis == "lambda")
        c.params.lambda = value;
    else if (axis == "mu")
        c.params.mu = value;
    else if (axis == "beta")
        c.params.beta = value;
    else if (axis == "theta_db")
        c.params.theta_d = db_to_linear(value);
    else if (axis == "gamma_r")
        c.gamma_r = value;
    else
        throw invalid_parameter_error("sweep: unknown axis '" + axis + "'");
    return c;
}

inline std::vector<DuplexMode> parse_modes(const std::string& mode) {
    if (mode == "hd") return {DuplexMode::hd};
    if (mode == "fd") return {DuplexMode::fd};
    if (mode == "both") return {DuplexMode::hd, DuplexMode::fd};
    throw invalid_parameter_error("mode must be hd, fd, or both");
}

inline SimConfig make_sim_config(const ExperimentConfig& config,
                                 DuplexMode mode,
                                 const CollaborationProbabilities& collab) {
    SimConfig sim;
    sim.params = config.params;
    sim.mode = mode;
    sim.collab = collab;
    sim.trials = config.trials;
    sim.master_seed = config.seed;
    sim.window_radius = config.window_radius;
    sim.threads = config.threads;
    return sim;
}

enum class SweepMetric { collab, outage, spectral_efficiency };

inline std::string metric_column(SweepMetric metric) {
    switch (metric) {
    case SweepMetric::collab: return "p_collab";
    case SweepMetric::outage: return "outage";
    default: return "se_bits_per_s_hz";
    }
}

// Spectral efficiency with the interference-limited closed form where it
// applies and the rate-integral quadrature elsewhere.
inline double se_auto(const ExperimentConfig& config, DuplexMode mode,
                      const CollaborationProbabilities& collab) {
    const SystemParams& p = config.params;
    if (p.sigma2 == 0.0 && p.alpha == 4.0 &&
        (mode == DuplexMode::hd || p.beta == 0.0))
        return closed_form_se_interference_limited(p, mode, collab);
    return spectral_efficiency(p, mode, collab);
}

// One sweep of a single metric. gamma_override pins gamma_r (used by the
// collab command which runs one sweep per requested exponent). Empirical
// columns are filled only when with_empirical is set. collab_source selects
// whether the interferer intensities use the closed-form collaboration
// probabilities or their Monte Carlo estimates at each axis point.
inline SweepResult run_sweep(const ExperimentConfig& config,
                             const SweepAxis& axis, SweepMetric metric,
                             const std::vector<DuplexMode>& modes,
                             bool with_empirical,
                             std::optional<double> gamma_override = {},
                             CollabSource collab_source = CollabSource::analytic) {
    ExperimentConfig base = config;
    if (gamma_override) base.gamma_r = *gamma_override;

    SweepResult result;
    result.axis_name = axis_column(axis.name);
    result.metric_name = metric_column(metric);
    result.seed = config.seed;
    result.config_hash = config_hash(base);

    for (double value : sweep_grid(axis)) {
        const ExperimentConfig at = with_axis_value(base, axis.name, value);
        CollaborationProbabilities collab;
        if (collab_source == CollabSource::empirical &&
            metric != SweepMetric::collab) {
            const CollabEstimate est = estimate_collaboration(
                {at.library_size, at.gamma_r}, at.cache_size, at.params.mu,
                at.params.lambda, at.collab_radius, at.trials, at.seed,
                at.threads);
            collab = {est.hd.value, est.fd.value};
        } else {
            collab = analytic_collab(at);
        }
        for (DuplexMode mode : modes) {
            SweepRow row;
            row.axis_value = value;
            row.mode = mode;
            switch (metric) {
            case SweepMetric::collab:
                row.analytic = mode == DuplexMode::fd ? collab.p_fd : collab.p_hd;
                break;
            case SweepMetric::outage:
                row.analytic = outage_probability(at.params, mode, collab);
                break;
            case SweepMetric::spectral_efficiency:
                row.analytic = se_auto(at, mode, collab);
                break;
            }
            if (with_empirical) {
                if (metric == SweepMetric::collab) {
                    const ZipfModel zipf{at.library_size, at.gamma_r};
                    const CollabEstimate est = estimate_collaboration(
                        zipf, at.cache_size, at.params.mu, at.params.lambda,
                        at.collab_radius, at.trials, at.seed, at.threads);
                    const EstimateWithError& e =
                        mode == DuplexMode::fd ? est.fd : est.hd;
                    row.empirical = e.value;
                    row.std_error = e.std_error;
                } else {
                    const SimConfig sim = make_sim_config(at, mode, collab);
                    const EstimateWithError e =
                        metric == SweepMetric::outage
                            ? estimate_outage(sim)
                            : estimate_spectral_efficiency(sim);
                    row.empirical = e.value;
                    row.std_error = e.std_error;
                }
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Validation suite: analytic closed forms against the Monte Carlo estimators
// on fixed grids. Doubles as the oracle-equivalence portion of the
// acceptance tests.

struct ValidationOptions {
    // When set, the simulator runs with this beta while the analytic side
    // keeps the configured one; used to prove the suite catches mismatches.
    std::optional<double> sim_beta_override;
};

struct ValidationPoint {
    std::string label;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    double rel_err = 0.0;
    bool passed = false;
};

struct ValidationOutcome {
    std::vector<ValidationPoint> points;
    bool passed = true;
    bool low_power = false;
    int failures = 0;
    double max_abs_z = 0.0;
};

inline const std::vector<double>& fig1_lambda_grid() {
    static const std::vector<double> grid = {2.4e-4, 3.6e-4, 5.4e-4,
                                             8.0e-4, 1.2e-3, 1.8e-3};
    return grid;
}

inline const std::vector<double>& fig1_gamma_values() {
    static const std::vector<double> gammas = {0.8, 1.2};
    return gammas;
}

inline const std::vector<double>& validation_lambda_grid() {
    static const std::vector<double> grid = {3e-4, 1e-3, 3e-3};
    return grid;
}

namespace detail {

inline double safe_z(double analytic, double empirical, double std_error) {
    const double diff = std::abs(analytic - empirical);
    if (std_error > 0.0) return diff / std_error;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

inline void add_point(ValidationOutcome& out, ValidationPoint point) {
    out.max_abs_z = std::max(out.max_abs_z, point.z);
    if (!point.passed) {
        out.passed = false;
        ++out.failures;
    }
    out.points.push_back(std::move(point));
}

} // namespace detail

// Collaboration: closed form vs the probe estimator on the
// Fig. 1 grid. Pass rule: |z| <= 3 per point and mode.
inline void validate_collaboration(const ExperimentConfig& config,
                                   ValidationOutcome& out) {
    for (double gamma : fig1_gamma_values()) {
        const ZipfModel zipf{config.library_size, gamma};
        for (double lambda : fig1_lambda_grid()) {
            const CollaborationProbabilities analytic =
                analytic_collab(config, lambda, config.params.mu, gamma);
            const CollabEstimate est = estimate_collaboration(
                zipf, config.cache_size, config.params.mu, lambda,
                config.collab_radius, config.trials, config.seed,
                config.threads);
            const struct {
                const char* mode;
                double ana;
                const EstimateWithError* emp;
            } sides[2] = {{"hd", analytic.p_hd, &est.hd},
                          {"fd", analytic.p_fd, &est.fd}};
            for (const auto& side : sides) {
                ValidationPoint point;
                std::ostringstream label;
                label << "collab gamma_r=" << format_double(gamma)
                      << " lambda=" << format_double(lambda) << " "
                      << side.mode;
                point.label = label.str();
                point.analytic = side.ana;
                point.empirical = side.emp->value;
                point.std_error = side.emp->std_error;
                point.z = detail::safe_z(side.ana, side.emp->value,
                                         side.emp->std_error);
                point.rel_err =
                    side.ana != 0.0
                        ? std::abs(point.empirical - side.ana) / side.ana
                        : 0.0;
                point.passed = point.z <= 3.0;
                detail::add_point(out, std::move(point));
            }
        }
    }
}

// Outage: closed form vs the empirical outage fraction, interference-limited
// alpha = 4 grid. Pass rule: |z| <= 3.
inline void validate_outage(const ExperimentConfig& config,
                            ValidationOutcome& out,
                            const ValidationOptions& options = {}) {
    static const double betas[] = {1e-5, 1e-6};
    static const double theta_dbs[] = {0.0, 10.0};
    for (double lambda : validation_lambda_grid()) {
        ExperimentConfig at = config;
        at.params.lambda = lambda;
        at.params.sigma2 = 0.0;
        at.params.alpha = 4.0;
        const CollaborationProbabilities collab = analytic_collab(at);
        for (double beta : betas) {
            for (double theta_db : theta_dbs) {
                for (DuplexMode mode : {DuplexMode::hd, DuplexMode::fd}) {
                    at.params.beta = beta;
                    at.params.theta_d = db_to_linear(theta_db);
                    const double analytic =
                        outage_probability(at.params, mode, collab);
                    SimConfig sim = make_sim_config(at, mode, collab);
                    if (options.sim_beta_override)
                        sim.params.beta = *options.sim_beta_override;
                    const EstimateWithError est = estimate_outage(sim);
                    ValidationPoint point;
                    std::ostringstream label;
                    label << "outage lambda=" << format_double(lambda)
                          << " beta=" << format_double(beta)
                          << " theta_db=" << format_double(theta_db) << " "
                          << to_string(mode);
                    point.label = label.str();
                    point.analytic = analytic;
                    point.empirical = est.value;
                    point.std_error = est.std_error;
                    point.z = detail::safe_z(analytic, est.value, est.std_error);
                    point.rel_err = analytic != 0.0
                                        ? std::abs(est.value - analytic) / analytic
                                        : 0.0;
                    point.passed = point.z <= 3.0;
                    detail::add_point(out, std::move(point));
                }
            }
        }
    }
}

// Spectral efficiency: rate-integral quadrature vs the empirical Shannon-rate
// mean. Pass rule: within 2% relative or 3 sigma, whichever is looser.
inline void validate_spectral_efficiency(const ExperimentConfig& config,
                                         ValidationOutcome& out) {
    static const double betas[] = {0.0, 1e-6, 1e-5};
    for (double lambda : validation_lambda_grid()) {
        ExperimentConfig at = config;
        at.params.lambda = lambda;
        at.params.sigma2 = 0.0;
        at.params.alpha = 4.0;
        const CollaborationProbabilities collab = analytic_collab(at);
        for (double beta : betas) {
            for (DuplexMode mode : {DuplexMode::hd, DuplexMode::fd}) {
                at.params.beta = beta;
                const double analytic =
                    spectral_efficiency(at.params, mode, collab);
                const SimConfig sim = make_sim_config(at, mode, collab);
                const EstimateWithError est = estimate_spectral_efficiency(sim);
                ValidationPoint point;
                std::ostringstream label;
                label << "se lambda=" << format_double(lambda)
                      << " beta=" << format_double(beta) << " "
                      << to_string(mode);
                point.label = label.str();
                point.analytic = analytic;
                point.empirical = est.value;
                point.std_error = est.std_error;
                point.z = detail::safe_z(analytic, est.value, est.std_error);
                point.rel_err = std::abs(est.value - analytic) /
                                std::abs(analytic);
                point.passed = point.rel_err <= 0.02 || point.z <= 3.0;
                detail::add_point(out, std::move(point));
            }
        }
    }
}

inline ValidationOutcome run_validation(const ExperimentConfig& config,
                                        std::ostream& report,
                                        const ValidationOptions& options = {}) {
    ValidationOutcome out;
    out.low_power = config.trials < 10000;
    report << "# fdd2d validation report (version " << version << ")\n";
    report << "# config_hash=" << config_hash(config) << " seed=" << config.seed
           << " trials=" << config.trials << "\n";
    if (out.low_power)
        report << "warning: trials < 10000; z-scores have low statistical "
                  "power\n";

    validate_collaboration(config, out);
    validate_outage(config, out, options);
    validate_spectral_efficiency(config, out);

    for (const auto& p : out.points) {
        report << (p.passed ? "pass" : "FAIL") << "  z=" << std::setw(8)
               << format_double(p.z) << "  analytic="
               << format_double(p.analytic)
               << "  empirical=" << format_double(p.empirical) << "  +/- "
               << format_double(p.std_error) << "  " << p.label << "\n";
    }
    report << "# " << (out.points.size() - out.failures) << "/"
           << out.points.size() << " points passed, max |z| = "
           << format_double(out.max_abs_z) << "\n";
    report << (out.passed ? "VALIDATION PASSED" : "VALIDATION FAILED") << "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Figure reproduction. Five CSV files plus gnuplot scripts, all analytic
// curves at the declared default parameters. Reproduction is qualitative
// (orderings, crossovers, monotonicity): several physical parameters behind
// the published curves are unspecified, so exact curve matching is not a
// goal and the defaults here are declared rather than fitted.

namespace detail {

inline std::vector<double> log_grid(double start, double stop, int points) {
    return sweep_grid(SweepAxis{"lambda", start, stop, points, true});
}

inline std::vector<double> lin_grid(double start, double stop, int points) {
    return sweep_grid(SweepAxis{"theta_db", start, stop, points, false});
}

struct FigureData {
    std::string name; // file stem
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<std::string> columns; // including the x column
    std::vector<std::vector<double>> rows;
};

inline void write_figure(const std::filesystem::path& dir,
                         const FigureData& fig, const ExperimentConfig& config,
                         std::vector<std::string>& created) {
    const std::filesystem::path csv_path = dir / (fig.name + ".csv");
    std::ofstream csv(csv_path);
    if (!csv)
        throw invalid_parameter_error("figures: cannot write to " +
                                      csv_path.string());
    csv << "# tool=fdd2d version=" << version
        << " config_hash=" << config_hash(config) << " seed=" << config.seed
        << "\n";
    for (std::size_t i = 0; i < fig.columns.size(); ++i)
        csv << fig.columns[i] << (i + 1 < fig.columns.size() ? "," : "\n");
    for (const auto& row : fig.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            csv << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
    created.push_back(csv_path.string());

    const std::filesystem::path gp_path = dir / (fig.name + ".gp");
    std::ofstream gp(gp_path);
    if (!gp)
        throw invalid_parameter_error("figures: cannot write to " +
                                      gp_path.string());
    gp << "# gnuplot script for " << fig.name << ".csv\n";
    gp << "set datafile separator comma\n";
    gp << "set key autotitle columnhead\n";
    if (fig.logx) gp << "set logscale x\n";
    if (fig.logy) gp << "set logscale y\n";
    gp << "set xlabel '" << fig.xlabel << "'\n";
    gp << "set ylabel '" << fig.ylabel << "'\n";
    gp << "set grid\n";
    gp << "set terminal pngcairo size 960,640\n";
    gp << "set output '" << fig.name << ".png'\n";
    gp << "plot ";
    for (std::size_t col = 2; col <= fig.columns.size(); ++col) {
        gp << "'" << fig.name << ".csv' using 1:" << col
           << " with linespoints";
        if (col < fig.columns.size()) gp << ", \\\n     ";
    }
    gp << "\n";
    created.push_back(gp_path.string());
}

} // namespace detail

// Emits the five figure CSVs and their gnuplot scripts into out_dir.
// Returns the paths created, CSV before script per figure.
inline std::vector<std::string> write_figures(const ExperimentConfig& config,
                                              const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw invalid_parameter_error("figures: cannot create directory " +
                                      out_dir);
    std::vector<std::string> created;

    // Figure 1: collaboration probabilities vs lambda per Zipf exponent.
    {
        detail::FigureData fig;
        fig.name = "fig1_collab_vs_lambda";
        fig.xlabel = "lambda (per m^2)";
        fig.ylabel = "collaboration probability";
        fig.logx = true;
        fig.columns = {"lambda_per_m2"};
        for (double gamma : fig1_gamma_values()) {
            fig.columns.push_back("p_hd_gamma" + format_double(gamma));
            fig.columns.push_back("p_fd_gamma" + format_double(gamma));
        }
        for (double lambda : fig1_lambda_grid()) {
            std::vector<double> row = {lambda};
            for (double gamma : fig1_gamma_values()) {
                const CollaborationProbabilities collab =
                    analytic_collab(config, lambda, config.params.mu, gamma);
                row.push_back(collab.p_hd);
                row.push_back(collab.p_fd);
            }
            fig.rows.push_back(std::move(row));
        }
        detail::write_figure(dir, fig, config, created);
    }

    // Figure 2: outage vs lambda for two demand loads, beta = 1e-5.
    {
        detail::FigureData fig;
        fig.name = "fig2_outage_vs_lambda";
        fig.xlabel = "lambda (per m^2)";
        fig.ylabel = "outage probability";
        fig.logx = true;
        static const double mus[] = {0.3, 0.6};
        fig.columns = {"lambda_per_m2"};
        for (double mu : mus) {
            fig.columns.push_back("outage_hd_mu" + format_double(mu));
            fig.columns.push_back("outage_fd_mu" + format_double(mu));
        }
        for (double lambda : detail::log_grid(1e-5, 1e-2, 13)) {
            std::vector<double> row = {lambda};
            for (double mu : mus) {
                ExperimentConfig at = config;
                at.params.lambda = lambda;
                at.params.mu = mu;
                at.params.beta = 1e-5;
                const CollaborationProbabilities collab = analytic_collab(at);
                row.push_back(
                    outage_probability(at.params, DuplexMode::hd, collab));
                row.push_back(
                    outage_probability(at.params, DuplexMode::fd, collab));
            }
            fig.rows.push_back(std::move(row));
        }
        detail::write_figure(dir, fig, config, created);
    }

    // Figure 3: outage vs SINR threshold for two SI-cancellation factors.
    {
        detail::FigureData fig;
        fig.name = "fig3_outage_vs_theta_beta";
        fig.xlabel = "theta_d (dB)";
        fig.ylabel = "outage probability";
        fig.columns = {"theta_db", "outage_hd", "outage_fd_beta1e-05",
                       "outage_fd_beta1e-06"};
        for (double theta_db : detail::lin_grid(-10.0, 25.0, 15)) {
            ExperimentConfig at = config;
            at.params.theta_d = db_to_linear(theta_db);
            const CollaborationProbabilities collab = analytic_collab(at);
            std::vector<double> row = {theta_db};
            at.params.beta = 1e-5;
            row.push_back(outage_probability(at.params, DuplexMode::hd, collab));
            row.push_back(outage_probability(at.params, DuplexMode::fd, collab));
            at.params.beta = 1e-6;
            row.push_back(outage_probability(at.params, DuplexMode::fd, collab));
            fig.rows.push_back(std::move(row));
        }
        detail::write_figure(dir, fig, config, created);
    }

    // Figure 4: outage vs SINR threshold for two demand loads, beta = 1e-5.
    {
        detail::FigureData fig;
        fig.name = "fig4_outage_vs_theta_mu";
        fig.xlabel = "theta_d (dB)";
        fig.ylabel = "outage probability";
        static const double mus[] = {0.3, 0.6};
        fig.columns = {"theta_db"};
        for (double mu : mus) {
            fig.columns.push_back("outage_hd_mu" + format_double(mu));
            fig.columns.push_back("outage_fd_mu" + format_double(mu));
        }
        for (double theta_db : detail::lin_grid(-10.0, 25.0, 15)) {
            std::vector<double> row = {theta_db};
            for (double mu : mus) {
                ExperimentConfig at = config;
                at.params.theta_d = db_to_linear(theta_db);
                at.params.mu = mu;
                at.params.beta = 1e-5;
                const CollaborationProbabilities collab = analytic_collab(at);
                row.push_back(
                    outage_probability(at.params, DuplexMode::hd, collab));
                row.push_back(
                    outage_probability(at.params, DuplexMode::fd, collab));
            }
            fig.rows.push_back(std::move(row));
        }
        detail::write_figure(dir, fig, config, created);
    }

    // Figure 5: spectral efficiency vs lambda for several beta values.
    {
        detail::FigureData fig;
        fig.name = "fig5_se_vs_lambda";
        fig.xlabel = "lambda (per m^2)";
        fig.ylabel = "spectral efficiency (bits/s/Hz)";
        fig.logx = true;
        fig.columns = {"lambda_per_m2", "se_hd", "se_fd_beta0",
                       "se_fd_beta1e-06", "se_fd_beta1e-05"};
        for (double lambda : detail::log_grid(1e-5, 1e-2, 13)) {
            ExperimentConfig at = config;
            at.params.lambda = lambda;
            at.params.sigma2 = 0.0;
            const CollaborationProbabilities collab = analytic_collab(at);
            std::vector<double> row = {lambda};
            at.params.beta = 0.0;
            row.push_back(se_auto(at, DuplexMode::hd, collab));
            row.push_back(se_auto(at, DuplexMode::fd, collab));
            at.params.beta = 1e-6;
            row.push_back(se_auto(at, DuplexMode::fd, collab));
            at.params.beta = 1e-5;
            row.push_back(se_auto(at, DuplexMode::fd, collab));
            fig.rows.push_back(std::move(row));
        }
        detail::write_figure(dir, fig, config, created);
    }

    return created;
}

} // namespace fdd2d
