// fdd2d command-line front end: analytic sweeps, Monte Carlo validation, and
// figure reproduction for the FD-D2D video-distribution analysis library.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical error
// (divergence or quadrature non-convergence), 3 validation failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdd2d/experiment.hpp"
#include "fdd2d/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fdd2d;

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<double> lambda, mu, gamma_r, alpha, beta, theta_db, rd,
        rho_d, sigma2, collab_radius, window_radius;
    std::optional<std::uint64_t> library_size, cache_size, trials, seed;
    std::optional<unsigned> threads;
    std::optional<std::string> mode, out, sweep;
    bool validate = false;
    std::optional<std::string> collab_source;
};

void add_shared_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--config", o.config_path,
                    "JSON config file; flags override its keys");
    cmd->add_option("--lambda", o.lambda, "UE density per m^2");
    cmd->add_option("--mu", o.mu, "demanding fraction in [0,1]");
    cmd->add_option("--alpha", o.alpha, "path-loss exponent (> 2)");
    cmd->add_option("--beta", o.beta, "residual SI power ratio in [0,1]");
    cmd->add_option("--theta-db", o.theta_db, "SINR threshold in dB");
    cmd->add_option("--rd", o.rd, "typical D2D link distance in m");
    cmd->add_option("--rho-d", o.rho_d, "D2D transmit power in W");
    cmd->add_option("--sigma2", o.sigma2, "noise power in W");
    cmd->add_option("--library-size", o.library_size, "content library size m");
    cmd->add_option("--cache-size", o.cache_size, "cached contents per user");
    cmd->add_option("--collab-radius", o.collab_radius,
                    "demander-count ball radius in m");
    cmd->add_option("--window-radius", o.window_radius,
                    "simulation window radius in m (0 = auto)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    cmd->add_option("--mode", o.mode, "hd | fd | both")
        ->check(CLI::IsMember({"hd", "fd", "both"}));
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--sweep", o.sweep,
                    "axis as name:start:stop:points:lin|log "
                    "(name in lambda|mu|beta|theta_db|gamma_r)");
}

SweepAxis parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 5)
        throw invalid_parameter_error(
            "sweep: expected name:start:stop:points:lin|log, got '" + text +
            "'");
    SweepAxis axis;
    axis.name = parts[0];
    try {
        axis.start = std::stod(parts[1]);
        axis.stop = std::stod(parts[2]);
        axis.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw invalid_parameter_error("sweep: malformed numbers in '" + text +
                                      "'");
    }
    if (parts[4] == "log")
        axis.log_spacing = true;
    else if (parts[4] == "lin")
        axis.log_spacing = false;
    else
        throw invalid_parameter_error("sweep: spacing must be lin or log");
    validate(axis);
    return axis;
}

void apply_json_config(ExperimentConfig& config, std::string& mode,
                       std::string& out_dir, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw invalid_parameter_error("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw invalid_parameter_error("config: invalid JSON in " + path +
                                      ": " + e.what());
    }
    if (!j.is_object())
        throw invalid_parameter_error("config: top level must be an object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "lambda") config.params.lambda = value.get<double>();
            else if (key == "mu") config.params.mu = value.get<double>();
            else if (key == "alpha") config.params.alpha = value.get<double>();
            else if (key == "beta") config.params.beta = value.get<double>();
            else if (key == "rho_d") config.params.rho_d = value.get<double>();
            else if (key == "sigma2") config.params.sigma2 = value.get<double>();
            else if (key == "theta_db")
                config.params.theta_d = db_to_linear(value.get<double>());
            else if (key == "r_d") config.params.r_d = value.get<double>();
            else if (key == "gamma_r") config.gamma_r = value.get<double>();
            else if (key == "library_size")
                config.library_size = value.get<std::uint64_t>();
            else if (key == "cache_size")
                config.cache_size = value.get<std::uint64_t>();
            else if (key == "collab_radius")
                config.collab_radius = value.get<double>();
            else if (key == "window_radius")
                config.window_radius = value.get<double>();
            else if (key == "trials") config.trials = value.get<std::uint64_t>();
            else if (key == "seed") config.seed = value.get<std::uint64_t>();
            else if (key == "threads") config.threads = value.get<unsigned>();
            else if (key == "mode") mode = value.get<std::string>();
            else if (key == "out") out_dir = value.get<std::string>();
            else
                throw invalid_parameter_error("config: unknown key '" + key +
                                              "'");
        } catch (const json::exception& e) {
            throw invalid_parameter_error("config: bad value for '" + key +
                                          "': " + e.what());
        }
    }
}

struct ResolvedOptions {
    ExperimentConfig config;
    std::string mode = "both";
    std::string out_dir = ".";
    bool validate = false;
    CollabSource collab_source = CollabSource::analytic;
    std::optional<SweepAxis> sweep;
};

ResolvedOptions resolve(const CliOptions& o) {
    ResolvedOptions r;
    if (!o.config_path.empty())
        apply_json_config(r.config, r.mode, r.out_dir, o.config_path);
    // flags win over config-file keys
    if (o.lambda) r.config.params.lambda = *o.lambda;
    if (o.mu) r.config.params.mu = *o.mu;
    if (o.alpha) r.config.params.alpha = *o.alpha;
    if (o.beta) r.config.params.beta = *o.beta;
    if (o.theta_db) r.config.params.theta_d = db_to_linear(*o.theta_db);
    if (o.rd) r.config.params.r_d = *o.rd;
    if (o.rho_d) r.config.params.rho_d = *o.rho_d;
    if (o.sigma2) r.config.params.sigma2 = *o.sigma2;
    if (o.gamma_r) r.config.gamma_r = *o.gamma_r;
    if (o.library_size) r.config.library_size = *o.library_size;
    if (o.cache_size) r.config.cache_size = *o.cache_size;
    if (o.collab_radius) r.config.collab_radius = *o.collab_radius;
    if (o.window_radius) r.config.window_radius = *o.window_radius;
    if (o.trials) r.config.trials = *o.trials;
    if (o.seed) r.config.seed = *o.seed;
    if (o.threads) r.config.threads = *o.threads;
    if (o.mode) r.mode = *o.mode;
    if (o.out) r.out_dir = *o.out;
    r.validate = o.validate;
    if (o.collab_source) {
        if (*o.collab_source == "analytic")
            r.collab_source = CollabSource::analytic;
        else if (*o.collab_source == "empirical")
            r.collab_source = CollabSource::empirical;
        else
            throw invalid_parameter_error(
                "collab-source must be analytic or empirical");
    }
    if (o.sweep) r.sweep = parse_sweep(*o.sweep);
    validate(r.config.params);
    if (r.config.library_size == 0)
        throw invalid_parameter_error("library_size must be >= 1");
    if (r.config.cache_size == 0 ||
        r.config.cache_size > r.config.library_size)
        throw invalid_parameter_error(
            "cache_size must be in [1, library_size]");
    if (!(r.config.collab_radius > 0.0))
        throw invalid_parameter_error("collab_radius must be > 0");
    if (r.config.window_radius < 0.0)
        throw invalid_parameter_error("window_radius must be >= 0");
    if (r.config.trials == 0)
        throw invalid_parameter_error("trials must be >= 1");
    return r;
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw invalid_parameter_error("cannot create output directory " +
                                      out_dir);
    return dir;
}

void write_result_file(const fs::path& path, const SweepResult& result) {
    std::ofstream out(path);
    if (!out)
        throw invalid_parameter_error("cannot write to " + path.string());
    write_sweep_csv(out, result);
    std::cout << "wrote " << path.string() << " (" << result.rows.size()
              << " rows)\n";
}

int cmd_collab(const ResolvedOptions& r, const std::vector<double>& gammas) {
    const SweepAxis axis = r.sweep.value_or(
        SweepAxis{"lambda", fig1_lambda_grid().front(),
                  fig1_lambda_grid().back(), 6, true});
    const fs::path dir = prepare_out_dir(r.out_dir);
    for (double gamma : gammas) {
        const SweepResult result =
            run_sweep(r.config, axis, SweepMetric::collab,
                      parse_modes(r.mode), r.validate, gamma);
        std::ostringstream name;
        name << "collab_gamma" << format_double(gamma) << ".csv";
        write_result_file(dir / name.str(), result);
    }
    return 0;
}

int cmd_metric_sweep(const ResolvedOptions& r, SweepMetric metric,
                     const char* stem) {
    const SweepAxis axis =
        r.sweep.value_or(SweepAxis{"lambda", 1e-5, 1e-2, 13, true});
    if (r.collab_source == CollabSource::empirical)
        std::cout << "collaboration input: Monte Carlo estimates at "
                  << r.config.trials << " trials per point\n";
    const SweepResult result =
        run_sweep(r.config, axis, metric, parse_modes(r.mode), r.validate,
                  {}, r.collab_source);
    const fs::path dir = prepare_out_dir(r.out_dir);
    write_result_file(dir / (std::string(stem) + "_" + axis.name + ".csv"),
                      result);
    return 0;
}

int cmd_validate(const ResolvedOptions& r) {
    const fs::path dir = prepare_out_dir(r.out_dir);
    std::ostringstream report;
    const ValidationOutcome outcome = run_validation(r.config, report);
    std::cout << report.str();
    const fs::path path = dir / "validation_report.txt";
    std::ofstream out(path);
    if (!out)
        throw invalid_parameter_error("cannot write to " + path.string());
    out << report.str();
    std::cout << "wrote " << path.string() << "\n";
    if (!outcome.passed) {
        std::cerr << "validation failed at " << outcome.failures << "/"
                  << outcome.points.size() << " points (max |z| = "
                  << format_double(outcome.max_abs_z) << ")\n";
        return 3;
    }
    return 0;
}

int cmd_figures(const ResolvedOptions& r) {
    const auto files = write_figures(r.config, r.out_dir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("fdd2d ") + version +
                 " - stochastic-geometry analysis of full-duplex D2D video "
                 "distribution"};
    app.require_subcommand(1);

    CliOptions collab_opts, outage_opts, se_opts, validate_opts, figures_opts;
    std::vector<double> collab_gammas;

    CLI::App* collab = app.add_subcommand(
        "collab", "collaboration-probability sweeps (HD/FD)");
    add_shared_options(collab, collab_opts);
    collab->add_option("--gamma-r", collab_gammas,
                       "Zipf exponent(s); repeatable");
    collab->add_flag("--validate", collab_opts.validate,
                     "add Monte Carlo columns");

    CLI::App* outage = app.add_subcommand("outage", "outage-probability sweeps");
    add_shared_options(outage, outage_opts);
    outage->add_option("--gamma-r", outage_opts.gamma_r, "Zipf exponent");
    outage->add_flag("--validate", outage_opts.validate,
                     "add Monte Carlo columns");
    outage->add_option("--collab-source", outage_opts.collab_source,
                       "analytic | empirical collaboration input");

    CLI::App* se = app.add_subcommand("se", "spectral-efficiency sweeps");
    add_shared_options(se, se_opts);
    se->add_option("--gamma-r", se_opts.gamma_r, "Zipf exponent");
    se->add_flag("--validate", se_opts.validate, "add Monte Carlo columns");
    se->add_option("--collab-source", se_opts.collab_source,
                   "analytic | empirical collaboration input");

    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "full analytic-vs-Monte-Carlo validation suite");
    add_shared_options(validate_cmd, validate_opts);
    validate_cmd->add_option("--gamma-r", validate_opts.gamma_r,
                             "Zipf exponent");

    CLI::App* figures = app.add_subcommand(
        "figures", "emit the five reference figures as CSV + gnuplot scripts");
    add_shared_options(figures, figures_opts);
    figures->add_option("--gamma-r", figures_opts.gamma_r, "Zipf exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (collab->parsed()) {
            if (collab_gammas.empty()) collab_gammas = fig1_gamma_values();
            return cmd_collab(resolve(collab_opts), collab_gammas);
        }
        if (outage->parsed())
            return cmd_metric_sweep(resolve(outage_opts), SweepMetric::outage,
                                    "outage");
        if (se->parsed())
            return cmd_metric_sweep(resolve(se_opts),
                                    SweepMetric::spectral_efficiency, "se");
        if (validate_cmd->parsed()) return cmd_validate(resolve(validate_opts));
        if (figures->parsed()) return cmd_figures(resolve(figures_opts));
    } catch (const convergence_error& e) {
        std::cerr << "numerical error: " << e.what()
                  << " (best estimate " << format_double(e.best_estimate)
                  << " +/- " << format_double(e.error_bound) << ")\n";
        return 2;
    } catch (const divergence_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const pole_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
