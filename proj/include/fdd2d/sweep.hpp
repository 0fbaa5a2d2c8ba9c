#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdd2d/errors.hpp"
#include "fdd2d/params.hpp"
#include "fdd2d/version.hpp"

namespace fdd2d {

// One sweepable parameter. Axis names double as CSV column headers and carry
// the unit where one applies.
struct SweepAxis {
    std::string name; // lambda | mu | beta | theta_db | gamma_r
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    bool log_spacing = false;
};

inline const std::vector<std::string>& sweep_axis_names() {
    static const std::vector<std::string> names = {"lambda", "mu", "beta",
                                                   "theta_db", "gamma_r"};
    return names;
}

inline std::string axis_column(const std::string& axis_name) {
    if (axis_name == "lambda") return "lambda_per_m2";
    return axis_name; // mu, beta, gamma_r dimensionless; theta_db carries dB
}

inline void validate(const SweepAxis& axis) {
    bool known = false;
    for (const auto& n : sweep_axis_names()) known |= (n == axis.name);
    if (!known)
        throw invalid_parameter_error("sweep: unknown axis '" + axis.name + "'");
    if (axis.points < 2)
        throw invalid_parameter_error("sweep: points must be >= 2");
    if (!(axis.start < axis.stop))
        throw invalid_parameter_error("sweep: requires start < stop");
    if (axis.log_spacing && !(axis.start > 0.0))
        throw invalid_parameter_error("sweep: log spacing requires start > 0");
}

inline std::vector<double> sweep_grid(const SweepAxis& axis) {
    validate(axis);
    std::vector<double> grid(axis.points);
    const double n = static_cast<double>(axis.points - 1);
    for (int i = 0; i < axis.points; ++i) {
        const double frac = static_cast<double>(i) / n;
        grid[i] = axis.log_spacing
                      ? axis.start * std::pow(axis.stop / axis.start, frac)
                      : axis.start + (axis.stop - axis.start) * frac;
    }
    grid.front() = axis.start;
    grid.back() = axis.stop;
    return grid;
}

struct SweepRow {
    double axis_value = 0.0;
    DuplexMode mode = DuplexMode::hd;
    double analytic = 0.0;
    std::optional<double> empirical;
    std::optional<double> std_error;
};

struct SweepResult {
    std::string axis_name;   // CSV column name, unit included
    std::string metric_name; // e.g. outage, se_bits_per_s_hz
    std::vector<SweepRow> rows;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// Fixed "%.12g" formatting: locale-independent '.' decimal point and enough
// digits that equal doubles always produce equal bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string hash_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "# tool=fdd2d version=" << version << " config_hash="
       << result.config_hash << " seed=" << result.seed << "\n";
    os << result.axis_name << ",mode,analytic_" << result.metric_name
       << ",empirical_" << result.metric_name << ",std_error\n";
    for (const auto& row : result.rows) {
        os << format_double(row.axis_value) << ',' << to_string(row.mode) << ','
           << format_double(row.analytic) << ',';
        if (row.empirical) os << format_double(*row.empirical);
        os << ',';
        if (row.std_error) os << format_double(*row.std_error);
        os << '\n';
    }
}

} // namespace fdd2d
