#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scb/bands.hpp"
#include "scb/processes.hpp"

namespace scb {

using json = nlohmann::json;

// Kolmogorov-Smirnov distance between the empirical CDF of a sample and a
// reference CDF, evaluated at the sample points (no binning).
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

struct experiment_report {
    json config;
    json summary;
    double wall_seconds = 0.0;
    json to_json() const;
    std::string text_table() const;
};

// ---------------------------------------------------------------------------
// Coverage of simultaneous bands against the model truth.
// ---------------------------------------------------------------------------

struct coverage_config {
    process_model model;
    band_target target = band_target::density;
    std::size_t n = 5000;
    double b = 0.1;         // band bandwidth (h for variance targets)
    double lo = 0.0, hi = 1.0;
    double alpha = 0.05;
    std::string kernel = "epanechnikov";
    band_method method = band_method::simulated;
    int pi_reps = 500;
    int reps = 300;
    std::uint64_t seed = 1;
    int threads = 0;
    // truth on the interval; empty -> derived from the model (marginal pdf /
    // mu / sigma^2)
    std::string truth_spec;
    // also run the other calibration method on the same draws and report the
    // coverage gap
    bool compare_methods = false;
    band_options extra;
};

coverage_config coverage_config_from_json(const json& j);
experiment_report coverage_experiment(const coverage_config& cfg);

// ---------------------------------------------------------------------------
// Gumbel convergence of the normalized maximum deviation of the kde.
// ---------------------------------------------------------------------------

enum class centering { true_f, exact_mean };

struct gumbel_config {
    process_model model;
    std::size_t n = 5000;
    double b = 0.0;  // 0 -> n^{-1/5}
    double lo = -1.0, hi = 1.0;
    std::string kernel = "epanechnikov";
    centering center = centering::exact_mean;
    int reps = 1000;
    std::uint64_t seed = 1;
    int threads = 0;
};

gumbel_config gumbel_config_from_json(const json& j);
experiment_report gumbel_convergence_experiment(const gumbel_config& cfg);

// ---------------------------------------------------------------------------
// LRD dichotomy: which limit law fits the normalized deviations better.
// ---------------------------------------------------------------------------

struct dichotomy_regime {
    std::string name;
    double bandwidth_exponent = 0.2;  // b = n^{-exponent}
};

struct dichotomy_config {
    double beta = 0.75;
    double ell = 1.0;
    std::vector<dichotomy_regime> regimes;
    std::size_t n = 10000;
    double lo = -1.0, hi = 1.0;
    std::string kernel = "epanechnikov";
    int reps = 500;
    std::uint64_t seed = 1;
    int threads = 0;
};

dichotomy_config dichotomy_config_from_json(const json& j);
experiment_report dichotomy_experiment(const dichotomy_config& cfg);

// Model description from JSON (shared by the experiment configs and the CLI).
process_model process_model_from_json(const json& j);

}  // namespace scb
