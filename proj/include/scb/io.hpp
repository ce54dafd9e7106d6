#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scb/bands.hpp"

namespace scb {

// ---------------------------------------------------------------------------
// Delimited text ingestion
// ---------------------------------------------------------------------------

struct series_load {
    std::vector<double> values;
    int dropped = 0;  // rows with missing or non-numeric cells
    std::string path;
    std::string column;
};

// Header row required; rows with missing/non-numeric values in the column are
// dropped and counted, order preserved.
series_load load_series(const std::string& path, const std::string& column, char delim = ',');

struct diffusion_dataset {
    std::vector<double> raw;  // levels
    std::vector<double> x;    // X_i = R_{t_i}
    std::vector<double> y;    // Y_i = R_{t_{i+1}} - R_{t_i}
    double delta = 1.0 / 250.0;
    std::size_t n = 0;  // pair count
    std::string provenance;
};

diffusion_dataset make_regression_pairs(std::span<const double> series, double delta,
                                        const std::string& provenance = "");

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

// CSV columns exactly x,center,lower,upper at 12 significant digits.
void export_band_csv(const simultaneous_band& band, const std::string& path);
nlohmann::json band_to_json(const simultaneous_band& band);
void export_band_json(const simultaneous_band& band, const std::string& path);

void export_curve_csv(const curve_estimate& curve, const std::string& path);
nlohmann::json pi_sample_to_json(const pi_sample& s);
void export_pi_sample_csv(const pi_sample& s, const std::string& path);

// Generic numeric CSV reader (round-trip checks, data with headers).
struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};
csv_table read_csv(const std::string& path, char delim = ',');

void write_series_csv(std::span<const double> values, const std::string& column,
                      const std::string& path);

// ---------------------------------------------------------------------------
// Config hashing: FNV-1a over the canonical dump with volatile fields
// (timestamps, filesystem paths) removed.
// ---------------------------------------------------------------------------

std::uint64_t config_hash(nlohmann::json config);

// ---------------------------------------------------------------------------
// End-to-end pipeline: regression band + volatility band + calibration
// summary + affine GOF from a rates series.
// ---------------------------------------------------------------------------

struct pipeline_config {
    std::string input_path;   // delimited text with a header
    std::string column = "rate";
    char delim = ',';
    double delta = 1.0 / 250.0;
    double b = 0.0;  // required
    double h = 0.0;  // 0 -> b
    double lo = 0.0, hi = 0.0;
    double alpha = 0.05;
    std::string kernel = "epanechnikov";
    band_method method = band_method::simulated;
    int pi_reps = 10000;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out_dir = ".";
    std::string prefix = "scb";
    bool gof_affine = true;

    static pipeline_config from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;  // canonical (no paths, no timestamps)
};

struct pipeline_result {
    std::string regression_band_csv, regression_band_json;
    std::string volatility_band_csv, volatility_band_json;
    std::string calibration_json;
    std::string report_json;
    double cutoff = 0.0;
    double interval_coverage = 0.0;  // fraction of regressors inside [lo, hi]
    gof_result gof_mu;
    std::uint64_t hash = 0;
};

pipeline_result run_pipeline(const pipeline_config& cfg);

}  // namespace scb
