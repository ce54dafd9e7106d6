#include "scb/io.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "scb/error.hpp"

namespace scb {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) out.push_back(cell);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

bool parse_double(const std::string& cell, double& out) {
    std::string t = trim(cell);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), errc::io_error, "cannot open for writing: " + path);
    out << content;
    require(out.good(), errc::io_error, "write failed: " + path);
}

const char* const kVolatileKeys[] = {"generated_at", "timestamp", "input_path", "out_dir",
                                     "prefix",       "provenance", "path"};

void strip_volatile(nlohmann::json& j) {
    if (j.is_object()) {
        for (const char* key : kVolatileKeys) j.erase(key);
        for (auto& [_, v] : j.items()) strip_volatile(v);
    } else if (j.is_array()) {
        for (auto& v : j) strip_volatile(v);
    }
}

}  // namespace

series_load load_series(const std::string& path, const std::string& column, char delim) {
    std::ifstream in(path);
    require(in.good(), errc::file_not_found, "cannot open: " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), errc::all_rows_invalid,
            "file has no header row: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split(line, delim);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) == column) {
            col = i;
            break;
        }
    require(col < header.size(), errc::column_not_found,
            "column '" + column + "' not found in " + path);

    series_load out;
    out.path = path;
    out.column = column;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, delim);
        double v;
        if (col < cells.size() && parse_double(cells[col], v))
            out.values.push_back(v);
        else
            ++out.dropped;
    }
    require(!out.values.empty(), errc::all_rows_invalid,
            "no parsable rows in column '" + column + "' of " + path);
    return out;
}

diffusion_dataset make_regression_pairs(std::span<const double> series, double delta,
                                        const std::string& provenance) {
    require(series.size() >= 2, errc::series_too_short, "need at least two observations");
    require(delta > 0.0, errc::domain_error, "delta must be positive");
    diffusion_dataset d;
    d.raw.assign(series.begin(), series.end());
    d.n = series.size() - 1;
    d.delta = delta;
    d.provenance = provenance;
    d.x.resize(d.n);
    d.y.resize(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
        d.x[i] = series[i];
        d.y[i] = series[i + 1] - series[i];
    }
    return d;
}

void export_band_csv(const simultaneous_band& band, const std::string& path) {
    std::ostringstream os;
    os << "x,center,lower,upper\n";
    for (int j = 0; j < band.grid.m; ++j)
        os << fmt12(band.grid.points[j]) << ',' << fmt12(band.center[j]) << ','
           << fmt12(band.lower[j]) << ',' << fmt12(band.upper[j]) << '\n';
    write_text(path, os.str());
}

nlohmann::json band_to_json(const simultaneous_band& band) {
    nlohmann::json cal{{"level", band.calibration.level},
                       {"method", band_method_name(band.calibration.method)},
                       {"bbar", band.calibration.bbar},
                       {"d_n", band.calibration.d_n},
                       {"z_alpha", band.calibration.z_alpha},
                       {"halfwidth_scale", band.calibration.halfwidth_scale},
                       {"pi_reps", band.calibration.pi_reps},
                       {"seed", band.calibration.seed}};
    nlohmann::json j{{"target", band_target_name(band.target)},
                     {"level", band.level},
                     {"method", band_method_name(band.calibration.method)},
                     {"kernel", band.kernel_name},
                     {"bandwidth", band.bandwidth},
                     {"n", band.n},
                     {"grid", {{"lo", band.grid.lo}, {"hi", band.grid.hi}, {"m", band.grid.m}}},
                     {"calibration", cal},
                     {"x", band.grid.points},
                     {"center", band.center},
                     {"lower", band.lower},
                     {"upper", band.upper},
                     {"small_nb_warning", band.small_nb_warning}};
    if (band.target == band_target::variance) {
        j["nu_eta"] = band.nu_eta;
        j["negative_center_floored"] = band.negative_center_floored;
    }
    return j;
}

void export_band_json(const simultaneous_band& band, const std::string& path) {
    write_text(path, band_to_json(band).dump(2) + "\n");
}

void export_curve_csv(const curve_estimate& curve, const std::string& path) {
    std::ostringstream os;
    os << "x,value\n";
    for (int j = 0; j < curve.grid.m; ++j)
        os << fmt12(curve.grid.points[j]) << ',' << fmt12(curve.values[j]) << '\n';
    write_text(path, os.str());
}

nlohmann::json pi_sample_to_json(const pi_sample& s) {
    return nlohmann::json{{"reps", s.reps},
                          {"level", s.level},
                          {"cutoff", s.cutoff},
                          {"seed", s.seed},
                          {"n", s.n},
                          {"bandwidth", s.bandwidth},
                          {"kernel", s.kernel_name}};
}

void export_pi_sample_csv(const pi_sample& s, const std::string& path) {
    std::ostringstream os;
    os << "replicate,pi_n\n";
    for (std::size_t i = 0; i < s.values.size(); ++i)
        os << i << ',' << fmt12(s.values[i]) << '\n';
    write_text(path, os.str());
}

csv_table read_csv(const std::string& path, char delim) {
    std::ifstream in(path);
    require(in.good(), errc::file_not_found, "cannot open: " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), errc::all_rows_invalid,
            "empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    csv_table t;
    for (auto& h : split(line, delim)) t.header.push_back(trim(h));
    t.columns.resize(t.header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, delim);
        require(cells.size() == t.header.size(), errc::io_error, "ragged row in " + path);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v;
            require(parse_double(cells[i], v), errc::io_error, "non-numeric cell in " + path);
            t.columns[i].push_back(v);
        }
    }
    return t;
}

void write_series_csv(std::span<const double> values, const std::string& column,
                      const std::string& path) {
    std::ostringstream os;
    os << column << '\n';
    for (double v : values) os << fmt12(v) << '\n';
    write_text(path, os.str());
}

std::uint64_t config_hash(nlohmann::json config) {
    strip_volatile(config);
    std::string s = config.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

pipeline_config pipeline_config::from_json(const nlohmann::json& j) {
    pipeline_config c;
    c.input_path = j.value("input_path", "");
    c.column = j.value("column", c.column);
    std::string d = j.value("delim", ",");
    require(d.size() == 1, errc::domain_error, "delimiter must be one character");
    c.delim = d[0];
    c.delta = j.value("delta", c.delta);
    c.b = j.value("b", 0.0);
    c.h = j.value("h", 0.0);
    c.lo = j.value("lo", 0.0);
    c.hi = j.value("hi", 0.0);
    c.alpha = j.value("alpha", c.alpha);
    c.kernel = j.value("kernel", c.kernel);
    c.method = band_method_by_name(j.value("method", "simulated"));
    c.pi_reps = j.value("pi_reps", c.pi_reps);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", 0);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.prefix = j.value("prefix", c.prefix);
    c.gof_affine = j.value("gof_affine", true);
    return c;
}

nlohmann::json pipeline_config::to_json() const {
    return nlohmann::json{{"column", column},
                          {"delim", std::string(1, delim)},
                          {"delta", delta},
                          {"b", b},
                          {"h", h == 0.0 ? b : h},
                          {"lo", lo},
                          {"hi", hi},
                          {"alpha", alpha},
                          {"kernel", kernel},
                          {"method", band_method_name(method)},
                          {"pi_reps", pi_reps},
                          {"seed", seed},
                          {"gof_affine", gof_affine}};
}

pipeline_result run_pipeline(const pipeline_config& cfg) {
    require(cfg.b > 0.0, errc::domain_error, "pipeline requires a bandwidth b");
    require(cfg.lo < cfg.hi, errc::domain_error, "pipeline requires an interval lo < hi");
    const double h = cfg.h > 0.0 ? cfg.h : cfg.b;
    kernel_profile kern = kernel_by_name(cfg.kernel);

    auto stage_fail = [](const char* stage, const error& e) -> error {
        return error(e.code(), std::string("pipeline stage '") + stage + "': " + e.what());
    };

    series_load series;
    diffusion_dataset data;
    try {
        series = load_series(cfg.input_path, cfg.column, cfg.delim);
        data = make_regression_pairs(series.values, cfg.delta, cfg.input_path);
    } catch (const error& e) {
        throw stage_fail("load", e);
    }

    std::size_t inside = 0;
    for (double xv : data.x)
        if (xv >= cfg.lo && xv <= cfg.hi) ++inside;
    double interval_coverage = static_cast<double>(inside) / static_cast<double>(data.n);

    band_options opt;
    opt.pi_reps = cfg.pi_reps;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;

    simultaneous_band band_mu;
    regression_stage stage;
    try {
        stage = regression_center(data.x, data.y, cfg.b, cfg.lo, cfg.hi, cfg.alpha, kern, opt);
        band_mu = scb_regression(data.x, data.y, cfg.b, cfg.lo, cfg.hi, cfg.alpha, kern,
                                 cfg.method, opt);
    } catch (const error& e) {
        throw stage_fail("regression", e);
    }

    simultaneous_band band_s2;
    try {
        band_options vopt = opt;
        vopt.seed = cfg.seed + 1;
        band_s2 = scb_volatility(stage.resid_x, stage.resid, h, cfg.lo, cfg.hi, cfg.alpha, kern,
                                 cfg.method, vopt);
    } catch (const error& e) {
        throw stage_fail("volatility", e);
    }

    pipeline_result res;
    res.cutoff = band_mu.calibration.halfwidth_scale;
    res.interval_coverage = interval_coverage;

    if (cfg.gof_affine) {
        try {
            affine_fit fit = fit_affine(data.x, data.y, cfg.lo, cfg.hi);
            res.gof_mu = gof_test(
                band_mu, [&](double xv) { return fit.a0 + fit.a1 * xv; },
                "mu(x) = a0 + a1 x (OLS fit)");
        } catch (const error& e) {
            throw stage_fail("gof", e);
        }
    }

    nlohmann::json canonical = cfg.to_json();
    res.hash = config_hash(canonical);
    std::string base = cfg.out_dir + "/" + cfg.prefix;
    res.regression_band_csv = base + "_mu_band.csv";
    res.regression_band_json = base + "_mu_band.json";
    res.volatility_band_csv = base + "_sigma2_band.csv";
    res.volatility_band_json = base + "_sigma2_band.json";
    res.calibration_json = base + "_calibration.json";
    res.report_json = base + "_report.json";

    try {
        std::string stamp = timestamp_now();
        export_band_csv(band_mu, res.regression_band_csv);
        export_band_csv(band_s2, res.volatility_band_csv);

        nlohmann::json jmu = band_to_json(band_mu);
        jmu["config_hash"] = res.hash;
        jmu["generated_at"] = stamp;
        write_text(res.regression_band_json, jmu.dump(2) + "\n");

        nlohmann::json js2 = band_to_json(band_s2);
        js2["config_hash"] = res.hash;
        js2["generated_at"] = stamp;
        write_text(res.volatility_band_json, js2.dump(2) + "\n");

        nlohmann::json jcal{{"config", canonical},
                            {"config_hash", res.hash},
                            {"generated_at", stamp},
                            {"regression_cutoff", band_mu.calibration.halfwidth_scale},
                            {"volatility_cutoff", band_s2.calibration.halfwidth_scale},
                            {"method", band_method_name(cfg.method)},
                            {"pi_reps", cfg.pi_reps}};
        write_text(res.calibration_json, jcal.dump(2) + "\n");

        nlohmann::json jrep{{"config", canonical},
                            {"config_hash", res.hash},
                            {"generated_at", stamp},
                            {"input_path", cfg.input_path},
                            {"n_pairs", data.n},
                            {"rows_dropped", series.dropped},
                            {"interval_coverage", interval_coverage},
                            {"cutoff", res.cutoff},
                            {"nu_eta", band_s2.nu_eta},
                            {"small_nb_warning", band_mu.small_nb_warning}};
        if (cfg.gof_affine) {
            jrep["gof_affine"] = nlohmann::json{{"hypothesis", res.gof_mu.hypothesis},
                                                {"contained", res.gof_mu.contained},
                                                {"max_violation", res.gof_mu.max_violation},
                                                {"violation_argmax", res.gof_mu.violation_argmax},
                                                {"rejected", !res.gof_mu.contained}};
        }
        write_text(res.report_json, jrep.dump(2) + "\n");
    } catch (const error& e) {
        throw stage_fail("export", e);
    }
    return res;
}

}  // namespace scb
