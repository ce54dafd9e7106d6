// scb: simultaneous confidence bands for densities, drift and volatility of
// stationary time series, plus the Monte Carlo validation harness.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "scb/asymptotics.hpp"
#include "scb/bands.hpp"
#include "scb/calibration.hpp"
#include "scb/error.hpp"
#include "scb/harness.hpp"
#include "scb/io.hpp"
#include "scb/kernel.hpp"
#include "scb/processes.hpp"

namespace {

using nlohmann::json;

std::uint64_t resolve_seed(std::uint64_t cli_seed, bool seed_given) {
    if (seed_given) return cli_seed;
    if (const char* env = std::getenv("SCB_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

void parse_interval(const std::string& spec, double& lo, double& hi) {
    auto colon = spec.find(':');
    scb::require(colon != std::string::npos, scb::errc::domain_error,
                 "interval must be l:u, got " + spec);
    lo = std::stod(spec.substr(0, colon));
    hi = std::stod(spec.substr(colon + 1));
    scb::require(lo < hi, scb::errc::domain_error, "interval needs l < u");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    scb::require(in.good(), scb::errc::file_not_found, "cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        scb::fail(scb::errc::io_error, std::string("bad JSON in ") + path + ": " + e.what());
    }
    return j;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        scb::require(out.good(), scb::errc::io_error, "cannot write: " + out_path);
        out << text;
    }
}

struct band_cli {
    std::string data_path, column = "x", x_column = "x", y_column = "y", interval;
    std::string kernel = "epanechnikov", method = "simulated", out, format = "csv";
    std::string l1_log_arg = "bbar";
    double bandwidth = 0.0, h = 0.0, alpha = 0.05;
    int reps = 2000, threads = 0;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool bias_correct = false, clip_lower = false;
    std::optional<double> nu_eta;
};

void add_common_band_options(CLI::App* cmd, band_cli& o, bool xy) {
    cmd->add_option("--data", o.data_path, "input delimited file")->required();
    if (xy) {
        cmd->add_option("--x-column", o.x_column, "regressor column");
        cmd->add_option("--y-column", o.y_column, "response column");
    } else {
        cmd->add_option("--column", o.column, "value column");
    }
    cmd->add_option("--bandwidth,-b", o.bandwidth, "kernel bandwidth")->required();
    cmd->add_option("--interval", o.interval, "band interval l:u")->required();
    cmd->add_option("--alpha", o.alpha, "band level alpha");
    cmd->add_option("--kernel", o.kernel, "epanechnikov|rect|triangular|quartic");
    cmd->add_option("--method", o.method, "gumbel|simulated");
    cmd->add_option("--reps", o.reps, "Pi_n replicates (simulated method)");
    cmd->add_option("--seed", o.seed, "rng seed")->each([&o](const std::string&) {
        o.seed_given = true;
    });
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
    cmd->add_option("--out", o.out, "output path base (default stdout JSON)");
    cmd->add_option("--format", o.format, "csv|json|both for --out");
    cmd->add_option("--l1-log-arg", o.l1_log_arg, "b|bbar: log argument in d_n and l1");
}

scb::band_options base_options(const band_cli& o) {
    scb::band_options opt;
    opt.pi_reps = o.reps;
    opt.seed = resolve_seed(o.seed, o.seed_given);
    opt.threads = o.threads;
    opt.l1_log_arg_b = o.l1_log_arg == "b";
    return opt;
}

void write_band_outputs(const scb::simultaneous_band& band, const band_cli& o) {
    if (o.out.empty()) {
        emit(scb::band_to_json(band), "");
        return;
    }
    if (o.format == "csv" || o.format == "both") scb::export_band_csv(band, o.out + ".csv");
    if (o.format == "json" || o.format == "both") scb::export_band_json(band, o.out + ".json");
    json summary{{"cutoff", band.calibration.halfwidth_scale},
                 {"method", scb::band_method_name(band.calibration.method)},
                 {"files", o.format}};
    std::cout << summary.dump(2) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"simultaneous confidence bands for stationary time series"};
    app.require_subcommand(1);

    // ---- constants ----
    auto* c_cmd = app.add_subcommand("constants", "print calibration constants as JSON");
    struct {
        std::string kernel = "epanechnikov", interval = "0:1", l1_log_arg = "bbar", out;
        std::size_t n = 0;
        double bandwidth = 0.0, alpha = 0.05, delta1 = 0.0, delta2 = 0.0, beta = 0.0;
    } co;
    c_cmd->add_option("--kernel", co.kernel);
    c_cmd->add_option("--n", co.n);
    c_cmd->add_option("--bandwidth,-b", co.bandwidth)->required();
    c_cmd->add_option("--interval", co.interval);
    c_cmd->add_option("--alpha", co.alpha);
    c_cmd->add_option("--l1-log-arg", co.l1_log_arg, "b|bbar: log argument in d_n and l1");
    c_cmd->add_option("--delta1", co.delta1, "(C1) lower exponent");
    c_cmd->add_option("--delta2", co.delta2, "(C1) upper exponent");
    c_cmd->add_option("--beta", co.beta, "LRD exponent for regime diagnostics");
    c_cmd->add_option("--out", co.out);
    c_cmd->callback([&] {
        double lo, hi;
        parse_interval(co.interval, lo, hi);
        scb::kernel_profile k = scb::kernel_by_name(co.kernel);
        double barg = co.l1_log_arg == "b" ? co.bandwidth : co.bandwidth / (hi - lo);
        json j{{"kernel",
                {{"name", k.name},
                 {"A", k.A},
                 {"lambda_K", k.lambda_K},
                 {"K1", k.K1},
                 {"K2", k.K2},
                 {"psi_K", k.psi_K},
                 {"alpha", k.alpha},
                 {"C0", k.C0}}},
               {"bandwidth", co.bandwidth},
               {"interval", {lo, hi}},
               {"bbar", co.bandwidth / (hi - lo)},
               {"z_alpha", scb::gumbel_quantile(co.alpha)},
               {"d_n", scb::normalizing_dn(barg, k)},
               {"l1", scb::halfwidth_l1(co.alpha, barg, k)},
               {"l2", scb::halfwidth_l2(co.alpha, co.bandwidth, hi - lo)}};
        if (co.beta > 0.0) {
            scb::lrd_spec spec = scb::lrd_limit_scale(co.beta);
            j["c_beta"] = spec.c_beta;
            if (co.n >= 2)
                j["bandwidth_conditions"] =
                    scb::check_bandwidth_conditions(co.n, co.bandwidth, co.delta1, co.delta2, spec)
                        .summary;
        } else if (co.n >= 2) {
            j["bandwidth_conditions"] =
                scb::check_bandwidth_conditions(co.n, co.bandwidth, co.delta1, co.delta2).summary;
        }
        emit(j, co.out);
    });

    // ---- density ----
    auto* d_cmd = app.add_subcommand("density", "simultaneous band for the marginal density");
    band_cli dcl;
    add_common_band_options(d_cmd, dcl, false);
    d_cmd->add_flag("--density-bias-correct", dcl.bias_correct, "recenter by f'' b^2 psi_K");
    d_cmd->add_flag("--clip-lower", dcl.clip_lower, "clamp lower envelope at 0");
    d_cmd->callback([&] {
        double lo, hi;
        parse_interval(dcl.interval, lo, hi);
        scb::series_load s = scb::load_series(dcl.data_path, dcl.column);
        scb::band_options opt = base_options(dcl);
        opt.density_bias_correct = dcl.bias_correct;
        opt.clip_density_lower = dcl.clip_lower;
        scb::simultaneous_band band =
            scb::scb_density(s.values, dcl.bandwidth, lo, hi, dcl.alpha,
                             scb::kernel_by_name(dcl.kernel),
                             scb::band_method_by_name(dcl.method), opt);
        write_band_outputs(band, dcl);
    });

    // ---- regress ----
    auto* r_cmd = app.add_subcommand("regress", "simultaneous band for the regression function");
    band_cli rcl;
    add_common_band_options(r_cmd, rcl, true);
    r_cmd->callback([&] {
        double lo, hi;
        parse_interval(rcl.interval, lo, hi);
        scb::series_load sx = scb::load_series(rcl.data_path, rcl.x_column);
        scb::series_load sy = scb::load_series(rcl.data_path, rcl.y_column);
        scb::band_options opt = base_options(rcl);
        scb::simultaneous_band band =
            scb::scb_regression(sx.values, sy.values, rcl.bandwidth, lo, hi, rcl.alpha,
                                scb::kernel_by_name(rcl.kernel),
                                scb::band_method_by_name(rcl.method), opt);
        write_band_outputs(band, rcl);
    });

    // ---- volatility ----
    auto* v_cmd = app.add_subcommand(
        "volatility", "simultaneous band for the conditional variance (from x,y pairs)");
    band_cli vcl;
    add_common_band_options(v_cmd, vcl, true);
    v_cmd->add_option("--vol-bandwidth", vcl.h, "volatility bandwidth h (default: b)");
    double nu_eta_flag = 0.0;
    auto* nu_opt = v_cmd->add_option("--nu-eta", nu_eta_flag,
                                     "force nu_eta = E eta^4 - 1 (e.g. 2 for normal eta)");
    v_cmd->callback([&] {
        double lo, hi;
        parse_interval(vcl.interval, lo, hi);
        scb::series_load sx = scb::load_series(vcl.data_path, vcl.x_column);
        scb::series_load sy = scb::load_series(vcl.data_path, vcl.y_column);
        scb::band_options opt = base_options(vcl);
        if (nu_opt->count() > 0) opt.nu_eta = nu_eta_flag;
        scb::kernel_profile k = scb::kernel_by_name(vcl.kernel);
        scb::regression_stage st = scb::regression_center(sx.values, sy.values, vcl.bandwidth, lo,
                                                          hi, vcl.alpha, k, opt);
        double h = vcl.h > 0.0 ? vcl.h : vcl.bandwidth;
        scb::simultaneous_band band =
            scb::scb_volatility(st.resid_x, st.resid, h, lo, hi, vcl.alpha, k,
                                scb::band_method_by_name(vcl.method), opt);
        write_band_outputs(band, vcl);
    });

    // ---- calibrate ----
    auto* k_cmd = app.add_subcommand("calibrate", "simulate Pi_n and report the cutoff");
    band_cli kcl;
    std::string eta = "normal", dump;
    add_common_band_options(k_cmd, kcl, false);
    k_cmd->add_option("--eta", eta, "normal|rademacher multiplier law");
    k_cmd->add_option("--dump", dump, "write the full Pi_n sample to this CSV");
    k_cmd->callback([&] {
        double lo, hi;
        parse_interval(kcl.interval, lo, hi);
        scb::series_load s = scb::load_series(kcl.data_path, kcl.column);
        scb::kernel_profile k = scb::kernel_by_name(kcl.kernel);
        scb::evaluation_grid grid = scb::default_grid(lo, hi, kcl.bandwidth);
        scb::curve_estimate f_n = scb::kde(s.values, kcl.bandwidth, grid, k);
        scb::sampler_fn fs = scb::smoothed_bootstrap_sampler(s.values, kcl.bandwidth, k);
        scb::sampler_fn es =
            eta == "rademacher" ? scb::rademacher_sampler() : scb::normal_sampler();
        scb::pi_sample pis = scb::simulate_pi_n(fs, es, s.values.size(), kcl.bandwidth, grid, k,
                                                f_n, kcl.reps, kcl.alpha,
                                                resolve_seed(kcl.seed, kcl.seed_given),
                                                kcl.threads);
        if (!dump.empty()) scb::export_pi_sample_csv(pis, dump);
        emit(scb::pi_sample_to_json(pis), kcl.out);
    });

    // ---- simulate ----
    auto* s_cmd = app.add_subcommand("simulate", "draw a synthetic series");
    struct {
        std::string model = "iid", innovation = "normal", coeffs, mu = "zero",
                    sigma = "const:1", out;
        std::size_t n = 1000, M = 0, burn_in = 1000;
        double beta = 0.75, ell = 1.0, a = 1.0, b = 0.5, delta = 1.0 / 250.0, x0 = 0.0;
        std::uint64_t seed = 1;
        bool seed_given = false, uniform01 = false, pairs = false;
    } so;
    s_cmd->add_option("--model", so.model, "iid|linear|lrd|arch|nlar|diffusion")->required();
    s_cmd->add_option("--n", so.n)->required();
    s_cmd->add_option("--innovation", so.innovation, "normal|uniform|rademacher");
    s_cmd->add_flag("--uniform01", so.uniform01, "iid marginal U[0,1]");
    s_cmd->add_option("--coeffs", so.coeffs, "comma-separated linear coefficients");
    s_cmd->add_option("--beta", so.beta);
    s_cmd->add_option("--ell", so.ell);
    s_cmd->add_option("--M", so.M, "LRD truncation lag (0 = 10n)");
    s_cmd->add_option("--a", so.a, "ARCH a");
    s_cmd->add_option("--b", so.b, "ARCH b");
    s_cmd->add_option("--mu", so.mu, "drift spec, e.g. mean_revert:2,1");
    s_cmd->add_option("--sigma", so.sigma, "volatility spec, e.g. const:0.3");
    s_cmd->add_option("--delta", so.delta);
    s_cmd->add_option("--x0", so.x0);
    s_cmd->add_option("--burn-in", so.burn_in);
    s_cmd->add_option("--seed", so.seed)->each([&so](const std::string&) {
        so.seed_given = true;
    });
    s_cmd->add_flag("--pairs", so.pairs, "write x,y regression pairs instead of the series");
    s_cmd->add_option("--out", so.out, "output CSV")->required();
    s_cmd->callback([&] {
        scb::process_model m;
        m.kind = scb::process_model::kind_by_name(so.model);
        m.innov = scb::innovation_by_name(so.innovation);
        m.iid_uniform01 = so.uniform01;
        if (!so.coeffs.empty()) {
            std::stringstream ss(so.coeffs);
            std::string tok;
            while (std::getline(ss, tok, ',')) m.coeffs.push_back(std::stod(tok));
        }
        m.beta = so.beta;
        m.ell = so.ell;
        m.trunc_M = so.M;
        m.arch_a = so.a;
        m.arch_b = so.b;
        m.mu_spec = so.mu;
        m.sigma_spec = so.sigma;
        m.delta = so.delta;
        m.x0 = so.x0;
        m.burn_in = so.burn_in;
        std::uint64_t seed = resolve_seed(so.seed, so.seed_given);
        if (so.pairs) {
            scb::xy_series p = scb::generate_pairs(m, so.n, seed);
            std::ostringstream os;
            os << "x,y\n";
            for (std::size_t i = 0; i < p.x.size(); ++i)
                os << p.x[i] << ',' << p.y[i] << '\n';
            std::ofstream out(so.out);
            scb::require(out.good(), scb::errc::io_error, "cannot write: " + so.out);
            out << os.str();
        } else {
            scb::write_series_csv(scb::generate_series(m, so.n, seed), "value", so.out);
        }
        std::cout << json{{"written", so.out}, {"n", so.n}, {"seed", seed}}.dump() << "\n";
    });

    // ---- experiment ----
    auto* e_cmd = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    struct {
        std::string which, config, out;
    } eo;
    e_cmd->add_option("which", eo.which, "coverage|gumbel|dichotomy")->required();
    e_cmd->add_option("--config", eo.config, "experiment config JSON")->required();
    e_cmd->add_option("--out", eo.out, "report JSON path");
    e_cmd->callback([&] {
        json cfg = read_json_file(eo.config);
        scb::experiment_report rep;
        if (eo.which == "coverage")
            rep = scb::coverage_experiment(scb::coverage_config_from_json(cfg));
        else if (eo.which == "gumbel")
            rep = scb::gumbel_convergence_experiment(scb::gumbel_config_from_json(cfg));
        else if (eo.which == "dichotomy")
            rep = scb::dichotomy_experiment(scb::dichotomy_config_from_json(cfg));
        else
            scb::fail(scb::errc::domain_error, "unknown experiment: " + eo.which);
        std::cout << rep.text_table();
        if (!eo.out.empty()) emit(rep.to_json(), eo.out);
    });

    // ---- pipeline ----
    auto* p_cmd = app.add_subcommand("pipeline", "end-to-end drift + volatility band pipeline");
    struct {
        std::string config, input, column = "rate", interval, kernel = "epanechnikov",
                    method = "simulated", out_dir = ".", prefix = "scb";
        double b = 0.0, h = 0.0, alpha = 0.05, delta = 1.0 / 250.0;
        int reps = 10000, threads = 0;
        std::uint64_t seed = 42;
        bool seed_given = false;
    } po;
    p_cmd->add_option("--config", po.config, "pipeline config JSON (overrides flags)");
    p_cmd->add_option("--input", po.input);
    p_cmd->add_option("--column", po.column);
    p_cmd->add_option("--bandwidth,-b", po.b);
    p_cmd->add_option("--vol-bandwidth", po.h);
    p_cmd->add_option("--interval", po.interval);
    p_cmd->add_option("--alpha", po.alpha);
    p_cmd->add_option("--delta", po.delta);
    p_cmd->add_option("--kernel", po.kernel);
    p_cmd->add_option("--method", po.method);
    p_cmd->add_option("--reps", po.reps);
    p_cmd->add_option("--seed", po.seed)->each([&po](const std::string&) {
        po.seed_given = true;
    });
    p_cmd->add_option("--threads", po.threads);
    p_cmd->add_option("--out-dir", po.out_dir);
    p_cmd->add_option("--prefix", po.prefix);
    p_cmd->callback([&] {
        scb::pipeline_config cfg;
        if (!po.config.empty()) {
            cfg = scb::pipeline_config::from_json(read_json_file(po.config));
        } else {
            cfg.input_path = po.input;
            cfg.column = po.column;
            cfg.b = po.b;
            cfg.h = po.h;
            parse_interval(po.interval, cfg.lo, cfg.hi);
            cfg.alpha = po.alpha;
            cfg.delta = po.delta;
            cfg.kernel = po.kernel;
            cfg.method = scb::band_method_by_name(po.method);
            cfg.pi_reps = po.reps;
            cfg.seed = resolve_seed(po.seed, po.seed_given);
            cfg.threads = po.threads;
            cfg.out_dir = po.out_dir;
            cfg.prefix = po.prefix;
        }
        scb::pipeline_result res = scb::run_pipeline(cfg);
        json j{{"cutoff", res.cutoff},
               {"interval_coverage", res.interval_coverage},
               {"config_hash", res.hash},
               {"report", res.report_json}};
        if (cfg.gof_affine) j["gof_affine_rejected"] = !res.gof_mu.contained;
        std::cout << j.dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is an input error
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const scb::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
