#include "scb/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "scb/error.hpp"
#include "scb/parallel.hpp"
#include "scb/quadrature.hpp"

namespace scb {

namespace {

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t idx, std::uint64_t salt) {
    std::uint64_t s = root ^ (idx * 0x9e3779b97f4a7c15ULL) ^ (salt * 0xd1b54a32d192ed03ULL);
    return splitmix64(s);
}

json quantile_table(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
        if (idx == 0) idx = 1;
        return v[idx - 1];
    };
    return json{{"q05", q(0.05)}, {"q25", q(0.25)}, {"q50", q(0.50)},
                {"q75", q(0.75)}, {"q95", q(0.95)}};
}

// E f_n(x) = int K(v) f(x - b v) dv on the grid, closed-form f.
std::vector<double> exact_mean_curve(const evaluation_grid& grid, double b,
                                     const kernel_profile& k,
                                     const std::function<double(double)>& pdf) {
    std::vector<double> out(grid.m);
    for (int j = 0; j < grid.m; ++j) {
        double x = grid.points[j];
        out[j] = integrate([&](double v) { return k.evaluate(v) * pdf(x - b * v); }, -k.A, k.A,
                           1e-11);
    }
    return out;
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object())
            flatten(*it, key, os);
        else
            os << "  " << key << ": " << it->dump() << "\n";
    }
}

}  // namespace

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    require(!sample.empty(), errc::empty_data, "KS distance of an empty sample");
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

json experiment_report::to_json() const {
    return json{{"config", config}, {"summary", summary}, {"wall_seconds", wall_seconds}};
}

std::string experiment_report::text_table() const {
    std::ostringstream os;
    os << "experiment: " << config.value("experiment", "?") << "\n";
    flatten(summary, "", os);
    os << "  wall_seconds: " << wall_seconds << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// coverage
// ---------------------------------------------------------------------------

namespace {

json model_to_json(const process_model& m) {
    return json{{"kind", process_model::kind_name(m.kind)},
                {"innovation", innovation_name(m.innov)},
                {"iid_uniform01", m.iid_uniform01},
                {"coeffs", m.coeffs},
                {"beta", m.beta},
                {"ell", m.ell},
                {"trunc_M", m.trunc_M},
                {"arch_a", m.arch_a},
                {"arch_b", m.arch_b},
                {"mu", m.mu_spec},
                {"sigma", m.sigma_spec},
                {"delta", m.delta},
                {"x0", m.x0},
                {"burn_in", m.burn_in}};
}

std::function<double(double)> resolve_truth(const coverage_config& cfg) {
    if (!cfg.truth_spec.empty()) return named_function(cfg.truth_spec);
    switch (cfg.target) {
        case band_target::density: {
            marginal_density m = model_marginal(cfg.model, cfg.n);
            require(m.available, errc::domain_error,
                    "model has no closed-form marginal; pass an explicit truth");
            return m.pdf;
        }
        case band_target::regression:
            return named_function(cfg.model.mu_spec);
        case band_target::variance: {
            auto s = named_function(cfg.model.sigma_spec);
            return [s](double x) {
                double v = s(x);
                return v * v;
            };
        }
    }
    fail(errc::internal, "unhandled band target");
}

}  // namespace

experiment_report coverage_experiment(const coverage_config& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    require(cfg.reps >= 50, errc::invalid_reps, "coverage needs at least 50 replicates");
    kernel_profile kern = kernel_by_name(cfg.kernel);
    auto truth = resolve_truth(cfg);

    enum rep_state : int { invalid = -1, missed = 0, covered = 1 };
    std::vector<int> outcome(cfg.reps, invalid);
    std::vector<int> outcome_other(cfg.reps, invalid);  // compare-methods runs

    const bool compare = cfg.compare_methods;

    parallel_for(0, cfg.reps, [&](std::int64_t rep) {
        band_options opt = cfg.extra;
        opt.pi_reps = cfg.pi_reps;
        opt.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep), 0xb4);
        opt.threads = 1;
        std::uint64_t data_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep), 0xda);
        auto run_one = [&](band_method method) -> int {
            simultaneous_band band;
            switch (cfg.target) {
                case band_target::density: {
                    std::vector<double> data = generate_series(cfg.model, cfg.n, data_seed);
                    band = scb_density(data, cfg.b, cfg.lo, cfg.hi, cfg.alpha, kern, method, opt);
                    break;
                }
                case band_target::regression: {
                    xy_series p = generate_pairs(cfg.model, cfg.n, data_seed);
                    band = scb_regression(p.x, p.y, cfg.b, cfg.lo, cfg.hi, cfg.alpha, kern, method,
                                          opt);
                    break;
                }
                case band_target::variance: {
                    xy_series p = generate_pairs(cfg.model, cfg.n, data_seed);
                    regression_stage st =
                        regression_center(p.x, p.y, cfg.b, cfg.lo, cfg.hi, cfg.alpha, kern, opt);
                    band = scb_volatility(st.resid_x, st.resid, cfg.b, cfg.lo, cfg.hi, cfg.alpha,
                                          kern, method, opt);
                    break;
                }
            }
            return gof_test(band, truth, "truth").contained ? covered : missed;
        };
        try {
            outcome[rep] = run_one(cfg.method);
            if (compare)
                outcome_other[rep] = run_one(cfg.method == band_method::gumbel
                                                 ? band_method::simulated
                                                 : band_method::gumbel);
        } catch (const error&) {
            outcome[rep] = invalid;
        }
    }, cfg.threads);

    auto tally = [&](const std::vector<int>& o) {
        int valid = 0, hits = 0;
        for (int v : o) {
            if (v < 0) continue;
            ++valid;
            hits += v;
        }
        return std::pair<int, int>{valid, hits};
    };
    auto [valid, hits] = tally(outcome);
    require(valid * 100 >= cfg.reps * 95, errc::domain_error,
            "more than 5% of replicates failed; configuration is unusable");
    double coverage = static_cast<double>(hits) / static_cast<double>(valid);
    double se = std::sqrt(coverage * (1.0 - coverage) / static_cast<double>(valid));

    experiment_report rep;
    rep.config = json{{"experiment", "coverage"},
                      {"model", model_to_json(cfg.model)},
                      {"target", band_target_name(cfg.target)},
                      {"n", cfg.n},
                      {"b", cfg.b},
                      {"interval", {cfg.lo, cfg.hi}},
                      {"alpha", cfg.alpha},
                      {"kernel", cfg.kernel},
                      {"method", band_method_name(cfg.method)},
                      {"pi_reps", cfg.pi_reps},
                      {"reps", cfg.reps},
                      {"seed", cfg.seed},
                      {"truth", cfg.truth_spec},
                      {"compare_methods", cfg.compare_methods}};
    rep.summary = json{{"coverage", coverage},
                       {"binomial_se", se},
                       {"valid_replicates", valid},
                       {"invalid_replicates", cfg.reps - valid}};
    if (compare) {
        auto [v2, h2] = tally(outcome_other);
        if (v2 > 0) {
            double cov2 = static_cast<double>(h2) / static_cast<double>(v2);
            rep.summary["coverage_other_method"] = cov2;
            rep.summary["coverage_method_gap"] = std::abs(coverage - cov2);
        }
    }
    rep.wall_seconds = elapsed_seconds(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// gumbel convergence
// ---------------------------------------------------------------------------

experiment_report gumbel_convergence_experiment(const gumbel_config& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    require(cfg.reps >= 50, errc::invalid_reps, "need at least 50 replicates");
    kernel_profile kern = kernel_by_name(cfg.kernel);
    double b = cfg.b > 0.0 ? cfg.b : std::pow(static_cast<double>(cfg.n), -0.2);
    double bbar = b / (cfg.hi - cfg.lo);
    double dn = normalizing_dn(bbar, kern);  // BandwidthTooLarge propagates
    double norm = std::sqrt(2.0 * std::log(1.0 / bbar));

    marginal_density marg = model_marginal(cfg.model, cfg.n);
    require(marg.available, errc::domain_error,
            "gumbel experiment needs a model with a closed-form marginal density");
    evaluation_grid grid = default_grid(cfg.lo, cfg.hi, b);

    std::vector<double> center(grid.m);
    if (cfg.center == centering::exact_mean) {
        center = exact_mean_curve(grid, b, kern, marg.pdf);
    } else {
        for (int j = 0; j < grid.m; ++j) center[j] = marg.pdf(grid.points[j]);
    }
    std::vector<double> weight(grid.m);
    double nb = static_cast<double>(cfg.n) * b;
    for (int j = 0; j < grid.m; ++j) {
        double f = marg.pdf(grid.points[j]);
        require(f > 0.0, errc::density_too_small, "true density vanishes on the interval");
        weight[j] = std::sqrt(nb / (kern.lambda_K * f));
    }

    std::vector<double> delta(cfg.reps);
    parallel_for(0, cfg.reps, [&](std::int64_t rep) {
        std::vector<double> data =
            generate_series(cfg.model, cfg.n, derive_seed(cfg.seed, rep, 0x91));
        curve_estimate f_n = kde(data, b, grid, kern);
        double best = 0.0;
        for (int j = 0; j < grid.m; ++j)
            best = std::max(best, weight[j] * std::abs(f_n.values[j] - center[j]));
        delta[rep] = best;
    }, cfg.threads);

    std::vector<double> z(cfg.reps);
    for (int i = 0; i < cfg.reps; ++i) z[i] = norm * (delta[i] - dn);
    double ks = ks_distance(z, gumbel_cdf);

    experiment_report rep;
    rep.config = json{{"experiment", "gumbel"},
                      {"model", model_to_json(cfg.model)},
                      {"n", cfg.n},
                      {"b", b},
                      {"interval", {cfg.lo, cfg.hi}},
                      {"kernel", cfg.kernel},
                      {"centering", cfg.center == centering::exact_mean ? "exact_mean" : "true_f"},
                      {"reps", cfg.reps},
                      {"seed", cfg.seed}};
    rep.summary = json{{"ks_distance", ks},
                       {"d_n", dn},
                       {"bbar", bbar},
                       {"normalized_quantiles", quantile_table(z)}};
    rep.wall_seconds = elapsed_seconds(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// dichotomy
// ---------------------------------------------------------------------------

process_model process_model_from_json(const json& j) {
    process_model m;
    m.kind = process_model::kind_by_name(j.value("kind", "iid"));
    m.innov = innovation_by_name(j.value("innovation", "normal"));
    m.iid_uniform01 = j.value("uniform01", false);
    m.coeffs = j.value("coeffs", std::vector<double>{});
    m.beta = j.value("beta", m.beta);
    m.ell = j.value("ell", m.ell);
    m.trunc_M = j.value("M", std::size_t{0});
    m.arch_a = j.value("a", m.arch_a);
    m.arch_b = j.value("b", m.arch_b);
    m.mu_spec = j.value("mu", m.mu_spec);
    m.sigma_spec = j.value("sigma", m.sigma_spec);
    m.delta = j.value("delta", m.delta);
    m.x0 = j.value("x0", m.x0);
    m.burn_in = j.value("burn_in", m.burn_in);
    return m;
}

namespace {

void read_interval(const json& j, double& lo, double& hi) {
    if (!j.contains("interval")) return;
    auto iv = j.at("interval");
    require(iv.is_array() && iv.size() == 2, errc::domain_error,
            "interval must be [lo, hi]");
    lo = iv[0].get<double>();
    hi = iv[1].get<double>();
}

}  // namespace

coverage_config coverage_config_from_json(const json& j) {
    coverage_config c;
    c.model = process_model_from_json(j.value("model", json::object()));
    std::string target = j.value("target", "density");
    if (target == "density")
        c.target = band_target::density;
    else if (target == "regression")
        c.target = band_target::regression;
    else if (target == "variance" || target == "volatility")
        c.target = band_target::variance;
    else
        fail(errc::domain_error, "unknown coverage target: " + target);
    c.n = j.value("n", c.n);
    c.b = j.value("b", c.b);
    read_interval(j, c.lo, c.hi);
    c.alpha = j.value("alpha", c.alpha);
    c.kernel = j.value("kernel", c.kernel);
    c.method = band_method_by_name(j.value("method", "simulated"));
    c.pi_reps = j.value("pi_reps", c.pi_reps);
    c.reps = j.value("reps", c.reps);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", 0);
    c.truth_spec = j.value("truth", "");
    c.compare_methods = j.value("compare_methods", false);
    return c;
}

gumbel_config gumbel_config_from_json(const json& j) {
    gumbel_config c;
    c.model = process_model_from_json(j.value("model", json::object()));
    c.n = j.value("n", c.n);
    c.b = j.value("b", 0.0);
    read_interval(j, c.lo, c.hi);
    c.kernel = j.value("kernel", c.kernel);
    std::string cen = j.value("centering", "exact_mean");
    require(cen == "exact_mean" || cen == "true_f", errc::domain_error,
            "centering must be exact_mean or true_f");
    c.center = cen == "exact_mean" ? centering::exact_mean : centering::true_f;
    c.reps = j.value("reps", c.reps);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", 0);
    return c;
}

dichotomy_config dichotomy_config_from_json(const json& j) {
    dichotomy_config c;
    c.beta = j.value("beta", c.beta);
    c.ell = j.value("ell", c.ell);
    c.n = j.value("n", c.n);
    read_interval(j, c.lo, c.hi);
    c.kernel = j.value("kernel", c.kernel);
    c.reps = j.value("reps", c.reps);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", 0);
    if (j.contains("regimes")) {
        for (const auto& r : j.at("regimes"))
            c.regimes.push_back({r.value("name", "regime"), r.value("exponent", 0.2)});
    }
    return c;
}

experiment_report dichotomy_experiment(const dichotomy_config& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    require(cfg.reps >= 50, errc::invalid_reps, "need at least 50 replicates");
    require(!cfg.regimes.empty(), errc::domain_error, "need at least one bandwidth regime");
    kernel_profile kern = kernel_by_name(cfg.kernel);
    lrd_spec spec = lrd_limit_scale(cfg.beta, cfg.ell);

    process_model model;
    model.kind = process_model::kind_t::lrd_linear;
    model.beta = cfg.beta;
    model.ell = cfg.ell;
    model.innov = innovation::normal;

    json regimes_out = json::array();
    for (std::size_t ridx = 0; ridx < cfg.regimes.size(); ++ridx) {
        const dichotomy_regime& reg = cfg.regimes[ridx];
        double b = std::pow(static_cast<double>(cfg.n), -reg.bandwidth_exponent);
        double bbar = b / (cfg.hi - cfg.lo);
        double dn = normalizing_dn(bbar, kern);
        double norm = std::sqrt(2.0 * std::log(1.0 / bbar));

        marginal_density marg = model_marginal(model, cfg.n);
        evaluation_grid grid = default_grid(cfg.lo, cfg.hi, b);
        std::vector<double> center = exact_mean_curve(grid, b, kern, marg.pdf);
        std::vector<double> weight(grid.m);
        double nb = static_cast<double>(cfg.n) * b;
        for (int j = 0; j < grid.m; ++j)
            weight[j] = std::sqrt(nb / (kern.lambda_K * marg.pdf(grid.points[j])));

        std::vector<double> delta(cfg.reps);
        parallel_for(0, cfg.reps, [&](std::int64_t rp) {
            std::vector<double> data = generate_series(
                model, cfg.n, derive_seed(cfg.seed, rp + ridx * 1000003, 0xd1));
            curve_estimate f_n = kde(data, b, grid, kern);
            double best = 0.0;
            for (int j = 0; j < grid.m; ++j)
                best = std::max(best, weight[j] * std::abs(f_n.values[j] - center[j]));
            delta[rp] = best;
        }, cfg.threads);

        std::vector<double> zg(cfg.reps), zh(cfg.reps);
        double lrd_norm = std::sqrt(b) * std::pow(static_cast<double>(cfg.n), 1.0 - cfg.beta) *
                          cfg.ell;
        for (int i = 0; i < cfg.reps; ++i) {
            zg[i] = norm * (delta[i] - dn);
            zh[i] = delta[i] / lrd_norm;
        }
        double ks_g = ks_distance(zg, gumbel_cdf);
        double hn_scale =
            lrd_half_normal_scale(spec, kern, marg.pdf, marg.dpdf, cfg.lo, cfg.hi);
        double ks_h = ks_distance(zh, [hn_scale](double t) {
            return t <= 0.0 ? 0.0 : std::erf(t / (hn_scale * std::sqrt(2.0)));
        });

        bandwidth_diagnostics diag =
            check_bandwidth_conditions(cfg.n, b, reg.bandwidth_exponent, reg.bandwidth_exponent,
                                       spec);
        regimes_out.push_back(json{{"name", reg.name},
                                   {"bandwidth_exponent", reg.bandwidth_exponent},
                                   {"b", b},
                                   {"ks_gumbel", ks_g},
                                   {"ks_half_normal", ks_h},
                                   {"closer_law", ks_g <= ks_h ? "gumbel" : "half_normal"},
                                   {"predicted_regime", lrd_regime_name(diag.regime)},
                                   {"half_normal_scale", hn_scale}});
    }

    experiment_report rep;
    rep.config = json{{"experiment", "dichotomy"}, {"beta", cfg.beta},     {"ell", cfg.ell},
                      {"n", cfg.n},               {"interval", {cfg.lo, cfg.hi}},
                      {"kernel", cfg.kernel},     {"reps", cfg.reps},     {"seed", cfg.seed}};
    rep.summary = json{{"c_beta", spec.c_beta}, {"regimes", regimes_out}};
    rep.wall_seconds = elapsed_seconds(t0);
    return rep;
}

}  // namespace scb
