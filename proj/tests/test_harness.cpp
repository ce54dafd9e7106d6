#include <doctest.h>

#include <cmath>
#include <vector>

#include "scb/error.hpp"
#include "scb/harness.hpp"

using namespace scb;

TEST_CASE("ks distance") {
    // sample sitting exactly at uniform quantile midpoints: D = 1/(2n)
    std::vector<double> mid(100);
    for (int i = 0; i < 100; ++i) mid[i] = (i + 0.5) / 100.0;
    double d = ks_distance(mid, [](double x) { return x; });
    CHECK(d == doctest::Approx(0.005).epsilon(1e-12));

    // entirely mismatched law
    double far = ks_distance(mid, [](double x) { return x < 5.0 ? 0.0 : 1.0; });
    CHECK(far == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)ks_distance({}, [](double) { return 0.5; }), error);
}

namespace {

coverage_config small_uniform_density() {
    coverage_config cfg;
    cfg.model.kind = process_model::kind_t::iid;
    cfg.model.iid_uniform01 = true;
    cfg.target = band_target::density;
    cfg.n = 1200;
    cfg.b = 0.1;
    cfg.lo = 0.25;
    cfg.hi = 0.75;
    cfg.alpha = 0.05;
    cfg.method = band_method::simulated;
    cfg.pi_reps = 150;
    cfg.reps = 60;
    cfg.seed = 404;
    return cfg;
}

}  // namespace

TEST_CASE("coverage experiment: trivial always-cover configuration") {
    // an effectively infinite band width makes every replicate cover; this
    // pins the counting plumbing
    coverage_config cfg;
    cfg.model.kind = process_model::kind_t::nonlinear_ar;
    cfg.model.mu_spec = "const:0";
    cfg.model.sigma_spec = "const:1";
    cfg.target = band_target::regression;
    cfg.n = 500;
    cfg.b = 0.35;
    cfg.lo = -0.8;
    cfg.hi = 0.8;
    cfg.method = band_method::simulated;
    cfg.pi_reps = 120;
    cfg.reps = 50;
    cfg.seed = 11;
    cfg.extra.sigma_override = 1e8;
    experiment_report rep = coverage_experiment(cfg);
    CHECK(rep.summary.at("coverage").get<double>() == 1.0);
    CHECK(rep.summary.at("invalid_replicates").get<int>() == 0);
}

TEST_CASE("coverage experiment: uniform density smoke") {
    coverage_config cfg = small_uniform_density();
    experiment_report rep = coverage_experiment(cfg);
    double cov = rep.summary.at("coverage").get<double>();
    CHECK(cov >= 0.85);  // loose smoke bound; the acceptance suite pins the real one
    CHECK(rep.summary.at("valid_replicates").get<int>() == cfg.reps);
    CHECK(rep.config.at("experiment") == "coverage");
}

TEST_CASE("coverage experiment report is reproducible") {
    coverage_config cfg = small_uniform_density();
    cfg.reps = 50;
    cfg.pi_reps = 120;
    experiment_report a = coverage_experiment(cfg);
    experiment_report b = coverage_experiment(cfg);
    CHECK(a.summary.dump() == b.summary.dump());
    CHECK(a.config.dump() == b.config.dump());
}

TEST_CASE("gumbel experiment propagates BandwidthTooLarge") {
    gumbel_config cfg;
    cfg.model.kind = process_model::kind_t::iid;
    cfg.n = 800;
    cfg.b = 1.5;  // bbar = 0.75 on [-1, 1]
    cfg.reps = 50;
    CHECK_THROWS_AS((void)gumbel_convergence_experiment(cfg), error);
    try {
        (void)gumbel_convergence_experiment(cfg);
    } catch (const error& e) {
        CHECK(e.code() == errc::bandwidth_too_large);
    }
}

TEST_CASE("gumbel experiment runs and reports a ks distance") {
    gumbel_config cfg;
    cfg.model.kind = process_model::kind_t::iid;
    cfg.n = 1500;
    cfg.b = 0.0;  // n^{-1/5}
    cfg.lo = -1.0;
    cfg.hi = 1.0;
    cfg.center = centering::exact_mean;
    cfg.reps = 120;
    cfg.seed = 5;
    experiment_report rep = gumbel_convergence_experiment(cfg);
    double ks = rep.summary.at("ks_distance").get<double>();
    CHECK(ks > 0.0);
    CHECK(ks < 0.5);
    CHECK(rep.summary.at("d_n").get<double>() > 0.0);
}

TEST_CASE("dichotomy experiment is deterministic") {
    dichotomy_config cfg;
    cfg.beta = 0.6;
    cfg.n = 800;
    cfg.lo = -1.0;
    cfg.hi = 1.0;
    cfg.reps = 50;
    cfg.seed = 9;
    cfg.regimes = {{"wide", 0.2}};
    experiment_report a = dichotomy_experiment(cfg);
    experiment_report b = dichotomy_experiment(cfg);
    CHECK(a.summary.dump() == b.summary.dump());
    CHECK(a.summary.at("regimes")[0].contains("ks_gumbel"));
    CHECK(a.summary.at("regimes")[0].contains("ks_half_normal"));
}

TEST_CASE("experiment config json round trip") {
    json j{{"model", {{"kind", "nonlinear_ar"}, {"mu", "square_clip:1"}, {"sigma", "const:0.5"}}},
           {"target", "regression"},
           {"n", 2000},
           {"b", 0.25},
           {"interval", {-0.5, 0.9}},
           {"alpha", 0.05},
           {"method", "simulated"},
           {"pi_reps", 400},
           {"reps", 300},
           {"seed", 12345}};
    coverage_config cfg = coverage_config_from_json(j);
    CHECK(cfg.model.kind == process_model::kind_t::nonlinear_ar);
    CHECK(cfg.model.mu_spec == "square_clip:1");
    CHECK(cfg.n == 2000);
    CHECK(cfg.lo == -0.5);
    CHECK(cfg.hi == 0.9);
    CHECK(cfg.reps == 300);

    json g{{"model", {{"kind", "iid"}}}, {"n", 5000}, {"interval", {-1.0, 1.0}},
           {"centering", "exact_mean"}, {"reps", 1000}};
    gumbel_config gc = gumbel_config_from_json(g);
    CHECK(gc.center == centering::exact_mean);
    CHECK(gc.n == 5000);

    json d{{"beta", 0.95}, {"n", 10000}, {"interval", {-1.0, 1.0}}, {"reps", 500},
           {"regimes", {{{"name", "narrow"}, {"exponent", 0.4}}}}};
    dichotomy_config dc = dichotomy_config_from_json(d);
    CHECK(dc.beta == 0.95);
    REQUIRE(dc.regimes.size() == 1);
    CHECK(dc.regimes[0].bandwidth_exponent == 0.4);
}
