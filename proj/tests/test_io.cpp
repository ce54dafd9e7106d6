#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "scb/error.hpp"
#include "scb/io.hpp"
#include "scb/processes.hpp"

using namespace scb;
namespace fs = std::filesystem;

namespace {

struct temp_dir {
    fs::path path;
    temp_dir() {
        path = fs::temp_directory_path() / ("scb_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    return j;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("load_series") {
    temp_dir tmp;
    SUBCASE("plain numeric column") {
        write_file(tmp.file("a.csv"), "date,rate\n1990-01-02,1.0\n1990-01-03,2.0\n1990-01-04,3.0\n");
        series_load s = load_series(tmp.file("a.csv"), "rate");
        CHECK(s.values == std::vector<double>{1.0, 2.0, 3.0});
        CHECK(s.dropped == 0);
    }
    SUBCASE("blank and non-numeric cells dropped, order preserved") {
        write_file(tmp.file("b.csv"), "rate\n4.5\n\n2.5\nN/A\n0.5\n");
        series_load s = load_series(tmp.file("b.csv"), "rate");
        CHECK(s.values == std::vector<double>{4.5, 2.5, 0.5});
        CHECK(s.dropped == 1);  // blank line skipped entirely, N/A dropped

        // one blank cell among 4 rows
        write_file(tmp.file("b2.csv"), "rate,vol\n1.0,0\n,0\n2.0,0\n3.0,0\n");
        series_load s2 = load_series(tmp.file("b2.csv"), "rate");
        CHECK(s2.values == std::vector<double>{1.0, 2.0, 3.0});
        CHECK(s2.dropped == 1);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)load_series(tmp.file("missing.csv"), "rate"), error);
        write_file(tmp.file("c.csv"), "a,b\n1,2\n");
        CHECK_THROWS_AS((void)load_series(tmp.file("c.csv"), "rate"), error);
        write_file(tmp.file("d.csv"), "rate\nx\ny\n");
        CHECK_THROWS_AS((void)load_series(tmp.file("d.csv"), "rate"), error);
        try {
            (void)load_series(tmp.file("d.csv"), "rate");
        } catch (const error& e) {
            CHECK(e.code() == errc::all_rows_invalid);
        }
    }
    SUBCASE("custom delimiter") {
        write_file(tmp.file("e.csv"), "rate;x\n1.5;9\n2.5;9\n");
        series_load s = load_series(tmp.file("e.csv"), "rate", ';');
        CHECK(s.values == std::vector<double>{1.5, 2.5});
    }
}

TEST_CASE("make_regression_pairs") {
    std::vector<double> s = {1.0, 3.0, 2.0};
    diffusion_dataset d = make_regression_pairs(s, 1.0 / 250.0);
    CHECK(d.x == std::vector<double>{1.0, 3.0});
    CHECK(d.y == std::vector<double>{2.0, -1.0});
    CHECK(d.n == 2);

    std::vector<double> flat(10, 3.25);
    diffusion_dataset c = make_regression_pairs(flat, 1.0 / 250.0);
    for (double v : c.y) CHECK(v == 0.0);

    CHECK_THROWS_AS((void)make_regression_pairs(std::vector<double>{1.0}, 1.0 / 250.0), error);
}

TEST_CASE("band export round trip") {
    temp_dir tmp;
    kernel_profile epan = kernel_by_name("epanechnikov");
    rng_stream rng(77, 0);
    std::vector<double> data(2000);
    for (double& v : data) v = rng.uniform();
    simultaneous_band band =
        scb_density(data, 0.07, 0.2, 0.8, 0.05, epan, band_method::gumbel);

    std::string csv = tmp.file("band.csv");
    export_band_csv(band, csv);
    std::string text = read_text(csv);
    CHECK(text.rfind("x,center,lower,upper\n", 0) == 0);

    csv_table t = read_csv(csv);
    REQUIRE(t.header == std::vector<std::string>{"x", "center", "lower", "upper"});
    REQUIRE(t.columns[0].size() == static_cast<std::size_t>(band.grid.m));
    for (int j = 0; j < band.grid.m; ++j) {
        CHECK(std::abs(t.columns[0][j] - band.grid.points[j]) < 1e-10);
        CHECK(std::abs(t.columns[1][j] - band.center[j]) < 1e-10);
        CHECK(std::abs(t.columns[2][j] - band.lower[j]) < 1e-10);
        CHECK(std::abs(t.columns[3][j] - band.upper[j]) < 1e-10);
    }

    nlohmann::json j = band_to_json(band);
    CHECK(j.contains("level"));
    CHECK(j.contains("method"));
    CHECK(j.contains("bandwidth"));
    CHECK(j.contains("kernel"));
    CHECK(j.at("kernel") == "epanechnikov");
    CHECK(j.at("calibration").contains("d_n"));
}

TEST_CASE("config hash ignores volatile fields") {
    nlohmann::json a{{"b", 0.37}, {"alpha", 0.05}, {"seed", 42},
                     {"input_path", "/data/x.csv"}, {"generated_at", "2026-01-01T00:00:00Z"}};
    nlohmann::json b{{"b", 0.37}, {"alpha", 0.05}, {"seed", 42},
                     {"input_path", "/other/place.csv"}, {"generated_at", "2030-12-31T23:59:59Z"}};
    CHECK(config_hash(a) == config_hash(b));
    nlohmann::json c = a;
    c["seed"] = 43;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("pipeline smoke on a synthetic diffusion") {
    temp_dir tmp;
    // mu(x) = 2(1-x), sigma = 0.3, daily steps
    diffusion_path path = gen_diffusion_discrete([](double r) { return 2.0 * (1.0 - r); },
                                                 [](double) { return 0.3; }, 1.0 / 250.0, 5000,
                                                 1.0, 314);
    write_series_csv(path.rates, "rate", tmp.file("rates.csv"));

    pipeline_config cfg;
    cfg.input_path = tmp.file("rates.csv");
    cfg.column = "rate";
    cfg.b = 0.07;
    cfg.lo = 0.75;
    cfg.hi = 1.25;
    cfg.alpha = 0.05;
    cfg.pi_reps = 300;
    cfg.seed = 7;
    cfg.out_dir = tmp.path.string();
    cfg.prefix = "run1";
    pipeline_result r1 = run_pipeline(cfg);

    // schema of the emitted report
    nlohmann::json rep = read_json(r1.report_json);
    CHECK(rep.contains("config_hash"));
    CHECK(rep.contains("interval_coverage"));
    CHECK(rep.contains("cutoff"));
    CHECK(rep.contains("gof_affine"));
    CHECK(rep.at("config").contains("b"));
    CHECK(rep.at("interval_coverage").get<double>() > 0.5);

    nlohmann::json mu_band = read_json(r1.regression_band_json);
    CHECK(mu_band.contains("center"));
    CHECK(mu_band.at("method") == "simulated");
    nlohmann::json cal = read_json(r1.calibration_json);
    CHECK(cal.at("regression_cutoff").get<double>() > 0.0);

    // determinism: same config + seed reproduces everything but the timestamp
    cfg.prefix = "run2";
    pipeline_result r2 = run_pipeline(cfg);
    CHECK(read_text(r1.regression_band_csv) == read_text(r2.regression_band_csv));
    CHECK(read_text(r1.volatility_band_csv) == read_text(r2.volatility_band_csv));
    for (auto [p1, p2] : {std::pair{r1.regression_band_json, r2.regression_band_json},
                          std::pair{r1.volatility_band_json, r2.volatility_band_json},
                          std::pair{r1.report_json, r2.report_json}}) {
        nlohmann::json a = read_json(p1), b = read_json(p2);
        a.erase("generated_at");
        b.erase("generated_at");
        CHECK(a.dump() == b.dump());
    }
    CHECK(r1.hash == r2.hash);

    // a different seed moves the simulated cutoff
    cfg.prefix = "run3";
    cfg.seed = 8;
    pipeline_result r3 = run_pipeline(cfg);
    CHECK(r3.cutoff != r1.cutoff);
}
