#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scb/asymptotics.hpp"
#include "scb/calibration.hpp"
#include "scb/estimators.hpp"

namespace scb {

enum class band_method { gumbel, simulated };
enum class band_target { density, regression, variance };

band_method band_method_by_name(std::string_view name);
const char* band_method_name(band_method m);
const char* band_target_name(band_target t);

struct band_calibration {
    double level = 0.05;
    band_method method = band_method::gumbel;
    double bbar = 0.0;
    double d_n = 0.0;      // informational under the simulated method
    double z_alpha = 0.0;  // informational under the simulated method
    // gumbel: the multiplier l1; simulated: the Pi_n cutoff q.
    double halfwidth_scale = 0.0;
    int pi_reps = 0;
    std::uint64_t seed = 0;
};

struct simultaneous_band {
    evaluation_grid grid;
    std::vector<double> center;  // bias-corrected estimate
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.05;
    band_target target = band_target::regression;
    band_calibration calibration;
    std::string kernel_name;
    double bandwidth = 0.0;  // b (density/regression) or h (variance)
    std::size_t n = 0;
    double nu_eta = 0.0;  // variance bands only
    int negative_center_floored = 0;
    bool small_nb_warning = false;  // n*b < 50
};

struct band_options {
    int grid_m = 0;  // 0 = default rule
    int pi_reps = 2000;
    std::uint64_t seed = 1;
    int threads = 0;
    bool density_bias_correct = false;  // optional f'' b^2 psi_K recentering
    bool clip_density_lower = false;    // clamp density band lower envelope at 0
    double deriv_bandwidth_factor = 2.0;
    std::optional<double> nu_eta;  // force (e.g. 2 for normal eta)
    // test-only: replaces the estimated sigma curve in regression halfwidths
    std::optional<double> sigma_override;
    bool l1_log_arg_b = false;  // use log b^{-1} instead of log bbar^{-1} in l1/d_n
};

// Density SCB: center f_n; halfwidth L sqrt(lambda_K f_n /(n b)) under the
// gumbel method, cutoff * sqrt(f_n) under the simulated method.
simultaneous_band scb_density(std::span<const double> data, double b, double lo, double hi,
                              double alpha, const kernel_profile& k, band_method method,
                              const band_options& opt = {});

// Regression SCB: center mu_n - b^2 psi_K rho_mu; halfwidth
// L sigma_hat sqrt(lambda_K / (n b f_n)) (gumbel) or cutoff sigma_hat / sqrt(f_n)
// (simulated).
simultaneous_band scb_regression(std::span<const double> x, std::span<const double> y, double b,
                                 double lo, double hi, double alpha, const kernel_profile& k,
                                 band_method method, const band_options& opt = {});

// Bias-corrected regression center and its residuals (the plug-in stage
// shared by scb_regression, scb_volatility callers and the pipeline).
struct regression_stage {
    curve_estimate f_n;     // kde of x, bandwidth b
    curve_estimate mu_n;    // raw Nadaraya-Watson
    curve_estimate center;  // mu_n - b^2 psi_K rho_mu
    std::vector<double> resid;    // y - center(x) for x inside the grid
    std::vector<double> resid_x;  // matching regressors
};
regression_stage regression_center(std::span<const double> x, std::span<const double> y, double b,
                                   double lo, double hi, double alpha, const kernel_profile& k,
                                   const band_options& opt = {});

// Volatility SCB from residuals of the regression stage: center
// sigma2_n - h^2 psi_K rho_sigma; halfwidth L sigma2_n sqrt(lambda_K nu_eta/(n h f_n1))
// (gumbel) or cutoff sqrt(nu_eta) sigma2_n / sqrt(f_n1) (simulated).
simultaneous_band scb_volatility(std::span<const double> x, std::span<const double> resid,
                                 double h, double lo, double hi, double alpha,
                                 const kernel_profile& k, band_method method,
                                 const band_options& opt = {});

struct gof_result {
    std::string hypothesis;
    bool contained = false;
    double max_violation = 0.0;
    double violation_argmax = 0.0;
    double level = 0.05;
};

// Band containment of a candidate curve given on the band grid.
gof_result gof_test(const simultaneous_band& band, const std::vector<double>& candidate,
                    const std::string& hypothesis);
gof_result gof_test(const simultaneous_band& band, const std::function<double(double)>& candidate,
                    const std::string& hypothesis);

// Least-squares affine fit a0 + a1 x on pairs with x inside [lo, hi]
// (canonical representative for the linear-drift hypothesis).
struct affine_fit {
    double a0 = 0.0;
    double a1 = 0.0;
    std::size_t n_used = 0;
};
affine_fit fit_affine(std::span<const double> x, std::span<const double> y, double lo, double hi);

}  // namespace scb
