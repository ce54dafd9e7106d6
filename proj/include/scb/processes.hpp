#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scb {

enum class innovation { normal, uniform_centered, rademacher };

innovation innovation_by_name(std::string_view name);
const char* innovation_name(innovation i);

// ---------------------------------------------------------------------------
// Generators. All are deterministic under a fixed seed.
// ---------------------------------------------------------------------------

// X_i = sum_j coeffs[j] eps_{i-j}, innovations standardized to mean 0 var 1.
std::vector<double> gen_linear(std::span<const double> coeffs, std::size_t n, innovation innov,
                               std::uint64_t seed);

// Truncated long-range dependent linear process: a_0 = 1, a_j = ell j^{-beta}
// for 1 <= j <= M. M = 0 selects the default 10n. FFT-backed convolution.
std::vector<double> gen_lrd(double beta, double ell, std::size_t n, std::size_t M,
                            innovation innov, std::uint64_t seed);

// Coefficient vector of the truncated LRD process (a_0 ... a_M).
std::vector<double> lrd_coefficients(double beta, double ell, std::size_t M);

// ARCH recursion X_i = eps_i (a^2 + b^2 X_{i-1}^2)^{1/2} from X_0 = 0,
// burn-in discarded. Requires a > 0, 0 < b < 1.
std::vector<double> gen_arch(double a, double b, std::size_t n, std::uint64_t seed,
                             std::size_t burn_in = 1000);

struct xy_series {
    std::vector<double> x;
    std::vector<double> y;
};

// Y_i = mu(Y_{i-1}) + sigma(Y_{i-1}) eta_i with X_i = Y_{i-1}; Diverged if
// |Y| exceeds 1e6.
xy_series gen_nonlinear_ar(const std::function<double(double)>& mu,
                           const std::function<double(double)>& sigma, std::size_t n,
                           std::uint64_t seed, std::size_t burn_in = 1000, double y0 = 0.0);

struct diffusion_path {
    std::vector<double> rates;  // R_0 ... R_n
    xy_series pairs;            // X_i = R_i, Y_i = R_{i+1} - R_i
    double delta = 0.0;
};

// Euler scheme R_{i+1} = R_i + mu(R_i) delta + sigma(R_i) sqrt(delta) eta_i.
diffusion_path gen_diffusion_discrete(const std::function<double(double)>& mu,
                                      const std::function<double(double)>& sigma, double delta,
                                      std::size_t n, double x0, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Physical dependence diagnostics for linear coefficients.
// ---------------------------------------------------------------------------

struct dependence_diagnostics_result {
    std::vector<double> theta;     // theta_{i,p'} = |a_i| * ||eps - eps'||_{p'}
    std::vector<double> Theta;     // Theta_n = sum_{i<=n} theta^{p'/2}
    double Z_n = 0.0;              // finite-window Z at the requested n
    std::size_t z_window_n = 0;
    std::vector<double> psi_tail;  // Psi_{n,2} = (sum_{j>=n} a_j^2)^{1/2}
    double p = 2.0;
    double p_prime = 2.0;
};

// n = 0 evaluates Z at the coefficient horizon.
dependence_diagnostics_result dependence_diagnostics(std::span<const double> coeffs, double p,
                                                     std::size_t n = 0);

// Z_n = sum_{k=-n}^{M} (Theta_{n+k} - Theta_k)^2 with Theta saturated beyond
// the coefficient horizon M (terms vanish for k > M).
double dependence_Z(const dependence_diagnostics_result& d, std::size_t n);

// ---------------------------------------------------------------------------
// Serializable model description for the CLI and the experiment harness.
// ---------------------------------------------------------------------------

// Named scalar functions: "zero", "const:c", "linear:a0,a1" (a0 + a1 x),
// "mean_revert:kappa,theta" (kappa (theta - x)), "square_clip:c" (min(x^2, c^2)),
// "sine" (sin x).
std::function<double(double)> named_function(const std::string& spec);

struct process_model {
    enum class kind_t { iid, linear, lrd_linear, arch, nonlinear_ar, diffusion_discrete };
    kind_t kind = kind_t::iid;
    innovation innov = innovation::normal;
    bool iid_uniform01 = false;  // iid marginal U[0,1] instead of the innovation law

    std::vector<double> coeffs;  // linear
    double beta = 0.75, ell = 1.0;
    std::size_t trunc_M = 0;  // 0 -> 10n
    double arch_a = 1.0, arch_b = 0.5;
    std::string mu_spec = "zero", sigma_spec = "const:1";
    double delta = 1.0 / 250.0, x0 = 0.0;
    std::size_t burn_in = 1000;

    static process_model::kind_t kind_by_name(std::string_view name);
    static const char* kind_name(kind_t k);
};

// Draws one realization: x only (density targets) or regression pairs.
std::vector<double> generate_series(const process_model& m, std::size_t n, std::uint64_t seed);
xy_series generate_pairs(const process_model& m, std::size_t n, std::uint64_t seed);

// Closed-form marginal density of the model when one exists (iid normal,
// iid U[0,1], uniform_centered, and linear/LRD with normal innovations).
struct marginal_density {
    std::function<double(double)> pdf;
    std::function<double(double)> dpdf;
    double sd = 0.0;
    bool available = false;
};
marginal_density model_marginal(const process_model& m, std::size_t n);

}  // namespace scb
