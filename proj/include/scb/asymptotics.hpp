#pragma once

#include <functional>
#include <optional>
#include <string>

#include "scb/kernel.hpp"

namespace scb {

// Gumbel limit law of the normalized maximum deviation: F(z) = exp(-2 e^{-z}).
double gumbel_cdf(double z);
// z_alpha = -log log (1-alpha)^{-1/2}; round-trips through the cdf to 1e-12.
double gumbel_quantile(double alpha);

// Normalizing constant d_n of the Gumbel approximation, as a function of
// bbar = b/(u-l):
//   K1 > 0: d_n = s + { log(K1/sqrt(pi)) + (1/2) log log bbar^{-1} } / s
//   K1 = 0: d_n = s + log( sqrt(K2) / (sqrt(2) pi) ) / s
// with s = (2 log bbar^{-1})^{1/2}. Requires log bbar^{-1} > 1 so that
// log log is positive (BandwidthTooLarge otherwise).
double normalizing_dn(double bbar, const kernel_profile& k);

// Band halfwidth multiplier l1 = z_alpha / (2 log bbar^{-1})^{1/2} + d_n.
double halfwidth_l1(double alpha, double bbar, const kernel_profile& k);

// Grid-band comparison multiplier with J_n = ceil((u-l)/(2b)):
//   l2 = z_alpha/(2 log J_n)^{1/2} + (2 log J_n)^{1/2}
//        - ((1/2) log log J_n + log(2 sqrt(pi))) / (2 log J_n)^{1/2}
double halfwidth_l2(double alpha, double b, double interval_length = 1.0);

// Long-range dependent coefficients a_j = ell * j^{-beta}, 1/2 < beta < 1.
struct lrd_spec {
    double beta = 0.75;
    double ell = 1.0;
    double c_beta = 0.0;  // int_0^inf (x+x^2)^{-beta} dx / [(3-2beta)(1-beta)]
};

// c_beta by quadrature (singularities substituted away); tests cross-check
// against the Beta-function identity B(1-beta, 2beta-1).
lrd_spec lrd_limit_scale(double beta, double ell = 1.0);

// Scale of the large-bandwidth LRD limit:
//   sqrt(c_beta)/sqrt(lambda_K) * max_{[lo,hi]} |f'(x)| / sqrt(f(x)),
// with f, f' the marginal density and its derivative (closed form supplied by
// the caller). The max is taken over a dense deterministic grid.
double lrd_half_normal_scale(const lrd_spec& spec, const kernel_profile& k,
                             const std::function<double(double)>& f,
                             const std::function<double(double)>& df, double lo, double hi);

enum class lrd_regime { gumbel, half_normal, indeterminate };

const char* lrd_regime_name(lrd_regime r);

// Finite-n reading of the asymptotic bandwidth conditions; heuristic
// diagnostics, not proof.
struct bandwidth_diagnostics {
    bool c1_lower = false;  // n^{-delta1} <= b
    bool c1_upper = false;  // b <= n^{-delta2}
    bool c1 = false;
    double lrd_statistic = 0.0;  // b^{1/2} n^{1-beta} ell
    double log_root_n = 0.0;     // log^{1/2} n
    lrd_regime regime = lrd_regime::indeterminate;
    std::string summary;
};

bandwidth_diagnostics check_bandwidth_conditions(std::size_t n, double b, double delta1,
                                                 double delta2,
                                                 const std::optional<lrd_spec>& lrd = std::nullopt);

}  // namespace scb
