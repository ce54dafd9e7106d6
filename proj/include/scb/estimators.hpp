#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scb/grid.hpp"
#include "scb/kernel.hpp"

namespace scb {

enum class curve_kind { density, density_h, regression, variance, derivative1, derivative2 };

const char* curve_kind_name(curve_kind k);

// A function estimate on a grid. Grid points where the estimator was
// undefined (empty kernel window, singular local fit) are recorded in
// failed_points and carry value 0; band construction later refuses intervals
// containing failures.
struct curve_estimate {
    evaluation_grid grid;
    std::vector<double> values;
    curve_kind kind = curve_kind::density;
    double bandwidth = 0.0;
    std::size_t n = 0;
    std::vector<int> failed_points;
    int clipped = 0;  // negative values clipped to 0 (variance estimates)

    // Linear interpolation between grid points; x must lie inside [lo, hi].
    double value_at(double x) const;
    bool in_range(double x) const { return x >= grid.lo && x <= grid.hi; }
    bool failed_in(double lo, double hi) const;
};

// Constant curve on a grid (test/assembly helper).
curve_estimate constant_curve(const evaluation_grid& g, double value, curve_kind kind);

// f_n(x) = (nb)^{-1} sum_k K((X_k - x)/b)
curve_estimate kde(std::span<const double> data, double b, const evaluation_grid& grid,
                   const kernel_profile& k);

// d/dx of kde: f_n'(x) = -(n b^2)^{-1} sum_k K'((X_k - x)/b)
curve_estimate kde_derivative(std::span<const double> data, double b, const evaluation_grid& grid,
                              const kernel_profile& k);

// mu_n(t) = sum K((X_k - t)/b) Y_k / sum K((X_k - t)/b); empty windows are
// per-point failures.
curve_estimate nadaraya_watson(std::span<const double> x, std::span<const double> y, double b,
                               const evaluation_grid& grid, const kernel_profile& k);

// Weighted local polynomial fit in each kernel window; returns the
// deriv_order-th derivative (deriv_order! times the fitted coefficient).
curve_estimate local_poly_fit(std::span<const double> x, std::span<const double> y, double b,
                              const evaluation_grid& grid, const kernel_profile& k, int degree,
                              int deriv_order);

// e_k = Y_k - mu(X_k) with mu interpolated from the curve; X_k outside the
// curve grid are skipped and counted in *dropped. Returned residuals align
// with kept (x, y) pairs in order; kept_x receives the matching regressors
// when non-null.
std::vector<double> residuals(std::span<const double> x, std::span<const double> y,
                              const curve_estimate& mu, int* dropped = nullptr,
                              std::vector<double>* kept_x = nullptr);

// NW regression of squared residuals; values clipped at 0 with the count
// recorded.
curve_estimate variance_estimate(std::span<const double> x, std::span<const double> sq_resid,
                                 double h, const evaluation_grid& grid, const kernel_profile& k);

// Hard positivity floor for ratio formulas: f_n >= 0.01/(u-l) on [l,u].
inline double density_floor(double lo, double hi) { return 0.01 / (hi - lo); }

// b^2 psi_K (mu'' + 2 mu' f'/f) on the shared grid. DensityTooSmall if f
// drops below f_min anywhere on the grid.
curve_estimate bias_correction_mu(const curve_estimate& mu_d1, const curve_estimate& mu_d2,
                                  const curve_estimate& f, const curve_estimate& f_d1, double b,
                                  double psi_K, double f_min);

// Same formula with (sigma^2)', (sigma^2)'' in place of mu', mu''.
curve_estimate bias_correction_sigma(const curve_estimate& s2_d1, const curve_estimate& s2_d2,
                                     const curve_estimate& f_d1, const curve_estimate& f, double h,
                                     double psi_K, double f_min);

// Grid approximation of the weighted maximum deviation sup w(x) |a(x) - b(x)|.
struct sup_statistic {
    double value = 0.0;
    double argmax = 0.0;
    int argmax_index = 0;
};

sup_statistic sup_weighted_deviation(const curve_estimate& a, const curve_estimate& b,
                                     const std::vector<double>& weight);
sup_statistic sup_weighted_deviation(const curve_estimate& a, const curve_estimate& b,
                                     double weight = 1.0);

}  // namespace scb
