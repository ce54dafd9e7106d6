#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scb/simd.hpp"

namespace scb {

enum class kernel_family { epanechnikov, rectangular, triangular, quartic, custom };

// A compactly supported kernel together with every derived constant the band
// machinery needs:
//   lambda_K = int K^2
//   K1       = [K^2(-A) + K^2(A)] / (2 lambda_K)
//   K2       = int (K')^2 / (2 lambda_K)
//   psi_K    = int u^2 K(u) du / 2
//   (alpha, C0) = (1, K1) if K1 > 0 else (2, K2); these drive the kernel
//   autocorrelation expansion r(s) = 1 - C0 |s|^alpha + o(|s|^alpha).
//
// Built-ins are closed-form; custom kernels are sampled tables with constants
// from quadrature. Immutable after construction, safe to share across threads.
struct kernel_profile {
    std::string name;
    kernel_family family = kernel_family::custom;
    double A = 1.0;      // support radius
    double scale = 1.0;  // built-ins: K(u) -> K(u/scale)/scale, A = scale

    double lambda_K = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double psi_K = 0.0;
    int alpha = 2;
    double C0 = 0.0;

    // custom kernels only: uniformly spaced samples of K on [-A, A]
    std::vector<double> tab_u;
    std::vector<double> tab_k;

    double evaluate(double u) const;
    double derivative(double u) const;
    // CDF of the kernel as a density, and its inverse (used by the smoothed
    // bootstrap). p in [0,1].
    double cdf(double u) const;
    double inverse_cdf(double p) const;

    bool builtin() const { return family != kernel_family::custom; }
    simd::shape simd_shape() const;
};

// Built-in kernels by CLI name: epanechnikov|epan, rect|rectangular|uniform,
// triangular|tri, quartic|biweight. Unknown names (including gaussian, which
// has unbounded support) raise NotAKernel.
kernel_profile kernel_by_name(std::string_view name);

// Custom kernel from samples of K at uniformly spaced u covering [-A, A].
// Validates nonnegativity and unit mass; derivative constants use central
// differences at spacing 1e-5.
kernel_profile make_table_kernel(std::string name, const std::vector<double>& u,
                                 const std::vector<double>& k, double A);

// K(u) -> (1/c) K(u/c); rescales A -> cA, lambda_K -> lambda_K/c, psi_K -> c^2 psi_K.
kernel_profile scale_kernel(const kernel_profile& base, double c);

// r(s) = int K(x) K(x+s) dx / lambda_K by quadrature; even, r(0)=1, zero for |s| >= 2A.
double kernel_autocorr(const kernel_profile& k, double s);

// Constants recomputed by quadrature (validation path; built-ins must agree
// with their closed forms to 1e-9).
struct kernel_constants {
    double mass;
    double lambda_K;
    double K1;
    double K2;
    double psi_K;
};
kernel_constants quadrature_constants(const kernel_profile& k);

}  // namespace scb
