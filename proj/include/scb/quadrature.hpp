#pragma once

#include <functional>

namespace scb {

// Adaptive Gauss-Kronrod (G7,K15) panel integration with absolute-error
// bisection. Kernel constants feed band widths directly, hence the tight
// default tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 40);

}  // namespace scb
