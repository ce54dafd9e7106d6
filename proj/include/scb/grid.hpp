#pragma once

#include <cmath>
#include <vector>

#include "scb/error.hpp"

namespace scb {

// Uniform evaluation grid on [lo, hi].
struct evaluation_grid {
    double lo = 0.0;
    double hi = 1.0;
    int m = 0;
    std::vector<double> points;

    double spacing() const { return (hi - lo) / (m - 1); }

    bool operator==(const evaluation_grid& o) const {
        return lo == o.lo && hi == o.hi && m == o.m;
    }
};

inline evaluation_grid make_grid(double lo, double hi, int m) {
    require(lo < hi, errc::domain_error, "grid requires lo < hi");
    require(m >= 2, errc::domain_error, "grid requires m >= 2");
    evaluation_grid g;
    g.lo = lo;
    g.hi = hi;
    g.m = m;
    g.points.resize(m);
    double step = (hi - lo) / (m - 1);
    for (int i = 0; i < m; ++i) g.points[i] = lo + step * i;
    g.points[m - 1] = hi;
    return g;
}

// Deviations fluctuate on the bandwidth scale; spacing <= b/10 with at least
// 201 points keeps the grid supremum close to the interval supremum.
inline evaluation_grid default_grid(double lo, double hi, double b) {
    require(b > 0, errc::domain_error, "bandwidth must be positive");
    int m = std::max(201, static_cast<int>(std::ceil(10.0 * (hi - lo) / b)));
    return make_grid(lo, hi, m);
}

}  // namespace scb
