// SPDX-License-Identifier: Apache-2.0
//
// Shared numerical machinery: symmetric series summation, adaptive
// Gauss-Kronrod quadrature on finite and semi-infinite intervals, and
// grid-plus-refinement scalar minimization.
#ifndef THZ_NUMERICS_HPP
#define THZ_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <limits>

namespace thz::num {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
};

struct SeriesSpec {
    double term_tol = 1e-14;
    int max_terms = 200;
};

inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }

// Sums term(n) for n = -N..N with N chosen adaptively: stops once both
// members of the last added pair fall below term_tol in magnitude.
// Throws NonConvergence when max_terms pairs were not enough.
double sum_symmetric_series(const std::function<double(long)>& term,
                            const SeriesSpec& spec = {});

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Adaptive 15-point Gauss-Kronrod quadrature of f over (a, b).
// b may be +infinity, in which case the tail is mapped onto (0, 1) by
// t = a + u/(1-u) before integrating.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
    bool boundary = false; // minimum sits on an end of [lo, hi]
};

// Coarse grid scan over [lo, hi] followed by local grid refinement around
// the best point, down to a relative step of 1e-3. log_grid spaces the
// initial scan geometrically (requires lo > 0).
ScalarMinimum argmin_scalar(const std::function<double(double)>& f, double lo,
                            double hi, int grid, bool log_grid = false);

} // namespace thz::num

#endif
