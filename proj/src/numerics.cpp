// SPDX-License-Identifier: Apache-2.0
#include "thz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "thz/errors.hpp"

namespace thz::num {

double sum_symmetric_series(const std::function<double(long)>& term,
                            const SeriesSpec& spec) {
    double sum = term(0);
    for (long n = 1; n <= spec.max_terms; ++n) {
        const double tp = term(n);
        const double tm = term(-n);
        sum += tp + tm;
        if (std::abs(tp) < spec.term_tol && std::abs(tm) < spec.term_tol)
            return sum;
    }
    throw NonConvergence("sum_symmetric_series: term_tol not reached after " +
                         std::to_string(spec.max_terms) + " pairs");
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double integral;
    double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double gauss = fc * kWg[3];
    double kronrod = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double fsum = f(c - x) + f(c + x);
        kronrod += fsum * kWgk[i];
        if (i % 2 == 1) gauss += fsum * kWg[i / 2];
    }
    return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, const QuadratureSpec& spec) {
    struct Interval {
        double a, b, integral, error;
    };
    GkEstimate whole = gk15(f, a, b);
    std::vector<Interval> stack{{a, b, whole.integral, whole.error}};
    double total = whole.integral;
    double total_err = whole.error;
    int subdivisions = 0;
    auto tol = [&](double) {
        return std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    };
    while (total_err > tol(total)) {
        // split the interval with the largest error estimate
        auto worst = std::max_element(
            stack.begin(), stack.end(),
            [](const Interval& l, const Interval& r) { return l.error < r.error; });
        if (++subdivisions > spec.max_subdivisions)
            throw NonConvergence("integrate: subdivision budget exhausted");
        const Interval iv = *worst;
        const double mid = 0.5 * (iv.a + iv.b);
        if (mid <= iv.a || mid >= iv.b)
            break; // interval at machine resolution; accept current estimate
        GkEstimate left = gk15(f, iv.a, mid);
        GkEstimate right = gk15(f, mid, iv.b);
        total += left.integral + right.integral - iv.integral;
        total_err += left.error + right.error - iv.error;
        *worst = {iv.a, mid, left.integral, left.error};
        stack.push_back({mid, iv.b, right.integral, right.error});
    }
    return total;
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(a < b)) throw DomainError("integrate: requires a < b");
    if (std::isinf(b)) {
        // t = a + u/(1-u) maps u in (0,1) onto (a, inf)
        auto g = [&f, a](double u) {
            const double om = 1.0 - u;
            return f(a + u / om) / (om * om);
        };
        return integrate_finite(g, 0.0, 1.0, spec);
    }
    return integrate_finite(f, a, b, spec);
}

ScalarMinimum argmin_scalar(const std::function<double(double)>& f, double lo,
                            double hi, int grid, bool log_grid) {
    if (!(lo < hi)) throw DomainError("argmin_scalar: requires lo < hi");
    if (grid < 3) throw DomainError("argmin_scalar: requires grid >= 3");
    if (log_grid && lo <= 0.0)
        throw DomainError("argmin_scalar: log grid requires lo > 0");

    auto node = [&](double a, double b, int i, int n) {
        const double s = static_cast<double>(i) / (n - 1);
        return log_grid ? a * std::pow(b / a, s) : a + (b - a) * s;
    };

    double a = lo, b = hi;
    int n = grid;
    double best_x = lo, best_f = f(lo);
    bool at_lower = true, at_upper = false;
    const double rel_step_target = 1e-3;
    for (int round = 0; round < 64; ++round) {
        int best_i = 0;
        best_x = node(a, b, 0, n);
        best_f = f(best_x);
        for (int i = 1; i < n; ++i) {
            const double x = node(a, b, i, n);
            const double v = f(x);
            if (v < best_f) {
                best_f = v;
                best_x = x;
                best_i = i;
            }
        }
        at_lower = best_i == 0 && a == lo;
        at_upper = best_i == n - 1 && b == hi;
        const double lo_n = node(a, b, std::max(best_i - 1, 0), n);
        const double hi_n = node(a, b, std::min(best_i + 1, n - 1), n);
        const double step = (hi_n - lo_n) / 2.0;
        if (step <= rel_step_target * std::max(std::abs(best_x), 1e-300))
            break;
        a = lo_n;
        b = hi_n;
        n = std::max(grid, 9);
    }
    return {best_x, best_f, at_lower || at_upper};
}

} // namespace thz::num
