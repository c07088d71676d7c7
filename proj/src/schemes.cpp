// SPDX-License-Identifier: Apache-2.0
#include "thz/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "thz/errors.hpp"

namespace thz::schemes {

namespace {

// Integrates g(t) pdf(t) over (lo, hi) piecewise, splitting at the scale
// of the distribution so the adaptive rule cannot step over a pdf
// concentrated far below the integration span (e.g. a mean of 1e-4 s
// against a semi-infinite domain).
double integrate_against_pdf(const fpt::FptDistribution& dist,
                             const std::function<double(double)>& g, double lo,
                             double hi, const num::QuadratureSpec& quad) {
    const double m = dist.mean();
    double total = 0.0;
    double a = lo;
    for (double cut : {m / 100.0, m, 100.0 * m}) {
        if (cut <= a || cut >= hi) continue;
        total += num::integrate([&](double t) { return g(t) * dist.pdf(t); },
                                a, cut, quad);
        a = cut;
    }
    total += num::integrate([&](double t) { return g(t) * dist.pdf(t); }, a,
                            hi, quad);
    return total;
}

} // namespace

double outage_scheme1(const fpt::FptDistribution& dist, double t_b,
                      const num::QuadratureSpec& quad) {
    if (t_b < 0) throw DomainError("outage_scheme1: t_b must be >= 0");
    if (t_b == 0) return 0.0;
    const double v = integrate_against_pdf(
        dist, [&](double t) { return t_b / (t + t_b); }, 0.0, num::kInfinity,
        quad);
    return std::clamp(v, 0.0, 1.0);
}

double outage_scheme1_renewal(const fpt::FptDistribution& dist, double t_b) {
    if (t_b < 0) throw DomainError("outage_scheme1_renewal: t_b must be >= 0");
    return t_b / (dist.mean() + t_b);
}

double outage_scheme2(const fpt::FptDistribution& dist, double t_b, double t_u,
                      const num::QuadratureSpec& quad) {
    if (!(t_u > 0)) throw DomainError("outage_scheme2: t_u must be > 0");
    if (t_b < 0) throw DomainError("outage_scheme2: t_b must be >= 0");
    const double period = t_u + t_b;
    const double head = t_b * (1.0 - dist.cdf(t_u)) / period;
    const double tail = integrate_against_pdf(
        dist, [&](double t) { return (period - t) / period; }, 0.0, t_u, quad);
    return std::clamp(head + tail, 0.0, 1.0);
}

double mean_first_misalignment_scheme2(const fpt::FptDistribution& dist,
                                       double t_b, double t_u,
                                       const num::QuadratureSpec& quad) {
    if (!(t_u > 0)) throw DomainError("mean_first_misalignment_scheme2: t_u must be > 0");
    const double f_tu = dist.cdf(t_u);
    if (f_tu <= 0.0) return std::numeric_limits<double>::infinity();
    const double partial = integrate_against_pdf(
        dist, [](double t) { return t; }, 0.0, t_u, quad);
    return (1.0 - f_tu) / f_tu * (t_u + t_b) + partial / f_tu;
}

namespace {
LinkMetrics assemble(const link::SystemConfig& cfg, double p_o, double e_t) {
    const link::SeCapacity top = link::se_capacity_max(cfg);
    LinkMetrics m;
    m.outage_fraction = p_o;
    m.mean_se = (1.0 - p_o) * top.se;
    m.mean_capacity = cfg.bandwidth * m.mean_se;
    m.mean_time_to_misalignment = e_t;
    m.mean_time_diverges = std::isinf(e_t);
    return m;
}
} // namespace

LinkMetrics metrics_scheme1(const link::SystemConfig& cfg,
                            const fpt::FptDistribution& dist,
                            const num::QuadratureSpec& quad) {
    cfg.validate();
    const double t_b = link::alignment_duration(cfg);
    return assemble(cfg, outage_scheme1(dist, t_b, quad), dist.mean());
}

LinkMetrics metrics_scheme2(const link::SystemConfig& cfg,
                            const fpt::FptDistribution& dist, double t_u,
                            const num::QuadratureSpec& quad) {
    cfg.validate();
    const double t_b = link::alignment_duration(cfg);
    return assemble(cfg, outage_scheme2(dist, t_b, t_u, quad),
                    mean_first_misalignment_scheme2(dist, t_b, t_u, quad));
}

} // namespace thz::schemes
