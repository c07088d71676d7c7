// SPDX-License-Identifier: Apache-2.0
#include "thz/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "thz/errors.hpp"

namespace thz::sweep {

const char* to_string(Metric m) {
    switch (m) {
        case Metric::Outage: return "outage_fraction";
        case Metric::MeanSe: return "mean_se";
        case Metric::MeanCapacity: return "mean_capacity";
        case Metric::MeanTime: return "mean_time_to_misalignment";
    }
    return "?";
}

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::TU: return "t_u";
        case SweepAxis::NU: return "n_ue";
        case SweepAxis::NA: return "n_ap";
        case SweepAxis::Dx: return "dx";
        case SweepAxis::Dphi: return "dphi";
        case SweepAxis::Distance: return "distance";
        case SweepAxis::TB: return "t_b";
    }
    return "?";
}

const char* to_string(Scheme s) {
    return s == Scheme::OnDemand ? "on_demand" : "periodic";
}

std::vector<double> Range::values() const {
    if (!(lo < hi) || steps < 2) throw DomainError("Range: requires lo < hi, steps >= 2");
    if (log_spaced && !(lo > 0)) throw DomainError("Range: log spacing requires lo > 0");
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i) {
        const double s = static_cast<double>(i) / (steps - 1);
        v[i] = log_spaced ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
    }
    return v;
}

fpt::FptDistribution distribution_for(const link::SystemConfig& cfg,
                                      const fpt::MobilityParams& mob,
                                      const AnalysisOptions& opt) {
    return fpt::aggregate_distribution(mob, link::misalignment_boundaries(cfg),
                                       opt.mode, opt.mu);
}

UpdatePeriodOptimum optimize_update_period(const link::SystemConfig& cfg,
                                           const fpt::MobilityParams& mob,
                                           const AnalysisOptions& opt) {
    cfg.validate();
    const fpt::FptDistribution dist = distribution_for(cfg, mob, opt);
    const double t_b = link::alignment_duration(cfg);
    const num::ScalarMinimum m = num::argmin_scalar(
        [&](double t_u) { return schemes::outage_scheme2(dist, t_b, t_u); },
        1e-3, 10.0, 40, /*log_grid=*/true);
    return {m.x, m.value, m.boundary};
}

schemes::LinkMetrics evaluate(const link::SystemConfig& cfg,
                              const fpt::MobilityParams& mob, Scheme scheme,
                              const AnalysisOptions& opt) {
    const fpt::FptDistribution dist = distribution_for(cfg, mob, opt);
    if (scheme == Scheme::OnDemand) return schemes::metrics_scheme1(cfg, dist);
    const double t_u =
        opt.optimize_t_u ? optimize_update_period(cfg, mob, opt).t_u : opt.t_u;
    return schemes::metrics_scheme2(cfg, dist, t_u);
}

ArrayOptimum optimize_array_ue(const link::SystemConfig& cfg,
                               const fpt::MobilityParams& mob, Scheme scheme,
                               const AnalysisOptions& opt) {
    cfg.validate();
    ArrayOptimum best{0, -1.0};
    const int hi = std::min(100, cfg.n_ap);
    for (int n = 1; n <= hi; ++n) {
        link::SystemConfig c = cfg;
        c.n_ue = n;
        const double se = evaluate(c, mob, scheme, opt).mean_se;
        if (se > best.mean_se) best = {n, se};
    }
    return best;
}

ArrayOptimum optimize_array_ap(const link::SystemConfig& cfg,
                               const fpt::MobilityParams& mob, Scheme scheme,
                               const AnalysisOptions& opt) {
    cfg.validate();
    const int lo = std::max(10, cfg.n_ue);
    auto se_at = [&](int n) {
        link::SystemConfig c = cfg;
        c.n_ap = n;
        return evaluate(c, mob, scheme, opt).mean_se;
    };
    ArrayOptimum best{0, -1.0};
    for (int n = lo; n <= 1100; n += 10) {
        const double se = se_at(n);
        if (se > best.mean_se) best = {n, se};
    }
    // fine pass around the coarse optimum
    for (int n = std::max(lo, best.n - 10); n <= std::min(1100, best.n + 10); ++n) {
        if (n == best.n) continue;
        const double se = se_at(n);
        if (se > best.mean_se) best = {n, se};
    }
    return best;
}

namespace {

double metric_of(const schemes::LinkMetrics& m, Metric metric) {
    switch (metric) {
        case Metric::Outage: return m.outage_fraction;
        case Metric::MeanSe: return m.mean_se;
        case Metric::MeanCapacity: return m.mean_capacity;
        case Metric::MeanTime: return m.mean_time_to_misalignment;
    }
    return 0.0;
}

void locate_optimum(SweepResult& r, bool maximize) {
    std::size_t best = 0;
    bool found = false;
    for (std::size_t i = 0; i < r.metric_values.size(); ++i) {
        const double v = r.metric_values[i];
        if (std::isnan(v)) continue;
        if (!found || (maximize ? v > r.metric_values[best] : v < r.metric_values[best])) {
            best = i;
            found = true;
        }
    }
    r.optimum_index = best;
    r.boundary_optimum = best == 0 || best + 1 == r.metric_values.size();
}

} // namespace

SweepResult sweep(SweepAxis axis, const Range& range,
                  const link::SystemConfig& cfg, const fpt::MobilityParams& mob,
                  Scheme scheme, Metric metric, const AnalysisOptions& opt) {
    cfg.validate();
    SweepResult r;
    r.axis_name = to_string(axis);
    r.metric_name = to_string(metric);
    r.axis_values = range.values();
    r.metadata["scheme"] = to_string(scheme);
    r.metadata["mode"] = opt.mode == fpt::AggregateMode::LognormalApprox
                             ? "lognormal" : "exact";
    r.metadata["mu_convention"] = opt.mu == fpt::MuConvention::MomentMatched
                                      ? "moment_matched" : "direct";
    r.metadata["distance_m"] = std::to_string(cfg.distance);

    for (double v : r.axis_values) {
        link::SystemConfig c = cfg;
        fpt::MobilityParams m = mob;
        AnalysisOptions o = opt;
        switch (axis) {
            case SweepAxis::TU:
                o.optimize_t_u = false;
                o.t_u = v;
                break;
            case SweepAxis::NU: c.n_ue = static_cast<int>(std::lround(v)); break;
            case SweepAxis::NA: c.n_ap = static_cast<int>(std::lround(v)); break;
            case SweepAxis::Dx: m.dx = m.dy = v; break;
            case SweepAxis::Dphi: m.dphi = m.dtheta = v; break;
            case SweepAxis::Distance: c.distance = v; break;
            case SweepAxis::TB:
                // axis value is the sweep duration; realized via delta
                c.beam_step_delay = v / (link::gain(c.n_ap) + link::gain(c.n_ue));
                break;
        }
        try {
            r.metric_values.push_back(metric_of(evaluate(c, m, scheme, o), metric));
        } catch (const std::exception& e) {
            r.metric_values.push_back(std::numeric_limits<double>::quiet_NaN());
            r.metadata["error_at_" + std::to_string(v)] = e.what();
        }
    }
    locate_optimum(r, metric != Metric::Outage);
    return r;
}

namespace {

struct JointBest {
    int n_ap = 0, n_ue = 0;
    double capacity = -1.0;
};

JointBest joint_optimize(const link::SystemConfig& cfg,
                         const fpt::MobilityParams& mob, Scheme scheme,
                         const AnalysisOptions& opt) {
    auto cap_at = [&](int na, int nu) {
        link::SystemConfig c = cfg;
        c.n_ap = na;
        c.n_ue = nu;
        return evaluate(c, mob, scheme, opt).mean_capacity;
    };
    JointBest best;
    auto consider = [&](int na, int nu) {
        if (nu < 1 || na < nu || na < 10 || na > 1100 || nu > 100) return;
        const double cap = cap_at(na, nu);
        if (cap > best.capacity) best = {na, nu, cap};
    };
    for (int na = 10; na <= 1100; na += 30)
        for (int nu = 2; nu <= 98; nu += 8) consider(na, nu);
    consider(100, 20); // reference point always on the grid
    JointBest coarse = best;
    for (int na = coarse.n_ap - 30; na <= coarse.n_ap + 30; na += 10)
        for (int nu = coarse.n_ue - 8; nu <= coarse.n_ue + 8; nu += 2)
            consider(na, nu);
    JointBest mid = best;
    for (int na = mid.n_ap - 10; na <= mid.n_ap + 10; na += 5)
        for (int nu = mid.n_ue - 2; nu <= mid.n_ue + 2; ++nu) consider(na, nu);
    return best;
}

} // namespace

SweepResult capacity_envelope(const link::SystemConfig& cfg_template,
                              const fpt::MobilityParams& mob,
                              const Range& d_range, const AnalysisOptions& opt) {
    cfg_template.validate();
    SweepResult r;
    r.axis_name = "distance";
    r.metric_name = "joint_capacity_on_demand";
    r.axis_values = d_range.values();
    r.metadata["mode"] = opt.mode == fpt::AggregateMode::LognormalApprox
                             ? "lognormal" : "exact";
    r.metadata["reference_arrays"] = "n_ap=100,n_ue=20";

    std::vector<double> periodic_joint, fixed_od, fixed_p, theory;
    for (double d : r.axis_values) {
        link::SystemConfig cfg = cfg_template;
        cfg.distance = d;
        const JointBest od = joint_optimize(cfg, mob, Scheme::OnDemand, opt);
        const JointBest pd = joint_optimize(cfg, mob, Scheme::Periodic, opt);
        link::SystemConfig ref = cfg;
        ref.n_ap = 100;
        ref.n_ue = 20;
        r.metric_values.push_back(od.capacity);
        periodic_joint.push_back(pd.capacity);
        fixed_od.push_back(evaluate(ref, mob, Scheme::OnDemand, opt).mean_capacity);
        fixed_p.push_back(evaluate(ref, mob, Scheme::Periodic, opt).mean_capacity);
        // Theoretical ceiling: perfectly aligned link with the largest
        // supported arrays, i.e. no misalignment or realignment losses.
        link::SystemConfig ideal = cfg;
        ideal.n_ap = 1024;
        ideal.n_ue = 100;
        theory.push_back(link::se_capacity_max(ideal).capacity);
    }
    r.extra_columns.emplace_back("joint_capacity_periodic", std::move(periodic_joint));
    r.extra_columns.emplace_back("fixed_capacity_on_demand", std::move(fixed_od));
    r.extra_columns.emplace_back("fixed_capacity_periodic", std::move(fixed_p));
    r.extra_columns.emplace_back("theoretical_capacity", std::move(theory));
    locate_optimum(r, true);
    return r;
}

namespace {
std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}
} // namespace

void write_csv(std::ostream& os, const SweepResult& r) {
    os << r.axis_name << ',' << r.metric_name;
    for (const auto& [name, _] : r.extra_columns) os << ',' << name;
    os << '\n';
    for (std::size_t i = 0; i < r.axis_values.size(); ++i) {
        os << fmt9(r.axis_values[i]) << ',' << fmt9(r.metric_values[i]);
        for (const auto& [_, col] : r.extra_columns) os << ',' << fmt9(col[i]);
        os << '\n';
    }
}

std::string to_json(const SweepResult& r) {
    nlohmann::json j;
    j["axis"] = r.axis_name;
    j["axis_values"] = r.axis_values;
    j["metric"] = r.metric_name;
    j["metric_values"] = r.metric_values;
    for (const auto& [name, col] : r.extra_columns) j["extra"][name] = col;
    j["optimum_index"] = r.optimum_index;
    j["boundary_optimum"] = r.boundary_optimum;
    j["metadata"] = r.metadata;
    return j.dump(2);
}

} // namespace thz::sweep
