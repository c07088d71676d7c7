// SPDX-License-Identifier: Apache-2.0
#include "thz/mobility_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "thz/errors.hpp"
#include "thz/rng.hpp"
#include "thz/schemes.hpp"

namespace thz::sim {

void SimSpec::validate() const {
    if (dt < 0) throw ValidationError("dt", "must be >= 0 (0 = auto)");
    if (n_trials < 1) throw ValidationError("n_trials", "must be >= 1");
    if (horizon < 0) throw ValidationError("horizon", "must be >= 0 (0 = auto)");
}

const char* to_string(Cause c) {
    switch (c) {
        case Cause::X: return "x";
        case Cause::Y: return "y";
        case Cause::Phi: return "phi";
        case Cause::Theta: return "theta";
        case Cause::Periodic: return "periodic";
    }
    return "?";
}

unsigned worker_count() {
    if (const char* env = std::getenv("THZLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

struct Axis {
    double bound;
    double delta;
    Cause cause;
};

struct AxisSet {
    std::array<Axis, 4> axis;
    int count = 0;
    double min_mean; // shortest per-axis analytic mean FPT, s

    AxisSet(const fpt::MobilityParams& mob, const link::Boundaries& bounds) {
        mob.validate();
        auto add = [this](double bound, double delta, Cause c) {
            if (delta > 0) axis[count++] = {bound, delta, c};
        };
        add(bounds.m_xy, mob.dx, Cause::X);
        add(bounds.m_xy, mob.dy, Cause::Y);
        add(bounds.m_angle, mob.dphi, Cause::Phi);
        add(bounds.m_angle, mob.dtheta, Cause::Theta);
        min_mean = 1e300;
        for (int i = 0; i < count; ++i) {
            const double r = axis[i].bound / axis[i].delta;
            min_mean = std::min(min_mean, r * r);
        }
    }
};

struct WalkParams {
    std::array<double, 4> sd;    // per-step increment sd
    std::array<double, 4> bound;
    std::array<Cause, 4> cause;
    int count;
    double dt;

    WalkParams(const AxisSet& axes, double dt_) : count(axes.count), dt(dt_) {
        for (int i = 0; i < count; ++i) {
            sd[i] = axes.axis[i].delta * std::sqrt(dt);
            bound[i] = axes.axis[i].bound;
            cause[i] = axes.axis[i].cause;
        }
    }
};

struct Crossing {
    bool crossed = false;
    double time = 0.0;
    Cause cause = Cause::X;
    std::size_t steps = 0;
};

// Advances all axes from zero until a boundary is crossed or max_steps
// elapse. Besides the end-of-step position test, a Brownian-bridge
// correction accounts for within-step excursions: conditioned on the
// endpoints x0, x1 (both inside +-M), the bridge crosses a barrier with
// probability exp(-2(M-x0)(M-x1)/sd^2) per side. This removes the
// O(sqrt(dt)) bias of the bare end-of-step test.
Crossing walk(const WalkParams& p, Xoshiro256pp& rng, std::size_t max_steps) {
    std::array<double, 4> pos{0.0, 0.0, 0.0, 0.0};
    for (std::size_t step = 1; step <= max_steps; ++step) {
        for (int i = 0; i < p.count; ++i) {
            const double x0 = pos[i];
            const double x1 = x0 + p.sd[i] * rng.normal();
            pos[i] = x1;
            if (std::abs(x1) >= p.bound[i])
                return {true, static_cast<double>(step) * p.dt, p.cause[i], step};
            // Bridge test, skipped when both endpoints sit too far from
            // either barrier for the crossing odds to exceed ~2e-9.
            const double margin =
                p.bound[i] - std::max(std::abs(x0), std::abs(x1));
            if (margin < 3.2 * p.sd[i]) {
                const double inv_var = 1.0 / (p.sd[i] * p.sd[i]);
                const double up = std::exp(-2.0 * (p.bound[i] - x0) *
                                           (p.bound[i] - x1) * inv_var);
                const double dn = std::exp(-2.0 * (p.bound[i] + x0) *
                                           (p.bound[i] + x1) * inv_var);
                if (rng.uniform() < up + dn)
                    return {true, (static_cast<double>(step) - 0.5) * p.dt,
                            p.cause[i], step};
            }
        }
    }
    return {false, static_cast<double>(max_steps) * p.dt, Cause::X, max_steps};
}

template <typename Fn>
void run_trials(std::size_t n, Fn&& per_trial) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) per_trial(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) per_trial(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

FptSamples simulate_fpt(const fpt::MobilityParams& mob,
                        const link::Boundaries& bounds, const SimSpec& spec) {
    spec.validate();
    const AxisSet axes(mob, bounds);
    const double dt = spec.dt > 0 ? spec.dt : axes.min_mean / 1e4;
    const double horizon = spec.horizon > 0 ? spec.horizon : 20.0 * axes.min_mean;
    const WalkParams params(axes, dt);
    const auto max_steps = static_cast<std::size_t>(horizon / dt);

    std::vector<Crossing> out(spec.n_trials);
    run_trials(spec.n_trials, [&](std::size_t i) {
        Xoshiro256pp rng(spec.seed, i);
        out[i] = walk(params, rng, max_steps);
    });

    FptSamples result;
    result.dt = dt;
    result.horizon = horizon;
    result.times.reserve(spec.n_trials);
    result.causes.reserve(spec.n_trials);
    for (const Crossing& c : out) {
        if (c.crossed) {
            result.times.push_back(c.time);
            result.causes.push_back(c.cause);
        } else {
            ++result.censored;
        }
    }
    return result;
}

SimulationTrace simulate_scheme(const SchemeSpec& scheme,
                                const link::SystemConfig& cfg,
                                const fpt::MobilityParams& mob,
                                const SimSpec& spec,
                                std::vector<RealignmentEvent>* events) {
    cfg.validate();
    spec.validate();
    const AxisSet axes(mob, link::misalignment_boundaries(cfg));
    const double dt = spec.dt > 0 ? spec.dt : axes.min_mean / 1e4;
    const double horizon = spec.horizon > 0 ? spec.horizon : 20.0 * axes.min_mean;
    const double t_b = link::alignment_duration(cfg);
    const WalkParams params(axes, dt);
    const bool periodic = scheme.kind == SchemeSpec::Kind::Periodic;
    if (periodic && !(scheme.t_u > 0))
        throw DomainError("simulate_scheme: periodic t_u must be > 0");
    const auto steps_tu =
        periodic ? std::max<std::size_t>(1, static_cast<std::size_t>(scheme.t_u / dt))
                 : 0;

    struct TrialResult {
        double cycle_frac_sum = 0.0;
        std::size_t cycles = 0;
        double outage_time = 0.0;
        double total_time = 0.0;
        double first_misalignment = -1.0;
        std::vector<RealignmentEvent> events;
    };
    std::vector<TrialResult> trials(spec.n_trials);

    run_trials(spec.n_trials, [&](std::size_t i) {
        Xoshiro256pp rng(spec.seed, i);
        TrialResult& tr = trials[i];
        double t = 0.0; // trial clock; mobility frozen during realignment
        while (t < horizon) {
            if (periodic) {
                const Crossing c = walk(params, rng, steps_tu);
                const double t_u = static_cast<double>(steps_tu) * dt;
                const double outage = t_b + (c.crossed ? t_u - c.time : 0.0);
                tr.cycle_frac_sum += outage / (t_u + t_b);
                ++tr.cycles;
                tr.outage_time += outage;
                tr.total_time += t_u + t_b;
                if (c.crossed && tr.first_misalignment < 0)
                    tr.first_misalignment = t + c.time;
                if (events) {
                    if (c.crossed)
                        tr.events.push_back({i, t + c.time, c.cause});
                    tr.events.push_back({i, t + t_u, Cause::Periodic});
                }
                t += t_u + t_b;
            } else {
                const auto cap = static_cast<std::size_t>((horizon - t) / dt);
                const Crossing c = walk(params, rng, cap);
                if (!c.crossed) {
                    // censored partial cycle: aligned time only
                    tr.total_time += c.time;
                    break;
                }
                tr.cycle_frac_sum += t_b / (c.time + t_b);
                ++tr.cycles;
                tr.outage_time += t_b;
                tr.total_time += c.time + t_b;
                if (tr.first_misalignment < 0) tr.first_misalignment = t + c.time;
                if (events) tr.events.push_back({i, t + c.time, c.cause});
                t += c.time + t_b;
            }
        }
    });

    SimulationTrace trace;
    double frac_sum = 0.0, outage = 0.0, total = 0.0;
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const TrialResult& tr = trials[i];
        frac_sum += tr.cycle_frac_sum;
        cycles += tr.cycles;
        outage += tr.outage_time;
        total += tr.total_time;
        if (tr.first_misalignment >= 0)
            trace.first_misalignment_times.push_back(tr.first_misalignment);
        if (events)
            events->insert(events->end(), tr.events.begin(), tr.events.end());
    }
    trace.realignment_count = cycles;
    trace.outage_fraction = cycles > 0 ? frac_sum / static_cast<double>(cycles) : 0.0;
    trace.time_average_outage = total > 0 ? outage / total : 0.0;
    trace.mean_throughput =
        (1.0 - trace.time_average_outage) * link::se_capacity_max(cfg).capacity;
    return trace;
}

namespace {

// Quantile of dist by bisection on [kTMin, kTMax].
double quantile(const fpt::FptDistribution& dist, double q) {
    double lo = fpt::FptDistribution::kTMin, hi = fpt::FptDistribution::kTMax;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = std::sqrt(lo * hi); // bisect in log space
        (dist.cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

GofResult chi_square_gof(const std::vector<double>& samples,
                         const fpt::FptDistribution& dist, int bins,
                         double alpha) {
    if (samples.empty()) throw InsufficientData("chi_square_gof: no samples");
    if (bins < 5) throw DomainError("chi_square_gof: bins must be >= 5");
    if (!(alpha > 0 && alpha < 1))
        throw DomainError("chi_square_gof: alpha must be in (0,1)");

    const auto n = static_cast<double>(samples.size());
    // equiprobable bins; merge neighbours until expected >= 5 per bin
    int used = bins;
    while (used > 1 && n / used < 5.0) used = (used + 1) / 2;
    if (used < 2)
        throw InsufficientData("chi_square_gof: fewer than 2 usable bins");

    std::vector<double> edges(used - 1);
    for (int i = 1; i < used; ++i)
        edges[i - 1] = quantile(dist, static_cast<double>(i) / used);

    std::vector<std::size_t> counts(used, 0);
    for (double s : samples) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), s);
        ++counts[static_cast<std::size_t>(it - edges.begin())];
    }

    const double expected = n / used;
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }

    GofResult r;
    r.statistic = stat;
    r.dof = used - 1;
    r.bins_used = used;
    boost::math::chi_squared_distribution<double> chi2(r.dof);
    r.critical = boost::math::quantile(chi2, 1.0 - alpha);
    r.accept = stat <= r.critical;
    return r;
}

std::vector<double> sample_inverse_cdf(const fpt::FptDistribution& dist,
                                       std::size_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    run_trials(n, [&](std::size_t i) {
        Xoshiro256pp rng(seed, i);
        out[i] = quantile(dist, rng.uniform());
    });
    return out;
}

void write_trace(std::ostream& os, const std::vector<RealignmentEvent>& events) {
    os << "trial_id\tevent_time_s\tcause\n";
    for (const RealignmentEvent& e : events)
        os << e.trial_id << '\t' << e.event_time << '\t' << to_string(e.cause)
           << '\n';
}

} // namespace thz::sim
