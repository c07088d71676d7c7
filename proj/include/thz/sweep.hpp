// SPDX-License-Identifier: Apache-2.0
//
// Parameter studies: optimal realignment period, optimal array sizes,
// metric-vs-mobility sweeps and jointly optimized capacity envelopes.
#ifndef THZ_SWEEP_HPP
#define THZ_SWEEP_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "thz/fpt.hpp"
#include "thz/linkbudget.hpp"
#include "thz/schemes.hpp"

namespace thz::sweep {

enum class Scheme { OnDemand, Periodic };

enum class Metric { Outage, MeanSe, MeanCapacity, MeanTime };

enum class SweepAxis { TU, NU, NA, Dx, Dphi, Distance, TB };

const char* to_string(Metric m);
const char* to_string(SweepAxis a);
const char* to_string(Scheme s);

struct AnalysisOptions {
    fpt::AggregateMode mode = fpt::AggregateMode::LognormalApprox;
    fpt::MuConvention mu = fpt::MuConvention::MomentMatched;
    // Periodic T_U handling: fixed value, or re-optimized per grid point.
    double t_u = 0.2;
    bool optimize_t_u = true;
};

struct SweepResult {
    std::string axis_name;
    std::vector<double> axis_values;
    std::string metric_name;
    std::vector<double> metric_values;
    // extra named columns evaluated alongside the primary metric
    std::vector<std::pair<std::string, std::vector<double>>> extra_columns;
    std::size_t optimum_index = 0;
    bool boundary_optimum = false;
    std::map<std::string, std::string> metadata;
};

// Builds the aggregate FPT distribution implied by cfg and mob.
fpt::FptDistribution distribution_for(const link::SystemConfig& cfg,
                                      const fpt::MobilityParams& mob,
                                      const AnalysisOptions& opt);

// Metrics for one scheme at one configuration (Periodic T_U per opt).
schemes::LinkMetrics evaluate(const link::SystemConfig& cfg,
                              const fpt::MobilityParams& mob, Scheme scheme,
                              const AnalysisOptions& opt);

struct UpdatePeriodOptimum {
    double t_u;
    double outage;
    bool boundary;
};

// argmin of p_O2 over T_U in [1 ms, 10 s], log-spaced grid + refinement.
UpdatePeriodOptimum optimize_update_period(const link::SystemConfig& cfg,
                                           const fpt::MobilityParams& mob,
                                           const AnalysisOptions& opt = {});

struct ArrayOptimum {
    int n;
    double mean_se;
};

// Exhaustive integer scan of mean SE over n_ue in [1, min(100, n_ap)].
ArrayOptimum optimize_array_ue(const link::SystemConfig& cfg,
                               const fpt::MobilityParams& mob, Scheme scheme,
                               const AnalysisOptions& opt = {});

// Adaptive integer scan of mean SE over n_ap in [max(10, n_ue), 1100]:
// coarse 10-step pass, then +-10 refinement around the best point.
ArrayOptimum optimize_array_ap(const link::SystemConfig& cfg,
                               const fpt::MobilityParams& mob, Scheme scheme,
                               const AnalysisOptions& opt = {});

struct Range {
    double lo;
    double hi;
    int steps;
    bool log_spaced = false;

    std::vector<double> values() const;
};

SweepResult sweep(SweepAxis axis, const Range& range,
                  const link::SystemConfig& cfg, const fpt::MobilityParams& mob,
                  Scheme scheme, Metric metric, const AnalysisOptions& opt = {});

// Per distance: jointly optimized (n_ap, n_ue, and T_U for Periodic)
// mean capacity for both schemes, plus the aligned-state bound at the
// fixed reference arrays.
SweepResult capacity_envelope(const link::SystemConfig& cfg_template,
                              const fpt::MobilityParams& mob,
                              const Range& d_range,
                              const AnalysisOptions& opt = {});

void write_csv(std::ostream& os, const SweepResult& r);
std::string to_json(const SweepResult& r);

} // namespace thz::sweep

#endif
