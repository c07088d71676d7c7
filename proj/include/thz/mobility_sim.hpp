// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo oracle for the four-axis Brownian micro-mobility: empirical
// first-passage times, end-to-end realignment scheme simulation, and
// chi-square goodness-of-fit testing against analytic distributions.
#ifndef THZ_MOBILITY_SIM_HPP
#define THZ_MOBILITY_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "thz/fpt.hpp"
#include "thz/linkbudget.hpp"

namespace thz::sim {

struct SimSpec {
    double dt = 0.0;        // s; 0 selects min(per-axis mean FPT) / 1e4
    std::size_t n_trials = 100000;
    double horizon = 0.0;   // s; 0 selects 20x the shortest per-axis mean FPT
    std::uint64_t seed = 1;

    void validate() const;
};

enum class Cause : std::uint8_t { X, Y, Phi, Theta, Periodic };

const char* to_string(Cause c);

struct FptSamples {
    std::vector<double> times;   // uncensored first-passage times, s
    std::vector<Cause> causes;   // axis that crossed first, same order
    std::size_t censored = 0;    // trials that exceeded the horizon
    double dt = 0.0;             // step actually used
    double horizon = 0.0;
};

// One realignment event, for the optional trace dump.
struct RealignmentEvent {
    std::size_t trial_id;
    double event_time; // s, within the trial
    Cause cause;
};

struct SimulationTrace {
    double outage_fraction = 0.0;      // mean per-cycle outage fraction
    double time_average_outage = 0.0;  // outage time / simulated time
    double mean_throughput = 0.0;      // bit/s
    std::size_t realignment_count = 0;
    std::vector<double> first_misalignment_times; // s, one per trial
};

struct SchemeSpec {
    enum class Kind { OnDemand, Periodic } kind = Kind::OnDemand;
    double t_u = 0.2; // s, used by Periodic only
};

// Euler random walk with Gaussian increments (sd = Delta * sqrt(dt) per
// axis) and end-of-step boundary tests. One sample per trial; trials that
// survive the horizon are counted as censored.
FptSamples simulate_fpt(const fpt::MobilityParams& mob,
                        const link::Boundaries& bounds, const SimSpec& spec);

// Simulates realignment cycles until the horizon. outage_fraction is the
// mean over cycles of the per-cycle outage fraction, the quantity the
// analytic p_O expressions average; the plain time average is also kept.
SimulationTrace simulate_scheme(const SchemeSpec& scheme,
                                const link::SystemConfig& cfg,
                                const fpt::MobilityParams& mob,
                                const SimSpec& spec,
                                std::vector<RealignmentEvent>* events = nullptr);

struct GofResult {
    bool accept = false;
    double statistic = 0.0;
    int dof = 0;
    double critical = 0.0;
    int bins_used = 0;
};

// Pearson chi-square of samples against dist, with equiprobable bins under
// dist merged until every expected count is >= 5.
GofResult chi_square_gof(const std::vector<double>& samples,
                         const fpt::FptDistribution& dist, int bins,
                         double alpha);

// Draws n samples from dist by bisecting its cdf; exact in distribution
// (no time-discretization bias).
std::vector<double> sample_inverse_cdf(const fpt::FptDistribution& dist,
                                       std::size_t n, std::uint64_t seed);

// Worker count: THZLAB_THREADS when set, else hardware concurrency.
unsigned worker_count();

// Writes events as tab-separated rows: trial_id, event_time_s, cause.
void write_trace(std::ostream& os, const std::vector<RealignmentEvent>& events);

} // namespace thz::sim

#endif
