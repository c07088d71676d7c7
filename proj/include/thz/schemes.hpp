// SPDX-License-Identifier: Apache-2.0
//
// Closed-form link metrics for on-demand (Scheme 1) and periodic
// (Scheme 2) beam realignment.
#ifndef THZ_SCHEMES_HPP
#define THZ_SCHEMES_HPP

#include "thz/fpt.hpp"
#include "thz/linkbudget.hpp"

namespace thz::schemes {

struct LinkMetrics {
    double outage_fraction;      // p_O in [0,1]
    double mean_se;              // bit/s/Hz, (1 - p_O) * L_max
    double mean_capacity;        // bit/s, B * mean_se
    double mean_time_to_misalignment; // s
    bool mean_time_diverges = false;  // Scheme 2 with F(T_U) = 0
};

// Fraction of time in outage with on-demand realignment:
//   p_O1 = E[ T_B / (T_A + T_B) ].
double outage_scheme1(const fpt::FptDistribution& dist, double t_b,
                      const num::QuadratureSpec& quad = {});

// Renewal-reward alternative E[T_B] / (E[T_A] + T_B), kept for comparison;
// the averaged-fraction form above is the authoritative one.
double outage_scheme1_renewal(const fpt::FptDistribution& dist, double t_b);

// Fraction of time in outage with periodic realignment every T_U + T_B.
double outage_scheme2(const fpt::FptDistribution& dist, double t_b, double t_u,
                      const num::QuadratureSpec& quad = {});

// Mean time to the first misalignment under periodic realignment,
//   (1-F(T_U))/F(T_U) * (T_U + T_B) + (1/F(T_U)) * int_0^T_U t f(t) dt.
// Returns +inf (and sets the diverges flag in metrics) when F(T_U) = 0.
double mean_first_misalignment_scheme2(const fpt::FptDistribution& dist,
                                       double t_b, double t_u,
                                       const num::QuadratureSpec& quad = {});

LinkMetrics metrics_scheme1(const link::SystemConfig& cfg,
                            const fpt::FptDistribution& dist,
                            const num::QuadratureSpec& quad = {});

LinkMetrics metrics_scheme2(const link::SystemConfig& cfg,
                            const fpt::FptDistribution& dist, double t_u,
                            const num::QuadratureSpec& quad = {});

} // namespace thz::schemes

#endif
