// SPDX-License-Identifier: Apache-2.0
//
// Time-to-misalignment distributions: exact Brownian first-passage series,
// moment-matched lognormal surrogate, minimum composition across mobility
// axes, and the aggregated four-axis distribution.
#ifndef THZ_FPT_HPP
#define THZ_FPT_HPP

#include <memory>
#include <utility>

#include "thz/linkbudget.hpp"
#include "thz/numerics.hpp"

namespace thz::fpt {

// Root-mean displacement per second on each mobility axis. An axis with
// zero displacement never causes misalignment and is excluded from the
// aggregate composition.
struct MobilityParams {
    double dx = 0.0;     // m
    double dy = 0.0;     // m
    double dphi = 0.0;   // rad
    double dtheta = 0.0; // rad

    void validate() const; // throws ValidationError / DegenerateInput
    int active_axes() const;
};

struct DiffusionCoeffs {
    double x, y, phi, theta; // D = Delta^2 / 2 per axis

    static DiffusionCoeffs from(const MobilityParams& mob);
};

struct LognormalParams {
    double mu;    // log-seconds
    double sigma; // > 0
};

enum class DistKind { ExactSeries, Lognormal, MinOfTwo, Aggregate };
enum class AggregateMode { LognormalApprox, ExactSeries };

// The printed surrogate location parameter log(2M/Delta) - log(5/3)/2 is
// kept selectable next to the moment-matched default.
enum class MuConvention { MomentMatched, Direct };

// Evaluatable time-to-misalignment distribution. Immutable; evaluation is
// pure and thread-safe. The mean is computed lazily (quadrature of t*pdf)
// and memoized with single-assignment semantics.
class FptDistribution {
public:
    double pdf(double t) const;
    double cdf(double t) const;
    double mean() const;
    DistKind kind() const;

    // pdf evaluation domain; outside, pdf is 0 and cdf clamps to 0/1.
    static constexpr double kTMin = 1e-9;
    static constexpr double kTMax = 1e6;

    static FptDistribution exact_series(double boundary, double diffusion,
                                        const num::SeriesSpec& series = {},
                                        const num::QuadratureSpec& quad = {});
    static FptDistribution lognormal(const LognormalParams& p,
                                     const num::QuadratureSpec& quad = {});
    static FptDistribution min_of_two(const FptDistribution& a,
                                      const FptDistribution& b);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    explicit FptDistribution(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

    friend FptDistribution aggregate_distribution(const MobilityParams&,
                                                  const link::Boundaries&,
                                                  AggregateMode, MuConvention,
                                                  const num::SeriesSpec&,
                                                  const num::QuadratureSpec&);
};

// Two-sided Brownian FPT pdf/cdf to +-boundary, evaluated through the
// symmetric image series.
double fpt_pdf_exact(double boundary, double diffusion, double t,
                     const num::SeriesSpec& spec = {});
double fpt_cdf_exact(double boundary, double diffusion, double t,
                     const num::SeriesSpec& spec = {});

// Closed-form FPT moments (mean, variance) = (M^2/2D, M^4/6D^2).
std::pair<double, double> fpt_moments(double boundary, double diffusion);

// Lognormal with the same first two moments as the FPT: sigma^2 = log(5/3),
// mu = log(M^2/Delta^2) - sigma^2/2. The Direct convention uses
// mu = log(2M/Delta) - sigma^2/2 instead.
LognormalParams lognormal_surrogate(double boundary, double displacement,
                                    MuConvention conv = MuConvention::MomentMatched);

// Minimum over the active axes of per-axis FPT distributions; Cartesian
// axes run against bounds.m_xy, angular axes against bounds.m_angle.
FptDistribution aggregate_distribution(
    const MobilityParams& mob, const link::Boundaries& bounds,
    AggregateMode mode = AggregateMode::LognormalApprox,
    MuConvention conv = MuConvention::MomentMatched,
    const num::SeriesSpec& series = {}, const num::QuadratureSpec& quad = {});

double mean_time(const FptDistribution& dist);

} // namespace thz::fpt

#endif
