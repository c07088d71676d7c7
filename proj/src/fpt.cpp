// SPDX-License-Identifier: Apache-2.0
#include "thz/fpt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "thz/errors.hpp"

namespace thz::fpt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLog53 = 0.51082562376599068; // log(5/3)
constexpr double kUnderflowExp = -745.0;
} // namespace

void MobilityParams::validate() const {
    if (dx < 0) throw ValidationError("dx", "must be >= 0");
    if (dy < 0) throw ValidationError("dy", "must be >= 0");
    if (dphi < 0) throw ValidationError("dphi", "must be >= 0");
    if (dtheta < 0) throw ValidationError("dtheta", "must be >= 0");
    if (active_axes() == 0)
        throw DegenerateInput("MobilityParams: all axes disabled");
}

int MobilityParams::active_axes() const {
    return (dx > 0) + (dy > 0) + (dphi > 0) + (dtheta > 0);
}

DiffusionCoeffs DiffusionCoeffs::from(const MobilityParams& mob) {
    return {0.5 * mob.dx * mob.dx, 0.5 * mob.dy * mob.dy,
            0.5 * mob.dphi * mob.dphi, 0.5 * mob.dtheta * mob.dtheta};
}

struct FptDistribution::Impl {
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    DistKind kind;
    num::QuadratureSpec quad;
    std::optional<double> closed_mean;
    // Characteristic timescale used to place quadrature break points so the
    // adaptive rule cannot step over a narrowly concentrated density.
    double scale_hint = 1.0;

    mutable std::once_flag mean_once;
    mutable double mean_value = 0.0;
};

double FptDistribution::pdf(double t) const {
    if (t < kTMin || t > kTMax) return 0.0;
    return std::max(impl_->pdf(t), 0.0);
}

double FptDistribution::cdf(double t) const {
    if (t < kTMin) return 0.0;
    if (t > kTMax) return 1.0;
    return std::clamp(impl_->cdf(t), 0.0, 1.0);
}

double FptDistribution::mean() const {
    if (impl_->closed_mean) return *impl_->closed_mean;
    std::call_once(impl_->mean_once, [this] {
        const double s = impl_->scale_hint;
        double total = 0.0;
        double a = 0.0;
        for (double cut : {s / 100.0, s, 100.0 * s}) {
            total += num::integrate([this](double t) { return t * pdf(t); }, a,
                                    cut, impl_->quad);
            a = cut;
        }
        total += num::integrate([this](double t) { return t * pdf(t); }, a,
                                num::kInfinity, impl_->quad);
        impl_->mean_value = total;
    });
    return impl_->mean_value;
}

DistKind FptDistribution::kind() const { return impl_->kind; }

namespace {

// Crossover between the image series (fast for small D t / M^2) and the
// spectral eigenfunction series (fast for large D t / M^2).
constexpr double kSeriesCrossover = 0.5;

// Spectral form of the two-sided FPT density,
//   f(t) = (pi D / M^2) sum_{n>=0} (-1)^n (2n+1)
//          exp(-(2n+1)^2 pi^2 D t / (4 M^2)),
// and its term-by-term integral for the cdf. Alternating with
// super-exponentially decaying terms, so a handful of terms suffice for
// D t / M^2 above the crossover.
double spectral_sum(double tau, bool density, const num::SeriesSpec& spec) {
    const double rate = kPi * kPi * tau / 4.0;
    double sum = 0.0;
    for (int n = 0; n < spec.max_terms; ++n) {
        const double k = 2.0 * n + 1.0;
        const double e = std::exp(-k * k * rate);
        const double term = (n % 2 == 0 ? 1.0 : -1.0) *
                            (density ? k * e : e / k);
        sum += term;
        if (std::abs(term) < spec.term_tol) return sum;
    }
    throw NonConvergence("spectral_sum: term_tol not reached");
}

} // namespace

double fpt_pdf_exact(double boundary, double diffusion, double t,
                     const num::SeriesSpec& spec) {
    if (!(boundary > 0) || !(diffusion > 0))
        throw DomainError("fpt_pdf_exact: boundary and diffusion must be > 0");
    if (!(t > 0)) throw DomainError("fpt_pdf_exact: t must be > 0");
    const double m2 = boundary * boundary;
    const double tau = diffusion * t / m2;
    if (tau > kSeriesCrossover)
        return kPi * diffusion / m2 * spectral_sum(tau, true, spec);
    const double m2_4dt = boundary * boundary / (4.0 * diffusion * t);
    const double log_pref = -0.5 * std::log(kPi * diffusion * t * t * t);
    return num::sum_symmetric_series(
        [&](long n) {
            const double k = 4.0 * n + 1.0;
            // exponent evaluated in log space; hard zero below underflow
            const double e = std::log(boundary * std::abs(k)) + log_pref -
                             m2_4dt * k * k;
            if (e < kUnderflowExp) return 0.0;
            return (k < 0 ? -1.0 : 1.0) * std::exp(e);
        },
        spec);
}

double fpt_cdf_exact(double boundary, double diffusion, double t,
                     const num::SeriesSpec& spec) {
    if (!(boundary > 0) || !(diffusion > 0))
        throw DomainError("fpt_cdf_exact: boundary and diffusion must be > 0");
    if (t < 0) throw DomainError("fpt_cdf_exact: t must be >= 0");
    if (t == 0) return 0.0;
    const double tau = diffusion * t / (boundary * boundary);
    if (tau > kSeriesCrossover)
        return std::clamp(1.0 - 4.0 / kPi * spectral_sum(tau, false, spec),
                          0.0, 1.0);
    // Term-by-term integral of the pdf series:
    //   F(t) = sum_n 2 sgn(4n+1) erfc(|4n+1| M / (2 sqrt(D t))).
    const double scale = boundary / (2.0 * std::sqrt(diffusion * t));
    const double v = num::sum_symmetric_series(
        [&](long n) {
            const double k = 4.0 * n + 1.0;
            return 2.0 * (k < 0 ? -1.0 : 1.0) * std::erfc(std::abs(k) * scale);
        },
        spec);
    return std::clamp(v, 0.0, 1.0);
}

std::pair<double, double> fpt_moments(double boundary, double diffusion) {
    if (!(boundary > 0) || !(diffusion > 0))
        throw DomainError("fpt_moments: boundary and diffusion must be > 0");
    const double m2 = boundary * boundary;
    const double mean = m2 / (2.0 * diffusion);
    const double var = m2 * m2 / (6.0 * diffusion * diffusion);
    return {mean, var};
}

LognormalParams lognormal_surrogate(double boundary, double displacement,
                                    MuConvention conv) {
    if (!(boundary > 0) || !(displacement > 0))
        throw DomainError("lognormal_surrogate: boundary and displacement must be > 0");
    const double ratio = boundary / displacement;
    const double mu = conv == MuConvention::MomentMatched
                          ? std::log(ratio * ratio) - 0.5 * kLog53
                          : std::log(2.0 * boundary / displacement) - 0.5 * kLog53;
    return {mu, std::sqrt(kLog53)};
}

FptDistribution FptDistribution::exact_series(double boundary, double diffusion,
                                              const num::SeriesSpec& series,
                                              const num::QuadratureSpec& quad) {
    if (!(boundary > 0) || !(diffusion > 0))
        throw DomainError("exact_series: boundary and diffusion must be > 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = DistKind::ExactSeries;
    impl->quad = quad;
    impl->closed_mean = boundary * boundary / (2.0 * diffusion);
    impl->scale_hint = *impl->closed_mean;
    impl->pdf = [boundary, diffusion, series](double t) {
        return fpt_pdf_exact(boundary, diffusion, t, series);
    };
    impl->cdf = [boundary, diffusion, series](double t) {
        return fpt_cdf_exact(boundary, diffusion, t, series);
    };
    return FptDistribution(std::move(impl));
}

FptDistribution FptDistribution::lognormal(const LognormalParams& p,
                                           const num::QuadratureSpec& quad) {
    if (!(p.sigma > 0)) throw DomainError("lognormal: sigma must be > 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = DistKind::Lognormal;
    impl->quad = quad;
    const double mu = p.mu, sigma = p.sigma;
    impl->pdf = [mu, sigma](double t) {
        const double z = (std::log(t) - mu) / sigma;
        const double e = -0.5 * z * z;
        if (e < kUnderflowExp) return 0.0;
        return std::exp(e) / (sigma * t * std::sqrt(2.0 * kPi));
    };
    impl->cdf = [mu, sigma](double t) {
        return 0.5 * std::erfc((mu - std::log(t)) / (sigma * std::sqrt(2.0)));
    };
    impl->closed_mean = std::exp(mu + 0.5 * sigma * sigma);
    impl->scale_hint = *impl->closed_mean;
    return FptDistribution(std::move(impl));
}

FptDistribution FptDistribution::min_of_two(const FptDistribution& a,
                                            const FptDistribution& b) {
    auto impl = std::make_shared<Impl>();
    impl->kind = DistKind::MinOfTwo;
    impl->quad = a.impl_->quad;
    impl->scale_hint = std::min(a.impl_->scale_hint, b.impl_->scale_hint);
    const FptDistribution da = a, db = b;
    impl->pdf = [da, db](double t) {
        return da.pdf(t) * (1.0 - db.cdf(t)) + db.pdf(t) * (1.0 - da.cdf(t));
    };
    impl->cdf = [da, db](double t) {
        return 1.0 - (1.0 - da.cdf(t)) * (1.0 - db.cdf(t));
    };
    return FptDistribution(std::move(impl));
}

FptDistribution aggregate_distribution(const MobilityParams& mob,
                                       const link::Boundaries& bounds,
                                       AggregateMode mode, MuConvention conv,
                                       const num::SeriesSpec& series,
                                       const num::QuadratureSpec& quad) {
    mob.validate();
    if (!(bounds.m_xy > 0) || !(bounds.m_angle > 0))
        throw DomainError("aggregate_distribution: boundaries must be > 0");

    const DiffusionCoeffs d = DiffusionCoeffs::from(mob);
    struct Axis {
        double boundary, displacement, diffusion;
    };
    std::vector<Axis> axes;
    if (mob.dx > 0) axes.push_back({bounds.m_xy, mob.dx, d.x});
    if (mob.dy > 0) axes.push_back({bounds.m_xy, mob.dy, d.y});
    if (mob.dphi > 0) axes.push_back({bounds.m_angle, mob.dphi, d.phi});
    if (mob.dtheta > 0) axes.push_back({bounds.m_angle, mob.dtheta, d.theta});

    std::optional<FptDistribution> agg;
    for (const Axis& ax : axes) {
        FptDistribution comp =
            mode == AggregateMode::LognormalApprox
                ? FptDistribution::lognormal(
                      lognormal_surrogate(ax.boundary, ax.displacement, conv), quad)
                : FptDistribution::exact_series(ax.boundary, ax.diffusion, series,
                                                quad);
        agg = agg ? FptDistribution::min_of_two(*agg, comp) : comp;
    }
    agg->impl_->kind = DistKind::Aggregate;
    return *agg;
}

double mean_time(const FptDistribution& dist) { return dist.mean(); }

} // namespace thz::fpt
