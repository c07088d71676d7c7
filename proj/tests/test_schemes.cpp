// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thz/fpt.hpp"
#include "thz/linkbudget.hpp"
#include "thz/schemes.hpp"

using namespace thz;

namespace {
constexpr double kM = 0.089012;
constexpr double kD = 0.005;
constexpr double kTB = 0.052;

fpt::FptDistribution exact_axis() {
    return fpt::FptDistribution::exact_series(kM, kD);
}
} // namespace

TEST_CASE("scheme 1 outage: frozen quadrature oracles") {
    // Oracles: independent adaptive quadrature of T_B/(t+T_B) f(t).
    CHECK(schemes::outage_scheme1(exact_axis(), kTB) ==
          doctest::Approx(0.10062311732273882).epsilon(1e-7));
    const auto ln =
        fpt::FptDistribution::lognormal(fpt::lognormal_surrogate(kM, 0.1));
    CHECK(schemes::outage_scheme1(ln, kTB) ==
          doctest::Approx(0.09367857846379088).epsilon(1e-7));
}

TEST_CASE("scheme 1 outage: limits and monotonicity in T_B") {
    const auto dist = exact_axis();
    const double p_small = schemes::outage_scheme1(dist, 1e-6);
    const double p_mid = schemes::outage_scheme1(dist, kTB);
    const double p_big = schemes::outage_scheme1(dist, 50.0);
    CHECK(p_small < p_mid);
    CHECK(p_mid < p_big);
    CHECK(p_small < 1e-3);
    CHECK(p_big > 0.9);
}

TEST_CASE("scheme 1 renewal form sits below the averaged-fraction form") {
    // E[T_B/(T+T_B)] >= T_B/(E[T]+T_B) by Jensen (convex in T).
    const auto dist = exact_axis();
    const double renewal = schemes::outage_scheme1_renewal(dist, kTB);
    CHECK(renewal == doctest::Approx(kTB / (0.7923136144 + kTB)).epsilon(1e-6));
    CHECK(schemes::outage_scheme1(dist, kTB) >= renewal);
}

TEST_CASE("scheme 2 outage: frozen quadrature oracle at T_U = 0.2") {
    CHECK(schemes::outage_scheme2(exact_axis(), kTB, 0.2) ==
          doctest::Approx(0.22518858391898758).epsilon(1e-7));
}

TEST_CASE("scheme 2 outage approaches T_B/(T_U+T_B) for tiny T_U") {
    // With T_U far below typical first-passage times the link never drops
    // within a cycle and the outage is just the realignment duty cycle.
    const auto dist = exact_axis();
    const double t_u = 1e-4;
    CHECK(schemes::outage_scheme2(dist, kTB, t_u) ==
          doctest::Approx(kTB / (t_u + kTB)).epsilon(1e-4));
}

TEST_CASE("scheme 2 mean time to first misalignment: frozen oracle") {
    CHECK(schemes::mean_first_misalignment_scheme2(exact_axis(), kTB, 0.2) ==
          doctest::Approx(2.60375492789016).epsilon(1e-7));
}

TEST_CASE("scheme 2 mean time diverges when T_U is below the support") {
    // A lognormal cdf is strictly positive, so use a tiny T_U where the
    // exact cdf underflows to zero instead.
    const auto dist = exact_axis();
    const double v =
        schemes::mean_first_misalignment_scheme2(dist, kTB, 1e-7);
    CHECK(std::isinf(v));
}

TEST_CASE("scheme 2 waits at least as long as scheme 1 for misalignment") {
    // E[T_2] >= E[T_1]: periodic realignment can only delay the first
    // misalignment relative to free-running mobility.
    const auto dist = exact_axis();
    const double e1 = dist.mean();
    for (double t_u : {0.05, 0.2, 1.0, 5.0})
        CHECK(schemes::mean_first_misalignment_scheme2(dist, kTB, t_u) >=
              e1 * (1.0 - 1e-9));
}

TEST_CASE("metrics glue: SE and capacity follow the outage fraction") {
    link::SystemConfig cfg;
    const auto dist = exact_axis();
    const auto cap = link::se_capacity_max(cfg);

    const auto m1 = schemes::metrics_scheme1(cfg, dist);
    CHECK(m1.outage_fraction > 0.0);
    CHECK(m1.outage_fraction < 1.0);
    CHECK(m1.mean_se ==
          doctest::Approx((1.0 - m1.outage_fraction) * cap.se).epsilon(1e-12));
    CHECK(m1.mean_capacity ==
          doctest::Approx(cfg.bandwidth * m1.mean_se).epsilon(1e-12));
    CHECK(m1.mean_time_to_misalignment == doctest::Approx(dist.mean()));
    CHECK_FALSE(m1.mean_time_diverges);

    const auto m2 = schemes::metrics_scheme2(cfg, dist, 0.2);
    CHECK(m2.outage_fraction ==
          doctest::Approx(schemes::outage_scheme2(dist, 0.052, 0.2)));
    CHECK(m2.mean_se ==
          doctest::Approx((1.0 - m2.outage_fraction) * cap.se).epsilon(1e-12));
    CHECK(m2.mean_time_to_misalignment >= m1.mean_time_to_misalignment);
}
