// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thz/errors.hpp"
#include "thz/linkbudget.hpp"

using namespace thz;

TEST_CASE("dBm conversions") {
    CHECK(link::dbm_to_watt(20.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(link::dbm_to_watt(0.0) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(link::watt_to_dbm(link::dbm_to_watt(7.3)) ==
          doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("beamwidth of the sectored pattern") {
    // Oracle: 102 deg / N in radians, direct arithmetic.
    CHECK(link::beamwidth(100) == doctest::Approx(0.0178024).epsilon(1e-5));
    CHECK(link::beamwidth(1) == doctest::Approx(1.7802358).epsilon(1e-6));
    CHECK(link::gain(20) == doctest::Approx(400.0));
}

TEST_CASE("misalignment boundaries at the reference geometry") {
    link::SystemConfig cfg; // d=10, n_ap=100, n_ue=20
    const auto b = link::misalignment_boundaries(cfg);
    CHECK(b.m_xy == doctest::Approx(0.089012).epsilon(1e-5));
    CHECK(b.m_angle == doctest::Approx(0.053407).epsilon(1e-5));
}

TEST_CASE("alignment duration of the sequential sweep") {
    link::SystemConfig cfg;
    CHECK(link::alignment_duration(cfg) == doctest::Approx(0.052).epsilon(1e-12));
    cfg.detection_delay = 0.003;
    CHECK(link::alignment_duration(cfg) == doctest::Approx(0.055).epsilon(1e-12));
}

TEST_CASE("snr and capacity are consistent") {
    link::SystemConfig cfg;
    const double s = link::snr(cfg);
    CHECK(s > 0.0);
    const auto c = link::se_capacity_max(cfg);
    CHECK(c.se == doctest::Approx(std::log2(1.0 + s)).epsilon(1e-12));
    CHECK(c.capacity == doctest::Approx(cfg.bandwidth * c.se).epsilon(1e-12));
}

TEST_CASE("snr scales as expected with the link budget knobs") {
    link::SystemConfig cfg;
    const double base = link::snr(cfg);
    link::SystemConfig twice_power = cfg;
    twice_power.tx_power *= 2.0;
    CHECK(link::snr(twice_power) == doctest::Approx(2.0 * base).epsilon(1e-12));

    link::SystemConfig farther = cfg;
    farther.distance = 20.0;
    const double expected = base * std::exp(-cfg.absorption_coeff * 10.0) / 4.0;
    CHECK(link::snr(farther) == doctest::Approx(expected).epsilon(1e-12));

    link::SystemConfig bigger_array = cfg;
    bigger_array.n_ue = 40;
    CHECK(link::snr(bigger_array) == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("validation rejects bad fields by name") {
    link::SystemConfig cfg;
    cfg.bandwidth = -1.0;
    try {
        cfg.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "bandwidth");
    }
    link::SystemConfig cfg2;
    cfg2.n_ap = 0;
    CHECK_THROWS_AS(cfg2.validate(), ValidationError);
}

TEST_CASE("noise calibration pins the reference spectral efficiency") {
    link::SystemConfig cfg;
    link::calibrate_noise(cfg, 17.0);
    link::SystemConfig ref = cfg;
    ref.distance = 10.0;
    ref.n_ap = 100;
    ref.n_ue = 21;
    CHECK(link::se_capacity_max(ref).se == doctest::Approx(17.0).epsilon(1e-9));
    // Calibration only rescales the noise; geometry quantities are untouched.
    CHECK(link::misalignment_boundaries(cfg).m_xy ==
          doctest::Approx(0.089012).epsilon(1e-5));
}
