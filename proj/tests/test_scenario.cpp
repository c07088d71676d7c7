// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thz/errors.hpp"
#include "thz/scenario.hpp"

using namespace thz;

TEST_CASE("empty text yields the reference default scenario") {
    const auto s = scenario::parse_scenario_text("");
    CHECK(s.system.carrier_freq == doctest::Approx(0.3e12));
    CHECK(s.system.bandwidth == doctest::Approx(50e9));
    CHECK(s.system.tx_power == doctest::Approx(0.1).epsilon(1e-12)); // 20 dBm
    CHECK(s.system.beam_step_delay == doctest::Approx(5e-6));
    CHECK(s.system.distance == doctest::Approx(10.0));
    CHECK(s.system.n_ap == 100);
    CHECK(s.system.n_ue == 20);
    CHECK(s.mobility.dx == doctest::Approx(0.1));
    CHECK(s.mobility.dphi == doctest::Approx(4.0 * 3.14159265358979 / 180.0));
    CHECK(s.scheme == sweep::Scheme::OnDemand);
    CHECK(s.mu == fpt::MuConvention::MomentMatched);
    CHECK(s.mode == fpt::AggregateMode::LognormalApprox);
    CHECK_FALSE(s.t_u.has_value());
}

TEST_CASE("unit conversions at the parse boundary") {
    const auto s = scenario::parse_scenario_text(R"({
        "system": {"frequency_ghz": 140, "tx_power_dbm": 23,
                   "beam_step_delay_us": 2.5, "detection_delay_ms": 1.5},
        "mobility": {"dphi_deg": 3},
        "scheme": {"type": "periodic", "t_u_ms": 250}
    })");
    CHECK(s.system.carrier_freq == doctest::Approx(1.4e11));
    CHECK(s.system.tx_power == doctest::Approx(0.1995262315).epsilon(1e-9));
    CHECK(s.system.beam_step_delay == doctest::Approx(2.5e-6));
    CHECK(s.system.detection_delay == doctest::Approx(1.5e-3));
    CHECK(s.mobility.dphi == doctest::Approx(0.0523599).epsilon(1e-6));
    CHECK(s.scheme == sweep::Scheme::Periodic);
    REQUIRE(s.t_u.has_value());
    CHECK(*s.t_u == doctest::Approx(0.25));
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"system": {"bogus": 1}})"),
                    ParseError);
    CHECK_THROWS_AS(scenario::parse_scenario_text(R"({"extra_section": {}})"),
                    ParseError);
}

TEST_CASE("malformed json and bad enums raise ParseError") {
    CHECK_THROWS_AS(scenario::parse_scenario_text("{not json"), ParseError);
    CHECK_THROWS_AS(
        scenario::parse_scenario_text(R"({"scheme": {"type": "sometimes"}})"),
        ParseError);
    CHECK_THROWS_AS(scenario::parse_scenario_text(
                        R"({"flags": {"aggregate_mode": "guess"}})"),
                    ParseError);
}

TEST_CASE("invariant violations raise ValidationError with the field name") {
    try {
        scenario::parse_scenario_text(R"({"system": {"bandwidth_ghz": -50}})");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "bandwidth");
    }
}

TEST_CASE("flags select conventions and calibration") {
    const auto s = scenario::parse_scenario_text(R"({
        "flags": {"mu_convention": "direct", "aggregate_mode": "exact",
                  "calibration_target_se": 17.0}
    })");
    CHECK(s.mu == fpt::MuConvention::Direct);
    CHECK(s.mode == fpt::AggregateMode::ExactSeries);
    REQUIRE(s.calibration_target_se.has_value());
    CHECK(s.system.noise_scale != doctest::Approx(1.0));
}

TEST_CASE("round trip: parse(emit(s)) == s") {
    const auto s = scenario::parse_scenario_text(R"({
        "system": {"frequency_ghz": 140, "distance_m": 3.5, "n_ue": 16},
        "mobility": {"dx_m": 0.01, "dphi_deg": 3},
        "scheme": {"type": "periodic", "t_u_ms": 120},
        "flags": {"aggregate_mode": "exact"}
    })");
    const auto t = scenario::parse_scenario_text(scenario::emit_scenario(s));
    CHECK(t.system.carrier_freq == doctest::Approx(s.system.carrier_freq));
    CHECK(t.system.distance == doctest::Approx(s.system.distance));
    CHECK(t.system.n_ue == s.system.n_ue);
    CHECK(t.mobility.dx == doctest::Approx(s.mobility.dx));
    CHECK(t.mobility.dphi == doctest::Approx(s.mobility.dphi));
    CHECK(t.scheme == s.scheme);
    REQUIRE(t.t_u.has_value());
    CHECK(*t.t_u == doctest::Approx(*s.t_u));
    CHECK(t.mode == s.mode);
    CHECK(t.mu == s.mu);
    // Canonical form is a fixed point of emit(parse(.)).
    CHECK(scenario::emit_scenario(t) == scenario::emit_scenario(s));
}

TEST_CASE("analysis options reflect the scenario") {
    const auto fixed = scenario::parse_scenario_text(
        R"({"scheme": {"type": "periodic", "t_u_ms": 200}})");
    const auto opt = fixed.analysis_options();
    CHECK_FALSE(opt.optimize_t_u);
    CHECK(opt.t_u == doctest::Approx(0.2));

    const auto open = scenario::parse_scenario_text(
        R"({"scheme": {"type": "periodic"}})");
    CHECK(open.analysis_options().optimize_t_u);
}
