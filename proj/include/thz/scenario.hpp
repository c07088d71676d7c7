// SPDX-License-Identifier: Apache-2.0
//
// Scenario files: JSON in user-facing units (GHz, dBm, degrees, ms, us),
// converted at this boundary into the SI structs the library uses.
#ifndef THZ_SCENARIO_HPP
#define THZ_SCENARIO_HPP

#include <optional>
#include <string>

#include "thz/fpt.hpp"
#include "thz/linkbudget.hpp"
#include "thz/sweep.hpp"

namespace thz::scenario {

struct ScenarioFile {
    link::SystemConfig system;     // SI units
    fpt::MobilityParams mobility;  // m and rad
    sweep::Scheme scheme = sweep::Scheme::OnDemand;
    std::optional<double> t_u;     // s, Periodic update period when fixed
    fpt::MuConvention mu = fpt::MuConvention::MomentMatched;
    fpt::AggregateMode mode = fpt::AggregateMode::LognormalApprox;
    std::optional<double> calibration_target_se; // bit/s/Hz at the reference point

    // Applies calibration (when requested) and validates all invariants.
    void finalize();

    sweep::AnalysisOptions analysis_options() const;
};

// Default scenario: 0.3 THz, 50 GHz, 20 dBm, delta = 5 us, d = 10 m,
// 100x100 / 20x20 arrays, dx = dy = 0.1 m, dphi = dtheta = 4 deg.
ScenarioFile default_scenario();

// Parses a scenario JSON file. Unknown keys are rejected. Missing fields
// fall back to the defaults above. Throws ParseError / ValidationError.
ScenarioFile parse_scenario(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text);

// Canonical JSON echo in file units; parse(emit(s)) == s.
std::string emit_scenario(const ScenarioFile& s);

} // namespace thz::scenario

#endif
