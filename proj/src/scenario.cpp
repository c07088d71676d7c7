// SPDX-License-Identifier: Apache-2.0
#include "thz/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "thz/errors.hpp"

namespace thz::scenario {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key))
            throw ParseError("unknown key \"" + key + "\" in " + where);
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ParseError(std::string("field \"") + key + "\" must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ParseError(std::string("field \"") + key + "\" must be an integer");
    return obj[key].get<int>();
}

} // namespace

ScenarioFile default_scenario() {
    ScenarioFile s;
    s.mobility = {0.1, 0.1, 4.0 * kDegToRad, 4.0 * kDegToRad};
    return s; // SystemConfig defaults already carry the reference values
}

void ScenarioFile::finalize() {
    if (calibration_target_se) link::calibrate_noise(system, *calibration_target_se);
    system.validate();
    mobility.validate();
    if (t_u && !(*t_u > 0)) throw ValidationError("t_u", "must be > 0");
}

sweep::AnalysisOptions ScenarioFile::analysis_options() const {
    sweep::AnalysisOptions o;
    o.mode = mode;
    o.mu = mu;
    if (t_u) {
        o.optimize_t_u = false;
        o.t_u = *t_u;
    }
    return o;
}

ScenarioFile parse_scenario_text(const std::string& text) {
    json j;
    try {
        j = text.empty() ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object()) throw ParseError("scenario root must be a JSON object");
    reject_unknown(j, "scenario", {"system", "mobility", "scheme", "flags"});

    ScenarioFile s = default_scenario();

    if (j.contains("system")) {
        const json& sys = j["system"];
        reject_unknown(sys, "system",
                       {"frequency_ghz", "bandwidth_ghz", "tx_power_dbm",
                        "absorption_per_m", "distance_m", "n_ap", "n_ue",
                        "beam_step_delay_us", "detection_delay_ms",
                        "noise_temp_k", "noise_figure_db"});
        link::SystemConfig& c = s.system;
        c.carrier_freq = get_num(sys, "frequency_ghz", c.carrier_freq / 1e9) * 1e9;
        c.bandwidth = get_num(sys, "bandwidth_ghz", c.bandwidth / 1e9) * 1e9;
        c.tx_power =
            link::dbm_to_watt(get_num(sys, "tx_power_dbm", link::watt_to_dbm(c.tx_power)));
        c.absorption_coeff = get_num(sys, "absorption_per_m", c.absorption_coeff);
        c.distance = get_num(sys, "distance_m", c.distance);
        c.n_ap = get_int(sys, "n_ap", c.n_ap);
        c.n_ue = get_int(sys, "n_ue", c.n_ue);
        c.beam_step_delay =
            get_num(sys, "beam_step_delay_us", c.beam_step_delay * 1e6) * 1e-6;
        c.detection_delay =
            get_num(sys, "detection_delay_ms", c.detection_delay * 1e3) * 1e-3;
        c.noise_temp = get_num(sys, "noise_temp_k", c.noise_temp);
        c.noise_figure_db = get_num(sys, "noise_figure_db", c.noise_figure_db);
    }

    if (j.contains("mobility")) {
        const json& mob = j["mobility"];
        reject_unknown(mob, "mobility", {"dx_m", "dy_m", "dphi_deg", "dtheta_deg"});
        s.mobility.dx = get_num(mob, "dx_m", s.mobility.dx);
        s.mobility.dy = get_num(mob, "dy_m", s.mobility.dy);
        s.mobility.dphi = get_num(mob, "dphi_deg", s.mobility.dphi / kDegToRad) * kDegToRad;
        s.mobility.dtheta =
            get_num(mob, "dtheta_deg", s.mobility.dtheta / kDegToRad) * kDegToRad;
    }

    if (j.contains("scheme")) {
        const json& sch = j["scheme"];
        reject_unknown(sch, "scheme", {"type", "t_u_ms"});
        if (sch.contains("type")) {
            const std::string type = sch["type"].get<std::string>();
            if (type == "on_demand")
                s.scheme = sweep::Scheme::OnDemand;
            else if (type == "periodic")
                s.scheme = sweep::Scheme::Periodic;
            else
                throw ParseError("scheme.type must be on_demand or periodic");
        }
        if (sch.contains("t_u_ms")) s.t_u = get_num(sch, "t_u_ms", 0.0) * 1e-3;
    }

    if (j.contains("flags")) {
        const json& fl = j["flags"];
        reject_unknown(fl, "flags",
                       {"mu_convention", "aggregate_mode", "calibration_target_se"});
        if (fl.contains("mu_convention")) {
            const std::string v = fl["mu_convention"].get<std::string>();
            if (v == "moment_matched")
                s.mu = fpt::MuConvention::MomentMatched;
            else if (v == "direct")
                s.mu = fpt::MuConvention::Direct;
            else
                throw ParseError("flags.mu_convention must be moment_matched or direct");
        }
        if (fl.contains("aggregate_mode")) {
            const std::string v = fl["aggregate_mode"].get<std::string>();
            if (v == "lognormal")
                s.mode = fpt::AggregateMode::LognormalApprox;
            else if (v == "exact")
                s.mode = fpt::AggregateMode::ExactSeries;
            else
                throw ParseError("flags.aggregate_mode must be lognormal or exact");
        }
        if (fl.contains("calibration_target_se"))
            s.calibration_target_se = get_num(fl, "calibration_target_se", 0.0);
    }

    s.finalize();
    return s;
}

ScenarioFile parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string emit_scenario(const ScenarioFile& s) {
    json j;
    const link::SystemConfig& c = s.system;
    j["system"] = {{"frequency_ghz", c.carrier_freq / 1e9},
                   {"bandwidth_ghz", c.bandwidth / 1e9},
                   {"tx_power_dbm", link::watt_to_dbm(c.tx_power)},
                   {"absorption_per_m", c.absorption_coeff},
                   {"distance_m", c.distance},
                   {"n_ap", c.n_ap},
                   {"n_ue", c.n_ue},
                   {"beam_step_delay_us", c.beam_step_delay * 1e6},
                   {"detection_delay_ms", c.detection_delay * 1e3},
                   {"noise_temp_k", c.noise_temp},
                   {"noise_figure_db", c.noise_figure_db}};
    j["mobility"] = {{"dx_m", s.mobility.dx},
                     {"dy_m", s.mobility.dy},
                     {"dphi_deg", s.mobility.dphi / kDegToRad},
                     {"dtheta_deg", s.mobility.dtheta / kDegToRad}};
    j["scheme"]["type"] = sweep::to_string(s.scheme);
    if (s.t_u) j["scheme"]["t_u_ms"] = *s.t_u * 1e3;
    j["flags"]["mu_convention"] =
        s.mu == fpt::MuConvention::MomentMatched ? "moment_matched" : "direct";
    j["flags"]["aggregate_mode"] =
        s.mode == fpt::AggregateMode::LognormalApprox ? "lognormal" : "exact";
    if (s.calibration_target_se)
        j["flags"]["calibration_target_se"] = *s.calibration_target_se;
    return j.dump(2);
}

} // namespace thz::scenario
