// SPDX-License-Identifier: Apache-2.0
#include "thz/linkbudget.hpp"

#include <cmath>

#include "thz/errors.hpp"

namespace thz::link {

namespace {
constexpr double kPi = 3.14159265358979323846;
// 102 deg in radians; half-power beamwidth constant of a uniform array.
constexpr double kPatternConst = 102.0 * kPi / 180.0;
} // namespace

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

double SystemConfig::noise_power() const {
    const double f_lin = std::pow(10.0, noise_figure_db / 10.0);
    return kBoltzmann * noise_temp * bandwidth * f_lin * noise_scale;
}

void SystemConfig::validate() const {
    if (!(carrier_freq > 0)) throw ValidationError("carrier_freq", "must be > 0");
    if (!(bandwidth > 0)) throw ValidationError("bandwidth", "must be > 0");
    if (!(tx_power > 0)) throw ValidationError("tx_power", "must be > 0");
    if (!(absorption_coeff >= 0))
        throw ValidationError("absorption_coeff", "must be >= 0");
    if (!(distance > 0)) throw ValidationError("distance", "must be > 0");
    if (n_ue < 1) throw ValidationError("n_ue", "must be >= 1");
    if (n_ap < n_ue) throw ValidationError("n_ap", "must be >= n_ue");
    if (!(beam_step_delay > 0))
        throw ValidationError("beam_step_delay", "must be > 0");
    if (!(detection_delay >= 0))
        throw ValidationError("detection_delay", "must be >= 0");
    if (!(noise_temp > 0)) throw ValidationError("noise_temp", "must be > 0");
    if (!(noise_scale > 0)) throw ValidationError("noise_scale", "must be > 0");
}

double beamwidth(int n) {
    if (n < 1) throw DomainError("beamwidth: n must be >= 1");
    return kPatternConst / n;
}

double gain(int n) {
    return static_cast<double>(n) * static_cast<double>(n);
}

double snr(const SystemConfig& cfg) {
    const double g = gain(cfg.n_ap) * gain(cfg.n_ue);
    const double spread = kSpeedOfLight * kSpeedOfLight /
                          (16.0 * kPi * kPi * cfg.carrier_freq * cfg.carrier_freq *
                           cfg.noise_power());
    return cfg.tx_power * g * spread / (cfg.distance * cfg.distance) *
           std::exp(-cfg.absorption_coeff * cfg.distance);
}

SeCapacity se_capacity_max(const SystemConfig& cfg) {
    const double se = std::log2(1.0 + snr(cfg));
    return {se, cfg.bandwidth * se};
}

Boundaries misalignment_boundaries(const SystemConfig& cfg) {
    const double m_xy = cfg.distance * std::tan(0.5 * beamwidth(cfg.n_ap));
    const double m_angle =
        0.5 * kPatternConst * (1.0 / cfg.n_ue + 1.0 / cfg.n_ap);
    return {m_xy, m_angle};
}

double alignment_duration(const SystemConfig& cfg) {
    return (gain(cfg.n_ap) + gain(cfg.n_ue)) * cfg.beam_step_delay +
           cfg.detection_delay;
}

double calibrate_noise(SystemConfig& cfg, double target_se) {
    if (!(target_se > 0)) throw DomainError("calibrate_noise: target_se must be > 0");
    SystemConfig ref = cfg;
    ref.distance = 10.0;
    ref.n_ap = 100;
    ref.n_ue = 21;
    ref.noise_scale = 1.0;
    const double s_ref = snr(ref);
    const double s_target = std::exp2(target_se) - 1.0;
    cfg.noise_scale = s_ref / s_target;
    return cfg.noise_scale;
}

} // namespace thz::link
