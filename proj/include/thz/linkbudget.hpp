// SPDX-License-Identifier: Apache-2.0
//
// Link budget of a directional THz link with flat sectored antenna
// patterns: SNR, aligned spectral efficiency/capacity, misalignment
// boundaries and the sequential beam-sweep duration.
#ifndef THZ_LINKBUDGET_HPP
#define THZ_LINKBUDGET_HPP

namespace thz::link {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

struct SystemConfig {
    double carrier_freq = 0.3e12;    // Hz
    double bandwidth = 50e9;         // Hz
    double tx_power = 0.1;           // W (20 dBm)
    double absorption_coeff = 0.0033; // 1/m
    double distance = 10.0;          // m
    int n_ap = 100;                  // AP array is n_ap x n_ap
    int n_ue = 20;                   // UE array is n_ue x n_ue
    double beam_step_delay = 5e-6;   // s per scanned direction
    double detection_delay = 0.0;    // s, extra constant added to T_B

    // Thermal noise model N0 = kB * T * B * F, with an extra calibration
    // multiplier applied on top (see calibrate_noise).
    double noise_temp = 290.0;       // K
    double noise_figure_db = 10.0;
    double noise_scale = 1.0;

    double noise_power() const; // W
    void validate() const;      // throws ValidationError
};

struct Boundaries {
    double m_xy;    // m, Cartesian offset at which the UE leaves the AP beam
    double m_angle; // rad, rotation at which the AP leaves the UE beam
};

struct SeCapacity {
    double se;       // bit/s/Hz
    double capacity; // bit/s
};

// Sectored radiation pattern width, 102 deg / N in radians.
double beamwidth(int n);

// Linear array gain N^2.
double gain(int n);

// Linear SNR at the UE for the aligned link.
double snr(const SystemConfig& cfg);

// Aligned-state Shannon SE and capacity.
SeCapacity se_capacity_max(const SystemConfig& cfg);

Boundaries misalignment_boundaries(const SystemConfig& cfg);

// Sequential beam sweep duration T_B = (n_ap^2 + n_ue^2) * delta,
// plus any configured detection delay.
double alignment_duration(const SystemConfig& cfg);

// Rescales the noise level so that the aligned SE at the reference point
// (d = 10 m, n_ap = 100, n_ue = 21) equals target_se. Returns the scale
// written into cfg.noise_scale. Outage quantities are unaffected.
double calibrate_noise(SystemConfig& cfg, double target_se);

} // namespace thz::link

#endif
