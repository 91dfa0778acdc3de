#pragma once

#include <cmath>
#include <numbers>

namespace uavnet {

// How dB path loss is turned into a linear channel gain.
// The reference model uses the amplitude form 10^(-PL/20); the conventional
// power form 10^(-PL/10) is kept as a switch.
enum class GainConvention { Amplitude, Power };

// Physical and protocol constants of the simulated network.
// All values carry SI units unless stated otherwise; energies are tracked in
// power-unit-seconds where one power unit is the hover power.
struct PhysicalConstants {
  double serving_altitude_m = 300.0;
  double aperture_deg = 60.0;
  double level_speed_mps = 40.0 / 3.6;       // 40 km/h
  double elevation_speed_mps = 14.4 / 3.6;   // 14.4 km/h
  double weight_newton = 4.0 * 9.8;          // 4 kg airframe
  double air_density = 1.225;                // kg/m^3
  double rotor_disk_area_m2 = 0.18;
  double carrier_hz = 2.0e9;
  double spectrum_hz = 4.5e6;
  double rb_bandwidth_hz = 180.0e3;
  double tx_psd_dbm_hz = -49.5;
  double noise_psd_dbm_hz = -174.0;
  double min_throughput_bps = 250.0e3;
  double excess_loss_db = 1.0;               // LoS only
  double slot_duration_s = 10.0;
  double max_move_time_s = 9.0;
  double max_move_m = 100.0;
  double score_exponent = 2.0;               // beta
  double quit_threshold_units = 150.0;       // unit-seconds
  double tx_energy_units = 0.0;              // negligible by default
  double op_power_units = 0.0;               // operational cost per second
  GainConvention gain_convention = GainConvention::Amplitude;

  double aperture_rad() const {
    return aperture_deg * std::numbers::pi / 180.0;
  }
  int rb_count() const {
    return static_cast<int>(spectrum_hz / rb_bandwidth_hz);
  }
};

inline double dbm_to_linear_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace uavnet
