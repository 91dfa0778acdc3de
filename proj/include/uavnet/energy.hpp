#pragma once

#include <cstddef>
#include <vector>

#include "uavnet/constants.hpp"

namespace uavnet {

// Rotor-aerodynamics level-flight power (raw value; hover power defines the
// power unit used everywhere else).
double level_power(double speed_mps, const PhysicalConstants& c);

// Hover power = level_power(0); one power unit.
double hover_power(const PhysicalConstants& c);

// Energy drained over one slot that moves the UAV `move_m` meters at cruise
// speed and hovers the rest, in power-unit-seconds. Includes the (default
// zero) transmission and operational terms. Throws std::domain_error when the
// move cannot fit the movement window.
double slot_energy(double move_m, const PhysicalConstants& c);

// Per-UAV battery bookkeeping with the quit threshold.
struct BatteryLedger {
  std::vector<double> energy;  // unit-seconds remaining
  std::vector<bool> quit;
  double threshold = 150.0;

  BatteryLedger() = default;
  BatteryLedger(std::vector<double> initial, double quit_threshold);
};

// Subtracts `energy_units` from one UAV's battery; returns true (and marks the
// UAV quit) when the remaining charge falls to or below the threshold.
// Throws std::logic_error when the UAV already quit.
bool apply_drain(BatteryLedger& ledger, std::size_t uav, double energy_units);

}  // namespace uavnet
