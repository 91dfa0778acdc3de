#include "uavnet/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace uavnet {

double level_power(double speed_mps, const PhysicalConstants& c) {
  if (speed_mps < 0.0) throw std::domain_error("speed must be nonnegative");
  const double two_rho_a = 2.0 * c.air_density * c.rotor_disk_area_m2;
  const double vh2 = c.weight_newton / two_rho_a;  // hover-induced speed^2
  const double v2 = speed_mps * speed_mps;
  const double inner = std::sqrt(v2 * v2 + 4.0 * vh2 * vh2);
  return c.weight_newton / (std::sqrt(2.0) * c.air_density *
                            c.rotor_disk_area_m2 * std::sqrt(v2 + inner));
}

double hover_power(const PhysicalConstants& c) { return level_power(0.0, c); }

double slot_energy(double move_m, const PhysicalConstants& c) {
  if (move_m < 0.0) throw std::domain_error("move distance must be nonnegative");
  const double v = c.level_speed_mps;
  double move_time = move_m > 0.0 ? move_m / v : 0.0;
  // tolerate the float fuzz of d_max == v * window
  if (move_time > c.max_move_time_s * (1.0 + 1e-9))
    throw std::domain_error("move does not fit the movement window");
  move_time = std::min(move_time, c.max_move_time_s);

  const double unit = hover_power(c);
  const double raw = level_power(v, c) * move_time +
                     unit * (c.slot_duration_s - move_time);
  return raw / unit + c.tx_energy_units + c.op_power_units * c.slot_duration_s;
}

BatteryLedger::BatteryLedger(std::vector<double> initial, double quit_threshold)
    : energy(std::move(initial)),
      quit(energy.size(), false),
      threshold(quit_threshold) {}

bool apply_drain(BatteryLedger& ledger, std::size_t uav, double energy_units) {
  if (uav >= ledger.energy.size())
    throw std::out_of_range("no such UAV in the ledger");
  if (ledger.quit[uav])
    throw std::logic_error("drain applied to a UAV that already quit");
  ledger.energy[uav] -= energy_units;
  if (ledger.energy[uav] <= ledger.threshold) ledger.quit[uav] = true;
  return ledger.quit[uav];
}

}  // namespace uavnet
