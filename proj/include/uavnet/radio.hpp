#pragma once

#include <cstddef>
#include <vector>

#include "uavnet/constants.hpp"
#include "uavnet/geometry.hpp"

namespace uavnet {

struct UserAssignment {
  int uav = -1;  // serving UAV slot, -1 when unserved
  int rbs = 0;
  bool served = false;
};

struct AssociationMap {
  std::vector<UserAssignment> users;
  std::vector<int> rbs_left;  // remaining resource blocks per UAV slot

  int served_count() const {
    int n = 0;
    for (const auto& u : users) n += u.served ? 1 : 0;
    return n;
  }
};

// Aperture-limited disk radius on the ground, r = H * tan(theta/2).
double coverage_radius(double altitude_m, double aperture_rad);

// Free-space loss 20*log10(4*pi*f_c*d/c) plus a fixed excess term.
// Throws std::domain_error for d <= 0.
double path_loss_db(double distance_m, double carrier_hz, double excess_db);

// dB path loss -> linear channel gain under the configured convention.
double channel_gain(double pl_db, GainConvention conv);

// SINR (linear ratio) of `user` when served by `uavs[serving]`, every other
// covering UAV interfering. Positions in area units, scaled to meters by
// unit_m. Throws std::domain_error if the serving UAV does not cover the user.
double sinr(const Vec2& user, std::size_t serving, const std::vector<Vec2>& uavs,
            const PhysicalConstants& c, double unit_m);

// Resource blocks needed to reach the minimum throughput at the given SINR.
// Returns rb_count()+1 when the demand cannot fit any budget.
int rbs_needed(double sinr_linear, const PhysicalConstants& c);

// Greedy association: users in descending best-SINR order (ties by user
// index), each assigned to the covering UAV with the highest SINR that still
// has enough resource blocks. `uavs` must contain only UAVs that are active at
// serving altitude; excluded UAVs neither serve nor interfere.
AssociationMap associate_and_allocate(const std::vector<Vec2>& users,
                                      const std::vector<Vec2>& uavs,
                                      const PhysicalConstants& c, double unit_m);

// User-satisfaction score, count^beta.
double us_score(int served_count, double beta);

}  // namespace uavnet
