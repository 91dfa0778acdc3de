#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/constants.hpp"
#include "uavnet/geometry.hpp"

namespace uavnet {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AreaSpec {
  double side_m = 1000.0;
  double unit_m = 100.0;

  // map coordinates are kept in units; physics works in meters
  double side_units() const { return side_m / unit_m; }
};

// Scripted path of one user cluster's center. The center is piecewise
// constant: one waypoint per time segment, all coordinates in units.
struct HotspotTrace {
  Vec2 start;
  std::vector<Vec2> waypoints;  // per segment; empty = static at start
  double spread = 0.7;          // stddev of user scatter, units

  Vec2 center_for_segment(int segment) const {
    if (waypoints.empty()) return start;
    if (segment < 1 || segment > static_cast<int>(waypoints.size()))
      throw std::out_of_range("hotspot segment out of range");
    return waypoints[static_cast<std::size_t>(segment - 1)];
  }
};

struct UserDistributionSpec {
  int count = 100;
  double hotspot_fraction = 0.8;
  std::vector<HotspotTrace> hotspots;
  bool dynamic = false;       // waypoint schedules active
  double stop_distance = 1.0; // gather stop distance from area center, units
  std::uint64_t seed = 7;
};

struct LineupEvent {
  enum class Kind { Quit, Join };
  Kind kind = Kind::Quit;
  int uav_index = 0;
  // join only
  int takeoff_step = 1;
  Vec2 takeoff_point;
  double start_altitude_m = 0.0;
};

struct FleetSpec {
  int count = 5;
  // "circle": evenly spaced on a circle; "explicit": positions list
  std::string placement = "circle";
  Vec2 circle_center{5.0, 5.0};
  double circle_radius = 2.0;
  std::vector<Vec2> positions;        // used when placement == "explicit"
  std::vector<double> initial_energy; // unit-seconds, one per UAV
};

struct RlConfig {
  double gamma = 0.9;
  double tau = 0.001;
  double learning_rate = 1e-4;
  double l2 = 1e-4;
  int batch_size = 512;
  std::vector<int> hidden{400, 300};
  double noise_var0 = 0.6;
  double noise_decay = 0.9995;
  int workers = 4;
  int episodes_per_worker = 2500;
  int updates_per_episode = 100;
};

struct HorizonSpec {
  int steps = 100;    // N_T
  int segments = 10;  // user-distribution segments when dynamic
};

struct ScenarioConfig {
  AreaSpec area;
  PhysicalConstants consts;
  UserDistributionSpec users;
  FleetSpec fleet;
  std::vector<LineupEvent> lineup_events;
  HorizonSpec horizon;
  RlConfig rl;

  double d_max_units() const { return consts.max_move_m / area.unit_m; }
  double serving_altitude_units() const {
    return consts.serving_altitude_m / area.unit_m;
  }
  std::optional<LineupEvent> join_event() const;
  double initial_energy(int uav) const;
  void validate() const;
};

// One generated population. Hotspot membership is kept so that snapshots can
// translate commuting users with their cluster center.
struct UserSet {
  std::vector<Vec2> positions;   // units
  std::vector<int> hotspot_of;   // -1 for uniformly distributed users
};

// Builds the mirrored disperse-gather-disperse waypoint schedule for one
// hotspot: snapshot order 1 2 3 4 4 4 4 3 2 1 across `segments` segments,
// moving from `start` toward the area center and stopping `stop_distance`
// units short of it.
std::vector<Vec2> disperse_gather_waypoints(const Vec2& start,
                                            const Vec2& area_center,
                                            double stop_distance,
                                            int segments);

UserSet generate_users(const UserDistributionSpec& spec, const AreaSpec& area,
                       std::uint64_t seed);

// Center of one hotspot at step t (1-based) of an N_T-step horizon split into
// `segments` equal segments.
Vec2 hotspot_center_at(const HotspotTrace& trace, int t, int horizon_steps,
                       int segments);

int segment_of_step(int t, int horizon_steps, int segments);

// User positions at step t. Hotspot users ride along with their center's
// displacement from segment 1; uniform users stay put. Static scenarios
// return the t=1 snapshot for every t.
UserSet snapshot_at(const UserDistributionSpec& spec, const AreaSpec& area,
                    int t, std::uint64_t seed, int horizon_steps,
                    int segments);

ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig scenario_from_json(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace uavnet
