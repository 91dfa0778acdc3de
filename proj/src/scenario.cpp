#include "uavnet/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "uavnet/rng.hpp"

namespace uavnet {

std::optional<LineupEvent> ScenarioConfig::join_event() const {
  for (const auto& ev : lineup_events)
    if (ev.kind == LineupEvent::Kind::Join) return ev;
  return std::nullopt;
}

double ScenarioConfig::initial_energy(int uav) const {
  if (fleet.initial_energy.empty()) return 1.0e6;  // effectively unlimited
  if (fleet.initial_energy.size() == 1) return fleet.initial_energy[0];
  return fleet.initial_energy.at(static_cast<std::size_t>(uav));
}

void ScenarioConfig::validate() const {
  if (area.side_m <= 0 || area.unit_m <= 0)
    throw ConfigError("area dimensions must be positive");
  if (users.count < 0) throw ConfigError("user count must be nonnegative");
  if (users.hotspot_fraction < 0.0 || users.hotspot_fraction > 1.0)
    throw ConfigError("hotspot_fraction must be in [0, 1]");
  if (users.hotspots.empty() && users.hotspot_fraction > 0.0)
    throw ConfigError("hotspot_fraction > 0 requires at least one hotspot");
  const double side = area.side_units();
  for (const auto& h : users.hotspots) {
    if (!in_square(h.start, side))
      throw ConfigError("hotspot start outside the target area");
    for (const auto& w : h.waypoints)
      if (!in_square(w, side))
        throw ConfigError("hotspot waypoint outside the target area");
  }
  if (fleet.count <= 0) throw ConfigError("fleet must contain at least one UAV");
  if (fleet.placement == "explicit" &&
      static_cast<int>(fleet.positions.size()) != fleet.count)
    throw ConfigError("explicit placement needs one position per UAV");
  if (fleet.placement != "explicit" && fleet.placement != "circle")
    throw ConfigError("unknown fleet placement: " + fleet.placement);
  if (fleet.initial_energy.size() > 1 &&
      static_cast<int>(fleet.initial_energy.size()) != fleet.count)
    throw ConfigError("initial_energy must be scalar or one value per UAV");
  if (horizon.steps <= 0) throw ConfigError("horizon must be positive");
  if (horizon.segments <= 0 || horizon.steps % horizon.segments != 0)
    throw ConfigError("horizon steps must divide evenly into segments");
  int joins = 0;
  for (const auto& ev : lineup_events) {
    if (ev.uav_index < 0 || ev.uav_index >= fleet.count)
      throw ConfigError("lineup event references an unknown UAV");
    if (ev.kind == LineupEvent::Kind::Join) {
      ++joins;
      if (ev.takeoff_step < 1 || ev.takeoff_step > horizon.steps)
        throw ConfigError("join takeoff step outside the horizon");
      if (!in_square(ev.takeoff_point, side))
        throw ConfigError("join takeoff point outside the target area");
    }
  }
  if (joins > 1)
    throw ConfigError("multiple join events are not supported in one scenario");
  if (consts.max_move_m > consts.level_speed_mps * consts.max_move_time_s + 1e-9)
    throw ConfigError("max_move_m is not reachable within the move time budget");
}

std::vector<Vec2> disperse_gather_waypoints(const Vec2& start,
                                            const Vec2& area_center,
                                            double stop_distance,
                                            int segments) {
  const Vec2 delta = area_center - start;
  const double dist = delta.norm();
  Vec2 gathered = area_center;
  if (dist > 1e-12) {
    const double travel = std::max(0.0, dist - stop_distance);
    gathered = start + delta * (travel / dist);
  }
  // snapshot index per segment: 1 2 3 4 4 4 4 3 2 1 stretched/shrunk to the
  // requested segment count by mirror symmetry
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(segments));
  const int half = (segments + 1) / 2;
  const int snapshots = std::min(4, half);
  for (int seg = 1; seg <= segments; ++seg) {
    const int mirrored = std::min(seg, segments + 1 - seg);
    const int snap = std::min(snapshots, mirrored);
    const double f = snapshots > 1
                         ? static_cast<double>(snap - 1) / (snapshots - 1)
                         : 0.0;
    out.push_back(start + (gathered - start) * f);
  }
  return out;
}

namespace {

std::vector<int> hotspot_user_counts(const UserDistributionSpec& spec) {
  const int total =
      static_cast<int>(std::lround(spec.hotspot_fraction * spec.count));
  std::vector<int> counts(spec.hotspots.size(), 0);
  if (spec.hotspots.empty()) return counts;
  const int base = total / static_cast<int>(spec.hotspots.size());
  int remainder = total % static_cast<int>(spec.hotspots.size());
  for (auto& c : counts) {
    c = base + (remainder > 0 ? 1 : 0);
    if (remainder > 0) --remainder;
  }
  return counts;
}

Vec2 sample_around(Rng& rng, const Vec2& center, double spread, double side) {
  // truncate the scatter to the area by resampling
  for (int attempt = 0; attempt < 256; ++attempt) {
    Vec2 p{rng.gaussian(center.x, spread), rng.gaussian(center.y, spread)};
    if (in_square(p, side)) return p;
  }
  return clamp_to_square(center, side);
}

}  // namespace

UserSet generate_users(const UserDistributionSpec& spec, const AreaSpec& area,
                       std::uint64_t seed) {
  if (spec.hotspots.empty() && spec.hotspot_fraction > 0.0)
    throw ConfigError("hotspot_fraction > 0 requires at least one hotspot");
  Rng rng(seed);
  const double side = area.side_units();
  UserSet set;
  set.positions.reserve(static_cast<std::size_t>(spec.count));
  set.hotspot_of.reserve(static_cast<std::size_t>(spec.count));
  const auto counts = hotspot_user_counts(spec);
  for (std::size_t h = 0; h < spec.hotspots.size(); ++h) {
    const auto& trace = spec.hotspots[h];
    const Vec2 center = trace.center_for_segment(1);
    for (int i = 0; i < counts[h]; ++i) {
      set.positions.push_back(sample_around(rng, center, trace.spread, side));
      set.hotspot_of.push_back(static_cast<int>(h));
    }
  }
  while (static_cast<int>(set.positions.size()) < spec.count) {
    set.positions.push_back({rng.uniform(0.0, side), rng.uniform(0.0, side)});
    set.hotspot_of.push_back(-1);
  }
  return set;
}

int segment_of_step(int t, int horizon_steps, int segments) {
  if (t < 1 || t > horizon_steps)
    throw std::out_of_range("step index outside the horizon");
  const int seg_len = horizon_steps / segments;
  return std::min(segments, (t - 1) / seg_len + 1);
}

Vec2 hotspot_center_at(const HotspotTrace& trace, int t, int horizon_steps,
                       int segments) {
  const int seg = segment_of_step(t, horizon_steps, segments);
  return trace.center_for_segment(trace.waypoints.empty() ? 1 : seg);
}

UserSet snapshot_at(const UserDistributionSpec& spec, const AreaSpec& area,
                    int t, std::uint64_t seed, int horizon_steps,
                    int segments) {
  UserSet base = generate_users(spec, area, seed);
  if (!spec.dynamic) {
    if (t < 1 || t > horizon_steps)
      throw std::out_of_range("step index outside the horizon");
    return base;
  }
  const int seg = segment_of_step(t, horizon_steps, segments);
  const double side = area.side_units();
  for (std::size_t u = 0; u < base.positions.size(); ++u) {
    const int h = base.hotspot_of[u];
    if (h < 0) continue;
    const auto& trace = spec.hotspots[static_cast<std::size_t>(h)];
    const Vec2 shift =
        trace.center_for_segment(trace.waypoints.empty() ? 1 : seg) -
        trace.center_for_segment(1);
    base.positions[u] = clamp_to_square(base.positions[u] + shift, side);
  }
  return base;
}

}  // namespace uavnet
