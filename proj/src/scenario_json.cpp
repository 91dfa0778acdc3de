#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

using nlohmann::json;

namespace {

Vec2 vec2_from(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("expected a [x, y] coordinate pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vec2_to(const Vec2& v) { return json::array({v.x, v.y}); }

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_constants(const json& j, PhysicalConstants& c) {
  maybe(j, "serving_altitude_m", c.serving_altitude_m);
  maybe(j, "aperture_deg", c.aperture_deg);
  if (j.contains("level_speed_kmh"))
    c.level_speed_mps = j.at("level_speed_kmh").get<double>() / 3.6;
  if (j.contains("elevation_speed_kmh"))
    c.elevation_speed_mps = j.at("elevation_speed_kmh").get<double>() / 3.6;
  maybe(j, "weight_newton", c.weight_newton);
  maybe(j, "air_density", c.air_density);
  maybe(j, "rotor_disk_area_m2", c.rotor_disk_area_m2);
  maybe(j, "carrier_hz", c.carrier_hz);
  maybe(j, "spectrum_hz", c.spectrum_hz);
  maybe(j, "rb_bandwidth_hz", c.rb_bandwidth_hz);
  maybe(j, "tx_psd_dbm_hz", c.tx_psd_dbm_hz);
  maybe(j, "noise_psd_dbm_hz", c.noise_psd_dbm_hz);
  maybe(j, "min_throughput_bps", c.min_throughput_bps);
  maybe(j, "excess_loss_db", c.excess_loss_db);
  maybe(j, "slot_duration_s", c.slot_duration_s);
  maybe(j, "max_move_time_s", c.max_move_time_s);
  maybe(j, "max_move_m", c.max_move_m);
  maybe(j, "score_exponent", c.score_exponent);
  maybe(j, "quit_threshold_units", c.quit_threshold_units);
  maybe(j, "tx_energy_units", c.tx_energy_units);
  maybe(j, "op_power_units", c.op_power_units);
  if (j.contains("gain_convention")) {
    const auto s = j.at("gain_convention").get<std::string>();
    if (s == "amplitude")
      c.gain_convention = GainConvention::Amplitude;
    else if (s == "power")
      c.gain_convention = GainConvention::Power;
    else
      throw ConfigError("gain_convention must be 'amplitude' or 'power'");
  }
}

json constants_to_json(const PhysicalConstants& c) {
  return json{
      {"serving_altitude_m", c.serving_altitude_m},
      {"aperture_deg", c.aperture_deg},
      {"level_speed_kmh", c.level_speed_mps * 3.6},
      {"elevation_speed_kmh", c.elevation_speed_mps * 3.6},
      {"weight_newton", c.weight_newton},
      {"air_density", c.air_density},
      {"rotor_disk_area_m2", c.rotor_disk_area_m2},
      {"carrier_hz", c.carrier_hz},
      {"spectrum_hz", c.spectrum_hz},
      {"rb_bandwidth_hz", c.rb_bandwidth_hz},
      {"tx_psd_dbm_hz", c.tx_psd_dbm_hz},
      {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
      {"min_throughput_bps", c.min_throughput_bps},
      {"excess_loss_db", c.excess_loss_db},
      {"slot_duration_s", c.slot_duration_s},
      {"max_move_time_s", c.max_move_time_s},
      {"max_move_m", c.max_move_m},
      {"score_exponent", c.score_exponent},
      {"quit_threshold_units", c.quit_threshold_units},
      {"tx_energy_units", c.tx_energy_units},
      {"op_power_units", c.op_power_units},
      {"gain_convention",
       c.gain_convention == GainConvention::Amplitude ? "amplitude" : "power"},
  };
}

void parse_users(const json& j, ScenarioConfig& cfg) {
  auto& u = cfg.users;
  maybe(j, "count", u.count);
  maybe(j, "hotspot_fraction", u.hotspot_fraction);
  maybe(j, "dynamic", u.dynamic);
  maybe(j, "stop_distance", u.stop_distance);
  maybe(j, "seed", u.seed);
  double default_spread = 0.7;
  maybe(j, "spread", default_spread);
  if (j.contains("hotspots")) {
    u.hotspots.clear();
    for (const auto& hj : j.at("hotspots")) {
      HotspotTrace h;
      h.start = vec2_from(hj.at("start"));
      h.spread = default_spread;
      maybe(hj, "spread", h.spread);
      if (hj.contains("waypoints")) {
        // explicit [segment, x, y] rows; must cover every segment in order
        std::vector<Vec2> wps(static_cast<std::size_t>(cfg.horizon.segments));
        std::vector<bool> seen(wps.size(), false);
        for (const auto& row : hj.at("waypoints")) {
          const int seg = row.at(0).get<int>();
          if (seg < 1 || seg > cfg.horizon.segments)
            throw ConfigError("waypoint segment index out of range");
          wps[static_cast<std::size_t>(seg - 1)] = {row.at(1).get<double>(),
                                                    row.at(2).get<double>()};
          seen[static_cast<std::size_t>(seg - 1)] = true;
        }
        for (bool s : seen)
          if (!s) throw ConfigError("waypoints must cover every segment");
        h.waypoints = std::move(wps);
      }
      u.hotspots.push_back(std::move(h));
    }
  }
  // dynamic hotspots without explicit waypoints follow the mirrored
  // disperse-gather-disperse schedule toward the area center
  if (u.dynamic) {
    const Vec2 center{cfg.area.side_units() / 2.0, cfg.area.side_units() / 2.0};
    for (auto& h : u.hotspots)
      if (h.waypoints.empty())
        h.waypoints = disperse_gather_waypoints(h.start, center,
                                                u.stop_distance,
                                                cfg.horizon.segments);
  }
}

void parse_fleet(const json& j, FleetSpec& f) {
  maybe(j, "count", f.count);
  maybe(j, "placement", f.placement);
  if (j.contains("circle")) {
    const auto& cj = j.at("circle");
    if (cj.contains("center")) f.circle_center = vec2_from(cj.at("center"));
    maybe(cj, "radius", f.circle_radius);
  }
  if (j.contains("positions")) {
    f.positions.clear();
    for (const auto& p : j.at("positions")) f.positions.push_back(vec2_from(p));
    if (!j.contains("placement")) f.placement = "explicit";
  }
  if (j.contains("initial_energy")) {
    f.initial_energy.clear();
    const auto& ej = j.at("initial_energy");
    if (ej.is_number())
      f.initial_energy.push_back(ej.get<double>());
    else
      for (const auto& e : ej) f.initial_energy.push_back(e.get<double>());
  }
}

void parse_lineup(const json& j, ScenarioConfig& cfg) {
  cfg.lineup_events.clear();
  for (const auto& ej : j) {
    LineupEvent ev;
    const auto kind = ej.at("kind").get<std::string>();
    if (kind == "quit")
      ev.kind = LineupEvent::Kind::Quit;
    else if (kind == "join")
      ev.kind = LineupEvent::Kind::Join;
    else
      throw ConfigError("lineup event kind must be 'quit' or 'join'");
    ev.uav_index = ej.at("uav").get<int>();
    if (ev.kind == LineupEvent::Kind::Join) {
      ev.takeoff_step = ej.at("takeoff_step").get<int>();
      ev.takeoff_point = vec2_from(ej.at("takeoff_point"));
      maybe(ej, "start_altitude_m", ev.start_altitude_m);
    }
    cfg.lineup_events.push_back(ev);
  }
}

void parse_rl(const json& j, RlConfig& r) {
  maybe(j, "gamma", r.gamma);
  maybe(j, "tau", r.tau);
  maybe(j, "learning_rate", r.learning_rate);
  maybe(j, "l2", r.l2);
  maybe(j, "batch_size", r.batch_size);
  maybe(j, "hidden", r.hidden);
  maybe(j, "noise_var0", r.noise_var0);
  maybe(j, "noise_decay", r.noise_decay);
  maybe(j, "workers", r.workers);
  maybe(j, "episodes_per_worker", r.episodes_per_worker);
  maybe(j, "updates_per_episode", r.updates_per_episode);
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario parse error: ") + e.what());
  }
  ScenarioConfig cfg;
  if (j.contains("area")) {
    maybe(j.at("area"), "side_m", cfg.area.side_m);
    maybe(j.at("area"), "unit_m", cfg.area.unit_m);
  }
  if (j.contains("constants")) parse_constants(j.at("constants"), cfg.consts);
  if (j.contains("horizon")) {
    maybe(j.at("horizon"), "steps", cfg.horizon.steps);
    maybe(j.at("horizon"), "segments", cfg.horizon.segments);
  }
  if (j.contains("users")) parse_users(j.at("users"), cfg);
  if (j.contains("fleet")) parse_fleet(j.at("fleet"), cfg.fleet);
  if (j.contains("lineup_events")) parse_lineup(j.at("lineup_events"), cfg);
  if (j.contains("rl")) parse_rl(j.at("rl"), cfg.rl);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json users{{"count", cfg.users.count},
             {"hotspot_fraction", cfg.users.hotspot_fraction},
             {"dynamic", cfg.users.dynamic},
             {"stop_distance", cfg.users.stop_distance},
             {"seed", cfg.users.seed}};
  json hotspots = json::array();
  for (const auto& h : cfg.users.hotspots) {
    json hj{{"start", vec2_to(h.start)}, {"spread", h.spread}};
    if (!h.waypoints.empty()) {
      json wps = json::array();
      for (std::size_t s = 0; s < h.waypoints.size(); ++s)
        wps.push_back(json::array({static_cast<int>(s + 1), h.waypoints[s].x,
                                   h.waypoints[s].y}));
      hj["waypoints"] = wps;
    }
    hotspots.push_back(hj);
  }
  users["hotspots"] = hotspots;

  json fleet{{"count", cfg.fleet.count}, {"placement", cfg.fleet.placement}};
  fleet["circle"] = json{{"center", vec2_to(cfg.fleet.circle_center)},
                         {"radius", cfg.fleet.circle_radius}};
  if (!cfg.fleet.positions.empty()) {
    json ps = json::array();
    for (const auto& p : cfg.fleet.positions) ps.push_back(vec2_to(p));
    fleet["positions"] = ps;
  }
  if (!cfg.fleet.initial_energy.empty())
    fleet["initial_energy"] = cfg.fleet.initial_energy;

  json events = json::array();
  for (const auto& ev : cfg.lineup_events) {
    json ej{{"kind", ev.kind == LineupEvent::Kind::Quit ? "quit" : "join"},
            {"uav", ev.uav_index}};
    if (ev.kind == LineupEvent::Kind::Join) {
      ej["takeoff_step"] = ev.takeoff_step;
      ej["takeoff_point"] = vec2_to(ev.takeoff_point);
      ej["start_altitude_m"] = ev.start_altitude_m;
    }
    events.push_back(ej);
  }

  json j{{"area", {{"side_m", cfg.area.side_m}, {"unit_m", cfg.area.unit_m}}},
         {"constants", constants_to_json(cfg.consts)},
         {"horizon",
          {{"steps", cfg.horizon.steps}, {"segments", cfg.horizon.segments}}},
         {"users", users},
         {"fleet", fleet},
         {"lineup_events", events},
         {"rl",
          {{"gamma", cfg.rl.gamma},
           {"tau", cfg.rl.tau},
           {"learning_rate", cfg.rl.learning_rate},
           {"l2", cfg.rl.l2},
           {"batch_size", cfg.rl.batch_size},
           {"hidden", cfg.rl.hidden},
           {"noise_var0", cfg.rl.noise_var0},
           {"noise_decay", cfg.rl.noise_decay},
           {"workers", cfg.rl.workers},
           {"episodes_per_worker", cfg.rl.episodes_per_worker},
           {"updates_per_episode", cfg.rl.updates_per_episode}}}};
  return j.dump(2);
}

}  // namespace uavnet
