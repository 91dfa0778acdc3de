// Python bindings: a thin layer over the C++ core exposing scenario loading,
// the episodic environment, physics helpers, training, rollouts, the passive
// baseline comparison, and the placement search. Values cross the boundary
// as plain Python types (lists, dicts, tuples) so no array library is
// required on either side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

#include "uavnet/apc.hpp"
#include "uavnet/energy.hpp"
#include "uavnet/eval.hpp"
#include "uavnet/radio.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace uavnet;

namespace {

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<double> from_vector(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

const char* status_label(UavStatus s) {
  switch (s) {
    case UavStatus::Active: return "active";
    case UavStatus::Quit: return "quit";
    case UavStatus::PreTakeoff: return "pre_takeoff";
    case UavStatus::Elevating: return "elevating";
  }
  return "?";
}

py::list fleet_list(const std::vector<UavState>& fleet) {
  py::list out;
  for (const auto& u : fleet)
    out.append(py::dict("x"_a = u.pos.x, "y"_a = u.pos.y,
                        "energy"_a = u.energy, "altitude"_a = u.altitude,
                        "status"_a = status_label(u.status)));
  return out;
}

py::dict trace_dict(const EpisodeTrace& trace) {
  py::list served, sc, reward;
  for (const auto& s : trace.steps) {
    served.append(s.served);
    sc.append(s.sc);
    reward.append(s.reward);
  }
  const double total_sc =
      trace.steps.empty()
          ? 0.0
          : trace.accumulated_sc(trace.steps.front().t, trace.steps.back().t);
  return py::dict("steps"_a = trace.steps.size(),
                  "total_reward"_a = trace.total_reward,
                  "accumulated_sc"_a = total_sc, "served"_a = served,
                  "sc"_a = sc, "reward"_a = reward);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "UAV communication-network laboratory core";

  // ------------------------------------------------------------------ physics
  m.def(
      "path_loss_db",
      [](double distance_m, double carrier_hz, double excess_db) {
        return path_loss_db(distance_m, carrier_hz, excess_db);
      },
      "distance_m"_a, "carrier_hz"_a = PhysicalConstants{}.carrier_hz,
      "excess_db"_a = PhysicalConstants{}.excess_loss_db,
      "Free-space path loss plus a constant excess term, in dB.");
  m.def(
      "coverage_radius",
      [](double altitude_m, double aperture_deg) {
        return coverage_radius(altitude_m,
                               aperture_deg * std::numbers::pi / 180.0);
      },
      "altitude_m"_a = PhysicalConstants{}.serving_altitude_m,
      "aperture_deg"_a = PhysicalConstants{}.aperture_deg,
      "Ground-coverage radius of the antenna cone, in meters.");
  m.def(
      "level_power",
      [](double speed_mps) { return level_power(speed_mps, {}); },
      "speed_mps"_a,
      "Rotor power draw at constant level speed, in raw power units.");
  m.def(
      "slot_energy",
      [](double move_m) { return slot_energy(move_m, {}); },
      "move_m"_a,
      "Energy consumed over one time slot for a level move, in unit-seconds.");
  m.def("us_score", &us_score, "served_count"_a, "beta"_a = 2.0,
        "User-satisfaction score: served count raised to beta.");

  // ----------------------------------------------------------------- scenario
  py::class_<ScenarioConfig>(m, "Scenario",
                             "Validated scenario configuration (opaque).")
      .def_property_readonly(
          "n_uav", [](const ScenarioConfig& c) { return c.fleet.count; })
      .def_property_readonly(
          "n_users", [](const ScenarioConfig& c) { return c.users.count; })
      .def_property_readonly(
          "horizon_steps",
          [](const ScenarioConfig& c) { return c.horizon.steps; })
      .def_property_readonly(
          "side_units",
          [](const ScenarioConfig& c) { return c.area.side_units(); })
      .def("__repr__", [](const ScenarioConfig& c) {
        return "<Scenario " + std::to_string(c.fleet.count) + " UAVs, " +
               std::to_string(c.users.count) + " users, " +
               std::to_string(c.horizon.steps) + " steps>";
      });
  m.def("load_scenario", &load_scenario_file, "path"_a,
        "Parse and validate a scenario JSON file.");

  // -------------------------------------------------------------- environment
  py::class_<Env>(m, "Env", "Episodic lineup-transition environment.")
      .def(py::init<const ScenarioConfig&>(), "scenario"_a)
      .def("reset", [](Env& e) { return from_vector(e.reset()); },
           "Start a new episode; returns the initial state vector.")
      .def(
          "step",
          [](Env& e, const std::vector<double>& action) {
            if (static_cast<int>(action.size()) != e.action_dim())
              throw std::invalid_argument(
                  "action must have length " + std::to_string(e.action_dim()));
            const StepResult r = e.step(to_vector(action));
            return py::make_tuple(from_vector(r.state), r.reward, r.terminal,
                                  r.served);
          },
          "action"_a,
          "Apply one raw action; returns (state, reward, terminal, served).")
      .def("fleet", [](const Env& e) { return fleet_list(e.fleet()); },
           "Per-UAV position, energy, altitude, and status.")
      .def_property_readonly("state_dim", &Env::state_dim)
      .def_property_readonly("action_dim", &Env::action_dim)
      .def_property_readonly("n_uav", &Env::n_uav)
      .def_property_readonly("terminal",
                             [](const Env& e) { return e.terminal(); });

  // ----------------------------------------------------------------- training
  m.def(
      "train",
      [](const ScenarioConfig& scenario, int workers, int episodes_per_worker,
         int updates_per_episode, std::uint64_t seed, const std::string& out_dir,
         bool progress) {
        TrainOptions opts;
        opts.workers = workers;
        opts.episodes_per_worker = episodes_per_worker;
        opts.updates_per_episode = updates_per_episode;
        opts.seed = seed;
        opts.out_dir = out_dir;
        opts.progress = progress;
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = run_training(scenario, opts);
        }
        py::list rewards, smoothed;
        for (const auto& e : r.episodes) {
          rewards.append(e.reward);
          smoothed.append(e.smoothed);
        }
        return py::dict("episodes"_a = r.episodes.size(),
                        "updates"_a = r.updates.size(),
                        "transitions"_a = r.transitions_stored,
                        "best_smoothed"_a = r.best_smoothed,
                        "best_at"_a = r.best_at, "rewards"_a = rewards,
                        "smoothed"_a = smoothed);
      },
      "scenario"_a, "workers"_a = 0, "episodes_per_worker"_a = 0,
      "updates_per_episode"_a = -1, "seed"_a = 1, "out_dir"_a = std::string(),
      "progress"_a = false,
      "Run asynchronous host/worker training; returns a summary dict. When "
      "out_dir is set, episodes.csv, updates.csv, best.ckpt, and final.ckpt "
      "are written there.");

  // ----------------------------------------------------------------- rollouts
  m.def(
      "rollout",
      [](const std::string& checkpoint, const ScenarioConfig& scenario) {
        return trace_dict(
            run_policy(policy_from(load_checkpoint(checkpoint)), scenario));
      },
      "checkpoint"_a, "scenario"_a,
      "Greedy rollout of a checkpointed actor; returns the per-step trace.");
  m.def(
      "compare",
      [](const ScenarioConfig& scenario, const std::string& psr,
         const std::string& pre, const std::string& post, int first,
         int last) {
        const Policy proactive = policy_from(load_checkpoint(psr));
        const EpisodeTrace p = run_policy(proactive, scenario);
        const EpisodeTrace b =
            passive_baseline(scenario, policy_from(load_checkpoint(pre)),
                             policy_from(load_checkpoint(post)));
        const GainReport g = transition_gain(p, b, first, last);
        return py::dict("window_first"_a = g.window_first,
                        "window_last"_a = g.window_last,
                        "proactive_sum"_a = g.proactive_sum,
                        "baseline_sum"_a = g.baseline_sum,
                        "gain_percent"_a = g.gain_percent,
                        "proactive"_a = trace_dict(p),
                        "baseline"_a = trace_dict(b));
      },
      "scenario"_a, "psr"_a, "pre"_a, "post"_a, "first"_a = -1, "last"_a = -1,
      "Proactive rollout vs the passive-reaction baseline over the lineup "
      "transition window; returns gain statistics and both traces.");
  m.def(
      "place",
      [](const ScenarioConfig& scenario, int n_uavs, double grid_step, int t) {
        const UserSet snap =
            snapshot_at(scenario.users, scenario.area, t, scenario.users.seed,
                        scenario.horizon.steps, scenario.horizon.segments);
        const PlacementResult r =
            brute_force_placement(snap, scenario, n_uavs, grid_step);
        py::list pos;
        for (const auto& p : r.positions)
          pos.append(py::make_tuple(p.x, p.y));
        return py::dict("positions"_a = pos, "served"_a = r.served,
                        "score"_a = r.score, "evaluations"_a = r.evaluations,
                        "exhaustive"_a = r.exhaustive);
      },
      "scenario"_a, "n_uavs"_a, "grid_step"_a = 0.5, "t"_a = 1,
      "Grid placement search on a frozen user snapshot (exhaustive for up to "
      "three UAVs, greedy descent beyond).");
}
