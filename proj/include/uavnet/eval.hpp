#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/ddpg.hpp"
#include "uavnet/env.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

// A placement search too large to enumerate; the message carries the bound.
struct IntractableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepRecord {
  int t = 0;                    // 1-based step that was executed
  std::vector<UavState> fleet;  // fleet after the step
  int served = 0;
  double sc = 0.0;  // served^beta
  double reward = 0.0;
};

struct EpisodeTrace {
  std::vector<StepRecord> steps;
  double total_reward = 0.0;

  // Sum of SC over steps `first..last` (1-based, inclusive).
  double accumulated_sc(int first, int last) const;
};

// Deterministic greedy rollout (no exploration noise) over the scenario's
// horizon, or until a terminal state. Throws std::invalid_argument when the
// policy's input width does not match the scenario's state encoding.
EpisodeTrace run_policy(const Policy& policy, const ScenarioConfig& scenario);

// Reaction-only reference behavior.
//  - Scenarios with a join event: every pre-existing UAV holds position while
//    the joining UAV climbs vertically at its takeoff point; once it serves,
//    the post-change agent drives the whole fleet.
//  - Otherwise (quit flavor): the pre-change agent drives until a step leaves
//    some UAV at or below the battery threshold, the fleet holds for one
//    step, and the post-change agent drives from then on. With no lineup
//    change at all this reduces to run_policy(pre_agent).
EpisodeTrace passive_baseline(const ScenarioConfig& scenario,
                              const Policy& pre_agent,
                              const Policy& post_agent);

struct GainReport {
  int window_first = 0;  // 1-based, inclusive
  int window_last = 0;
  double proactive_sum = 0.0;
  double baseline_sum = 0.0;
  double gain_percent = 0.0;
};

// Accumulated-SC comparison over a transition window. Negative first/last
// select the automatic window: from the first step where the two fleets
// differ, to the first step where both traces sit within one served user of
// their own settled served count (the value of the last run of >= 3 equal
// counts). Throws std::out_of_range when an explicit window leaves the
// traces.
GainReport transition_gain(const EpisodeTrace& proactive,
                           const EpisodeTrace& baseline, int window_first = -1,
                           int window_last = -1);

struct PlacementResult {
  std::vector<Vec2> positions;  // units
  int served = 0;
  double score = 0.0;  // served^beta
  long long evaluations = 0;
  bool exhaustive = true;  // false: greedy seed + coordinate descent
};

// Best static placement of n_uavs serving-altitude UAVs for one user
// snapshot, maximizing the served count over grid positions: exhaustive over
// unordered grid combinations for n_uavs <= 3, greedy seeding plus
// coordinate descent above that. Ties resolve to the first candidate in scan
// order, so results are deterministic. Throws IntractableError (with the
// estimated evaluation count) when the search would exceed ~5e8 association
// evaluations.
PlacementResult brute_force_placement(const UserSet& snapshot,
                                      const ScenarioConfig& scenario,
                                      int n_uavs, double grid_step);

// Trailing moving average; the first window-1 entries average over the
// available prefix. window <= 0 throws std::invalid_argument.
std::vector<double> smooth_curve(const std::vector<double>& series,
                                 int window = 100);

// One CSV row per (step, uav): position, energy, altitude, status, plus the
// step's served count, SC, and reward.
void write_trace_csv(const EpisodeTrace& trace, const std::string& path);

}  // namespace uavnet
