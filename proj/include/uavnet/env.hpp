#pragma once

#include <cstdint>
#include <vector>

#include "uavnet/action_space.hpp"
#include "uavnet/energy.hpp"
#include "uavnet/mlp.hpp"
#include "uavnet/radio.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

enum class UavStatus { Active, Quit, PreTakeoff, Elevating };

struct UavState {
  Vec2 pos;         // units
  double energy;    // unit-seconds
  double altitude;  // meters
  UavStatus status;
};

// Which quantity fills the third block of the state vector: battery residual
// (lineups that shrink) or altitude (lineups that grow).
enum class StateMode { Quit, Join };

struct Move {
  double angle;  // radians in [0, 2*pi)
  double dist;   // units in [0, d_max]
};

// Splits and clips a raw action vector into per-UAV moves.
// Throws std::invalid_argument on length mismatch.
std::vector<Move> decode_action(const Vector& action, const ActionSpace& space);

struct StepResult {
  Vector state;  // successor state
  double reward;
  bool terminal;
  int served;  // users served this step (diagnostics)
};

// The episodic decision process: one fleet over N_T slots against a fixed
// user population. Deterministic given the scenario; all exploration noise
// lives outside.
class Env {
 public:
  explicit Env(ScenarioConfig cfg);

  Vector reset();
  StepResult step(const Vector& action);

  Vector state() const;  // encoded current state

  StateMode mode() const { return mode_; }
  bool dynamic_users() const { return cfg_.users.dynamic; }
  int n_uav() const { return cfg_.fleet.count; }
  int state_dim() const;
  int action_dim() const { return 2 * n_uav(); }
  int current_step() const { return t_; }  // step about to execute (1-based)
  bool terminal() const { return terminal_; }

  ActionSpace action_space() const;
  Normalizer state_normalizer() const;

  std::vector<UavState> fleet() const;
  const UserSet& users_at(int t) const;
  const ScenarioConfig& config() const { return cfg_; }

 private:
  void apply_status_transitions();
  double compute_reward(int* served) const;

  ScenarioConfig cfg_;
  StateMode mode_ = StateMode::Quit;
  std::vector<Vec2> pos_;
  std::vector<double> altitude_;
  std::vector<UavStatus> status_;
  BatteryLedger ledger_;
  std::vector<UserSet> snapshots_;  // one per segment (single when static)
  int t_ = 1;
  bool terminal_ = false;
  bool started_ = false;
};

}  // namespace uavnet
