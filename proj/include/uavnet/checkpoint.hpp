#pragma once

#include <stdexcept>
#include <string>

#include "uavnet/action_space.hpp"
#include "uavnet/mlp.hpp"

namespace uavnet {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything needed to rebuild a deployed agent: the four nets plus the state
// and action scaling that their inputs/outputs were trained against.
struct Checkpoint {
  int mode = 0;  // 0: battery state components, 1: altitude state components
  bool dynamic_users = false;
  int n_uav = 0;
  Normalizer state_norm;
  ActionSpace actions;
  Mlp actor, critic, actor_target, critic_target;
};

// Raw binary dump (host-endian doubles); round-trips bit-exactly.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace uavnet
