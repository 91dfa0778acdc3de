#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "uavnet/action_space.hpp"
#include "uavnet/checkpoint.hpp"
#include "uavnet/mlp.hpp"
#include "uavnet/rng.hpp"

namespace uavnet {

struct Transition {
  Vector state;
  Vector action;  // raw (unnormalized) action as executed
  double reward;
  Vector next_state;
  bool terminal;
};

// Append-only experience store; nothing is ever evicted, so every episode of
// a run stays sampleable.
class ReplayBuffer {
 public:
  void push(Transition t) { store_.push_back(std::move(t)); }
  std::size_t size() const { return store_.size(); }
  const Transition& operator[](std::size_t i) const { return store_[i]; }

  // Uniform sample of k distinct indices (Floyd's algorithm), deterministic
  // under the supplied rng. Throws std::length_error when k > size().
  std::vector<std::size_t> sample_indices(std::size_t k, Rng& rng) const;

 private:
  std::vector<Transition> store_;
};

// Exploration noise variance with geometric decay per time step.
struct NoiseState {
  double variance = 0.6;
  double decay = 0.9995;

  double sigma() const { return std::sqrt(variance); }
  void step() { variance *= decay; }
};

// Actor snapshot sufficient to run a policy: net plus the input/output
// scaling it was trained with.
struct Policy {
  Mlp actor;
  Normalizer state_norm;
  ActionSpace actions;

  Vector act(const Vector& state) const;
  // act() plus per-channel Gaussian noise scaled by the channel's half-range,
  // clipped back into bounds; decays the noise state.
  Vector explore(const Vector& state, NoiseState& noise, Rng& rng) const;
};

// Deployable policy carried by a checkpoint (greedy evaluation, workers).
inline Policy policy_from(const Checkpoint& ckpt) {
  return {ckpt.actor, ckpt.state_norm, ckpt.actions};
}

struct AgentConfig {
  int state_dim = 0;
  std::vector<int> hidden{400, 300};
  double gamma = 0.9;
  double tau = 0.001;
  double learning_rate = 1e-4;
  double l2 = 1e-4;
  int batch_size = 512;
};

// DDPG learner: main and target nets, optimizers, and the update rules.
class Agent {
 public:
  Agent(const AgentConfig& cfg, const Normalizer& state_norm,
        const ActionSpace& actions, Rng& rng);
  Agent(const AgentConfig& cfg, const Checkpoint& ckpt);

  Vector act(const Vector& state) const;

  // act() plus per-channel Gaussian noise scaled by the channel's half-range,
  // clipped back into bounds; decays the noise state.
  Vector explore(const Vector& state, NoiseState& noise, Rng& rng) const;

  // One optimizer step on the critic against targets
  // y = r + gamma * Q'(S', mu'(S')) (terminal rows use y = r and never touch
  // the target nets). Returns the pre-update batch MSE.
  double critic_update(const std::vector<const Transition*>& batch);

  // One ascent step on the actor along grad_theta mean Q(S, mu(S)).
  // Returns the L2 norm of the parameter gradient.
  double actor_update(const std::vector<const Transition*>& batch);

  void soft_update_targets();

  Policy policy() const { return {actor, state_norm, actions}; }
  Checkpoint to_checkpoint(int mode, bool dynamic_users, int n_uav) const;

  Mlp actor, critic, actor_target, critic_target;
  Normalizer state_norm;
  ActionSpace actions;
  Normalizer action_norm;
  AgentConfig cfg;

 private:
  Matrix normalized_states(const std::vector<const Transition*>& batch,
                           bool next) const;

  Adam actor_opt_, critic_opt_;
};

}  // namespace uavnet
