#include "uavnet/ddpg.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace uavnet {

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t k,
                                                      Rng& rng) const {
  if (k > store_.size())
    throw std::length_error("batch larger than the replay buffer");
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::unordered_set<std::size_t> seen;
  seen.reserve(k * 2);
  for (std::size_t j = store_.size() - k; j < store_.size(); ++j) {
    const std::size_t t = rng.uniform_int(j + 1);
    if (seen.insert(t).second) {
      picked.push_back(t);
    } else {
      seen.insert(j);
      picked.push_back(j);
    }
  }
  return picked;
}

namespace {

Vector with_exploration_noise(const ActionSpace& actions, Vector a,
                              NoiseState& noise, Rng& rng) {
  const double sigma = noise.sigma();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double half = (actions.hi(i) - actions.lo(i)) / 2.0;
    a(i) += half * sigma * rng.gaussian();
  }
  noise.step();
  return actions.clip(a);
}

}  // namespace

Vector Policy::act(const Vector& state) const {
  const Matrix z = actor.forward(state_norm.normalize(state));
  return actions.squash(z).col(0);
}

Vector Policy::explore(const Vector& state, NoiseState& noise,
                       Rng& rng) const {
  return with_exploration_noise(actions, act(state), noise, rng);
}

Agent::Agent(const AgentConfig& cfg_in, const Normalizer& norm,
             const ActionSpace& act_space, Rng& rng)
    : state_norm(norm),
      actions(act_space),
      action_norm(act_space.normalizer()),
      cfg(cfg_in),
      actor_opt_(cfg_in.learning_rate, cfg_in.l2),
      critic_opt_(cfg_in.learning_rate, cfg_in.l2) {
  if (cfg.state_dim <= 0) throw std::invalid_argument("state_dim not set");
  actor = Mlp::create(cfg.state_dim, cfg.hidden, actions.dim(), rng, 3e-3);
  critic = Mlp::create(cfg.state_dim + actions.dim(), cfg.hidden, 1, rng);
  // targets start as exact copies of the mains
  actor_target = actor;
  critic_target = critic;
}

Agent::Agent(const AgentConfig& cfg_in, const Checkpoint& ckpt)
    : actor(ckpt.actor),
      critic(ckpt.critic),
      actor_target(ckpt.actor_target),
      critic_target(ckpt.critic_target),
      state_norm(ckpt.state_norm),
      actions(ckpt.actions),
      action_norm(ckpt.actions.normalizer()),
      cfg(cfg_in),
      actor_opt_(cfg_in.learning_rate, cfg_in.l2),
      critic_opt_(cfg_in.learning_rate, cfg_in.l2) {
  cfg.state_dim = actor.input_dim();
}

Vector Agent::act(const Vector& state) const {
  const Matrix z = actor.forward(state_norm.normalize(state));
  return actions.squash(z).col(0);
}

Vector Agent::explore(const Vector& state, NoiseState& noise, Rng& rng) const {
  return with_exploration_noise(actions, act(state), noise, rng);
}

Matrix Agent::normalized_states(const std::vector<const Transition*>& batch,
                                bool next) const {
  Matrix s(cfg.state_dim, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i)
    s.col(static_cast<Eigen::Index>(i)) =
        next ? batch[i]->next_state : batch[i]->state;
  return state_norm.normalize_cols(s);
}

double Agent::critic_update(const std::vector<const Transition*>& batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto b = static_cast<Eigen::Index>(batch.size());

  // labels: r for terminal rows, r + gamma*Q'(S', mu'(S')) otherwise; the
  // target nets only ever see the non-terminal successors
  Vector y(b);
  std::vector<Eigen::Index> alive;
  for (Eigen::Index i = 0; i < b; ++i) {
    y(i) = batch[static_cast<std::size_t>(i)]->reward;
    if (!batch[static_cast<std::size_t>(i)]->terminal) alive.push_back(i);
  }
  if (!alive.empty()) {
    Matrix s2(cfg.state_dim, static_cast<Eigen::Index>(alive.size()));
    for (std::size_t k = 0; k < alive.size(); ++k)
      s2.col(static_cast<Eigen::Index>(k)) = state_norm.normalize(
          batch[static_cast<std::size_t>(alive[k])]->next_state);
    const Matrix a2 = actions.squash(actor_target.forward(s2));
    Matrix x2(cfg.state_dim + actions.dim(),
              static_cast<Eigen::Index>(alive.size()));
    x2.topRows(cfg.state_dim) = s2;
    x2.bottomRows(actions.dim()) = action_norm.normalize_cols(a2);
    const Matrix q2 = critic_target.forward(x2);
    for (std::size_t k = 0; k < alive.size(); ++k)
      y(alive[k]) += cfg.gamma * q2(0, static_cast<Eigen::Index>(k));
  }

  Matrix x(cfg.state_dim + actions.dim(), b);
  x.topRows(cfg.state_dim) = normalized_states(batch, false);
  for (Eigen::Index i = 0; i < b; ++i)
    x.block(cfg.state_dim, i, actions.dim(), 1) = action_norm.normalize(
        batch[static_cast<std::size_t>(i)]->action);

  ForwardCache cache;
  const Matrix q = critic.forward(x, cache);
  const Matrix err = q - y.transpose();
  const double loss = err.array().square().mean();

  const Matrix upstream = 2.0 * err / static_cast<double>(b);
  const Gradients g = critic.backward(cache, upstream);
  critic_opt_.step(critic, g);
  return loss;
}

double Agent::actor_update(const std::vector<const Transition*>& batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto b = static_cast<Eigen::Index>(batch.size());

  const Matrix s = normalized_states(batch, false);
  ForwardCache actor_cache;
  Matrix tanh_cache;
  const Matrix a_raw = actions.squash(actor.forward(s, actor_cache), &tanh_cache);

  Matrix x(cfg.state_dim + actions.dim(), b);
  x.topRows(cfg.state_dim) = s;
  x.bottomRows(actions.dim()) = action_norm.normalize_cols(a_raw);

  ForwardCache critic_cache;
  critic.forward(x, critic_cache);

  // d(mean Q)/d(critic input), action rows only
  Matrix dx;
  const Matrix ones = Matrix::Ones(1, b) / static_cast<double>(b);
  critic.backward(critic_cache, ones, &dx);
  Matrix da_norm = dx.bottomRows(actions.dim());

  // chain through action normalization and the squashing head
  const Vector slope = action_norm.slope();
  for (Eigen::Index i = 0; i < da_norm.rows(); ++i)
    da_norm.row(i) *= slope(i);
  const Matrix dz = actions.squash_backward(tanh_cache, da_norm);

  Gradients g = actor.backward(actor_cache, dz);
  // ascent on Q: negate for the descent-shaped optimizer
  double sq_norm = 0.0;
  for (auto& gw : g.w) {
    sq_norm += gw.array().square().sum();
    gw = -gw;
  }
  for (auto& gb : g.b) {
    sq_norm += gb.array().square().sum();
    gb = -gb;
  }
  actor_opt_.step(actor, g);
  return std::sqrt(sq_norm);
}

void Agent::soft_update_targets() {
  soft_update(actor, actor_target, cfg.tau);
  soft_update(critic, critic_target, cfg.tau);
}

Checkpoint Agent::to_checkpoint(int mode, bool dynamic_users, int n_uav) const {
  Checkpoint ckpt;
  ckpt.mode = mode;
  ckpt.dynamic_users = dynamic_users;
  ckpt.n_uav = n_uav;
  ckpt.state_norm = state_norm;
  ckpt.actions = actions;
  ckpt.actor = actor;
  ckpt.critic = critic;
  ckpt.actor_target = actor_target;
  ckpt.critic_target = critic_target;
  return ckpt;
}

}  // namespace uavnet
