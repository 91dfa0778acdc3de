#include "uavnet/env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavnet {

std::vector<Move> decode_action(const Vector& action,
                                const ActionSpace& space) {
  if (action.size() != space.lo.size())
    throw std::invalid_argument("action vector length mismatch");
  const Vector a = space.clip(action);
  const int n = static_cast<int>(a.size()) / 2;
  std::vector<Move> moves(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    moves[static_cast<std::size_t>(i)] = {a(i), a(n + i)};
  return moves;
}

Env::Env(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  mode_ = cfg_.join_event().has_value() ? StateMode::Join : StateMode::Quit;

  // the user population is part of the task definition: generated once,
  // snapshotted per segment when the clusters commute
  const int segs = cfg_.users.dynamic ? cfg_.horizon.segments : 1;
  const int seg_len = cfg_.horizon.steps / cfg_.horizon.segments;
  snapshots_.reserve(static_cast<std::size_t>(segs));
  for (int s = 0; s < segs; ++s)
    snapshots_.push_back(snapshot_at(cfg_.users, cfg_.area, s * seg_len + 1,
                                     cfg_.users.seed, cfg_.horizon.steps,
                                     cfg_.horizon.segments));
}

Vector Env::reset() {
  const int n = n_uav();
  pos_.assign(static_cast<std::size_t>(n), {});
  altitude_.assign(static_cast<std::size_t>(n), cfg_.consts.serving_altitude_m);
  status_.assign(static_cast<std::size_t>(n), UavStatus::Active);

  if (cfg_.fleet.placement == "circle") {
    for (int i = 0; i < n; ++i) {
      const double ang = 2.0 * std::numbers::pi * i / n;
      pos_[static_cast<std::size_t>(i)] =
          cfg_.fleet.circle_center +
          Vec2{std::cos(ang), std::sin(ang)} * cfg_.fleet.circle_radius;
    }
  } else {
    for (int i = 0; i < n; ++i)
      pos_[static_cast<std::size_t>(i)] =
          cfg_.fleet.positions[static_cast<std::size_t>(i)];
  }
  const double side = cfg_.area.side_units();
  for (const auto& p : pos_)
    if (!in_square(p, side))
      throw ConfigError("initial UAV position outside the target area");

  std::vector<double> e0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) e0[static_cast<std::size_t>(i)] = cfg_.initial_energy(i);
  ledger_ = BatteryLedger(std::move(e0), cfg_.consts.quit_threshold_units);

  if (const auto join = cfg_.join_event()) {
    const auto i = static_cast<std::size_t>(join->uav_index);
    pos_[i] = join->takeoff_point;
    altitude_[i] = join->start_altitude_m;
    status_[i] = UavStatus::PreTakeoff;
  }

  t_ = 1;
  terminal_ = false;
  started_ = true;
  return state();
}

void Env::apply_status_transitions() {
  const auto join = cfg_.join_event();
  for (std::size_t i = 0; i < status_.size(); ++i) {
    switch (status_[i]) {
      case UavStatus::Active:
        if (ledger_.quit[i]) status_[i] = UavStatus::Quit;
        break;
      case UavStatus::PreTakeoff:
        if (join && t_ >= join->takeoff_step) status_[i] = UavStatus::Elevating;
        break;
      case UavStatus::Elevating:
        if (altitude_[i] >= cfg_.consts.serving_altitude_m)
          status_[i] = UavStatus::Active;
        break;
      case UavStatus::Quit:
        break;
    }
  }
}

double Env::compute_reward(int* served) const {
  std::vector<Vec2> active;
  for (std::size_t i = 0; i < pos_.size(); ++i)
    if (status_[i] == UavStatus::Active) active.push_back(pos_[i]);

  const auto& users = users_at(t_);
  const auto assoc =
      associate_and_allocate(users.positions, active, cfg_.consts, cfg_.area.unit_m);
  const int count = assoc.served_count();
  if (served != nullptr) *served = count;
  if (cfg_.users.count == 0) return 0.0;
  return std::pow(static_cast<double>(count) / cfg_.users.count,
                  cfg_.consts.score_exponent);
}

StepResult Env::step(const Vector& action) {
  if (!started_) throw std::logic_error("step before reset");
  if (terminal_) throw std::logic_error("step on a terminal state");

  apply_status_transitions();

  const auto moves = decode_action(action, action_space());
  const double side = cfg_.area.side_units();
  const double climb = cfg_.consts.elevation_speed_mps * cfg_.consts.slot_duration_s;
  bool out_of_bounds = false;

  for (std::size_t i = 0; i < pos_.size(); ++i) {
    const auto& mv = moves[i];
    switch (status_[i]) {
      case UavStatus::Quit:
      case UavStatus::PreTakeoff:
        break;  // fully frozen
      case UavStatus::Elevating: {
        const Vec2 target =
            pos_[i] + Vec2{std::cos(mv.angle), std::sin(mv.angle)} * mv.dist;
        if (in_square(target, side)) {
          pos_[i] = target;
        } else {
          out_of_bounds = true;  // movement cancelled
        }
        altitude_[i] =
            std::min(altitude_[i] + climb, cfg_.consts.serving_altitude_m);
        break;
      }
      case UavStatus::Active: {
        const Vec2 target =
            pos_[i] + Vec2{std::cos(mv.angle), std::sin(mv.angle)} * mv.dist;
        if (in_square(target, side)) {
          pos_[i] = target;
        } else {
          out_of_bounds = true;  // movement cancelled; the flight still drains
        }
        apply_drain(ledger_, i,
                    slot_energy(mv.dist * cfg_.area.unit_m, cfg_.consts));
        break;
      }
    }
  }

  StepResult result;
  result.reward = compute_reward(&result.served);
  terminal_ = out_of_bounds || t_ == cfg_.horizon.steps;
  ++t_;
  result.state = state();
  result.terminal = terminal_;
  return result;
}

Vector Env::state() const {
  if (!started_) throw std::logic_error("state before reset");
  const int n = n_uav();
  Vector s(state_dim());
  for (int i = 0; i < n; ++i) {
    s(i) = pos_[static_cast<std::size_t>(i)].x;
    s(n + i) = pos_[static_cast<std::size_t>(i)].y;
    s(2 * n + i) = mode_ == StateMode::Quit
                       ? ledger_.energy[static_cast<std::size_t>(i)]
                       : altitude_[static_cast<std::size_t>(i)];
  }
  if (dynamic_users()) s(3 * n) = static_cast<double>(t_);
  return s;
}

int Env::state_dim() const { return 3 * n_uav() + (dynamic_users() ? 1 : 0); }

ActionSpace Env::action_space() const {
  return ActionSpace::uav_actions(n_uav(), cfg_.d_max_units());
}

Normalizer Env::state_normalizer() const {
  const int n = n_uav();
  Normalizer norm;
  norm.lo = Vector::Zero(state_dim());
  norm.hi = Vector::Zero(state_dim());
  const double side = cfg_.area.side_units();
  const auto join = cfg_.join_event();
  for (int i = 0; i < n; ++i) {
    norm.hi(i) = side;
    norm.hi(n + i) = side;
    if (mode_ == StateMode::Quit) {
      norm.lo(2 * n + i) = cfg_.consts.quit_threshold_units;
      norm.hi(2 * n + i) = cfg_.initial_energy(i);
    } else {
      norm.lo(2 * n + i) = join ? join->start_altitude_m : 0.0;
      norm.hi(2 * n + i) = cfg_.consts.serving_altitude_m;
    }
  }
  if (dynamic_users()) {
    norm.lo(3 * n) = 1.0;
    norm.hi(3 * n) = static_cast<double>(cfg_.horizon.steps);
  }
  return norm;
}

std::vector<UavState> Env::fleet() const {
  std::vector<UavState> out;
  out.reserve(pos_.size());
  for (std::size_t i = 0; i < pos_.size(); ++i)
    out.push_back({pos_[i], ledger_.energy[i], altitude_[i], status_[i]});
  return out;
}

const UserSet& Env::users_at(int t) const {
  if (!cfg_.users.dynamic) return snapshots_.front();
  const int seg = segment_of_step(t, cfg_.horizon.steps, cfg_.horizon.segments);
  return snapshots_[static_cast<std::size_t>(seg - 1)];
}

}  // namespace uavnet
