// Acceptance gate: nine independently runnable criteria, one pass/fail line
// each. Run all with no arguments or a single one with --criterion N.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fd_check.hpp"
#include "uavnet/apc.hpp"
#include "uavnet/energy.hpp"
#include "uavnet/eval.hpp"
#include "uavnet/radio.hpp"

namespace fs = std::filesystem;
using namespace uavnet;

namespace {

char line_buf[512];

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  std::vsnprintf(line_buf, sizeof line_buf, format, args);
  va_end(args);
  return line_buf;
}

// ---------------------------------------------------------------------------
// shared toy scenario (two UAVs, twenty users in two tight hotspots, 6x6
// units, 30-step horizon) used by the learning, quit, determinism, and
// saturation criteria
ScenarioConfig toy_scenario() {
  ScenarioConfig cfg;
  cfg.area.side_m = 600.0;
  cfg.area.unit_m = 100.0;
  cfg.horizon.steps = 30;
  cfg.horizon.segments = 1;
  cfg.users.count = 20;
  cfg.users.hotspot_fraction = 1.0;
  cfg.users.dynamic = false;
  cfg.users.seed = 7;
  cfg.users.hotspots = {{.start = {1.5, 1.5}, .spread = 0.35},
                        {.start = {4.5, 4.5}, .spread = 0.35}};
  cfg.fleet.count = 2;
  cfg.fleet.placement = "circle";
  cfg.fleet.circle_center = {3.0, 3.0};
  cfg.fleet.circle_radius = 0.8;
  cfg.fleet.initial_energy = {2000.0, 2000.0};
  cfg.rl.hidden = {32, 24};
  cfg.rl.batch_size = 128;
  cfg.rl.workers = 2;
  cfg.rl.episodes_per_worker = 1000;
  cfg.rl.updates_per_episode = 100;
  cfg.rl.noise_decay = 0.9997;
  cfg.validate();
  return cfg;
}

ScenarioConfig toy_quit_scenario() {
  ScenarioConfig cfg = toy_scenario();
  cfg.fleet.initial_energy = {220.0, 2000.0};  // quits mid-horizon
  cfg.lineup_events = {{LineupEvent::Kind::Quit, 0, 1, {}, 0.0}};
  cfg.validate();
  return cfg;
}

UserSet toy_snapshot(const ScenarioConfig& cfg) {
  return snapshot_at(cfg.users, cfg.area, 1, cfg.users.seed, cfg.horizon.steps,
                     cfg.horizon.segments);
}

double median_sc_of_tail(const EpisodeTrace& trace, int k = 10) {
  std::vector<double> v;
  const int n = static_cast<int>(trace.steps.size());
  for (int i = std::max(0, n - k); i < n; ++i)
    v.push_back(trace.steps[static_cast<std::size_t>(i)].sc);
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// ---------------------------------------------------------------------------
// 1. physics exactness
bool criterion1(std::string& detail) {
  const PhysicalConstants c;
  struct Check {
    const char* name;
    double got, want, tol;
  };
  const Check checks[] = {
      {"free-space path loss at 300 m",
       path_loss_db(300.0, c.carrier_hz, c.excess_loss_db), 89.01, 0.01},
      {"coverage radius at 300 m / 60 deg",
       coverage_radius(300.0, c.aperture_rad()), 173.205, 0.001},
      {"hover power (raw)", level_power(0.0, c), 9.428, 0.001},
      {"slot energy for a 100 m move", slot_energy(100.0, c), 7.51, 0.01},
  };
  for (const auto& chk : checks)
    if (std::abs(chk.got - chk.want) > chk.tol) {
      detail = fmt("%s = %.6f, expected %.3f +- %.3f", chk.name, chk.got,
                   chk.want, chk.tol);
      return false;
    }
  detail = fmt("PL %.4f dB, radius %.3f m, hover %.3f raw, slot %.3f unit s",
               checks[0].got, checks[1].got, checks[2].got, checks[3].got);
  return true;
}

// ---------------------------------------------------------------------------
// 2. allocation vs an independent optimal-count oracle
//
// Association is fixed (strongest covering SINR, ties to the lower slot);
// within one UAV, granting resource blocks to users in descending SINR order
// is cheapest-demand-first, and for maximizing a served COUNT under a budget
// the optimum is computable exactly by a small knapsack DP. The greedy
// allocator must match that optimum on every snapshot and never exceed the
// budget.
bool criterion2(std::string& detail) {
  const PhysicalConstants c;
  const double unit_m = 100.0;
  const double r_units =
      coverage_radius(c.serving_altitude_m, c.aperture_rad()) / unit_m;
  const int budget = c.rb_count();
  Rng rng(42);

  for (int trial = 0; trial < 200; ++trial) {
    const int n_users = 1 + static_cast<int>(rng.uniform_int(30));
    const int n_uavs = 1 + static_cast<int>(rng.uniform_int(2));
    std::vector<Vec2> users, uavs;
    for (int i = 0; i < n_users; ++i)
      users.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});
    for (int k = 0; k < n_uavs; ++k)
      uavs.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});

    // independent association + exact count-knapsack per UAV
    std::vector<std::vector<int>> demands(static_cast<std::size_t>(n_uavs));
    for (const auto& u : users) {
      int best = -1;
      double best_sinr = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < n_uavs; ++k) {
        if (distance(u, uavs[static_cast<std::size_t>(k)]) > r_units) continue;
        const double s = sinr(u, static_cast<std::size_t>(k), uavs, c, unit_m);
        if (s > best_sinr) {
          best_sinr = s;
          best = k;
        }
      }
      if (best >= 0)
        demands[static_cast<std::size_t>(best)].push_back(
            rbs_needed(best_sinr, c));
    }
    int optimal = 0;
    for (const auto& list : demands) {
      std::vector<int> dp(static_cast<std::size_t>(budget) + 1, 0);
      for (int w : list)
        for (int b = budget; b >= w; --b)
          dp[static_cast<std::size_t>(b)] =
              std::max(dp[static_cast<std::size_t>(b)],
                       dp[static_cast<std::size_t>(b - w)] + 1);
      optimal += dp[static_cast<std::size_t>(budget)];
    }

    const AssociationMap map = associate_and_allocate(users, uavs, c, unit_m);
    if (map.served_count() != optimal) {
      detail = fmt("trial %d: greedy served %d, optimal %d", trial,
                   map.served_count(), optimal);
      return false;
    }
    std::vector<int> used(static_cast<std::size_t>(n_uavs), 0);
    for (const auto& a : map.users)
      if (a.served) used[static_cast<std::size_t>(a.uav)] += a.rbs;
    for (int k = 0; k < n_uavs; ++k)
      if (used[static_cast<std::size_t>(k)] > budget) {
        detail = fmt("trial %d: UAV %d allocated %d RBs over budget %d", trial,
                     k, used[static_cast<std::size_t>(k)], budget);
        return false;
      }
  }
  detail = "200 random snapshots: greedy count equals the knapsack optimum, "
           "budget respected";
  return true;
}

// ---------------------------------------------------------------------------
// 3. analytic gradients vs central finite differences
bool criterion3(std::string& detail) {
  Rng rng(7);
  double worst = 0.0;

  for (int trial = 0; trial < 20; ++trial) {
    const int sdim = 2 + static_cast<int>(rng.uniform_int(3));
    const int n_uav = 1 + static_cast<int>(rng.uniform_int(2));
    const ActionSpace box = ActionSpace::uav_actions(n_uav, 1.0);
    const int adim = box.dim();

    // actor with the tanh+scaling head: loss = proj . squash(actor(s))
    Mlp actor = Mlp::create(sdim, {8, 6}, adim, rng, 3e-3);
    Matrix proj(adim, 1);
    for (int i = 0; i < adim; ++i) proj(i, 0) = rng.uniform(-1.0, 1.0);
    Vector s(sdim);
    ForwardCache cache;
    do {
      for (int i = 0; i < sdim; ++i) s(i) = rng.uniform(-1.0, 1.0);
      actor.forward(s, cache);
    } while (!testcheck::away_from_kinks(cache));

    Matrix tanh_cache;
    actor.forward(s, cache);
    const Matrix y = box.squash(cache.pre.back(), &tanh_cache);
    (void)y;
    const Matrix dz = box.squash_backward(tanh_cache, proj);
    const Gradients ga = actor.backward(cache, dz);
    auto actor_loss = [&]() {
      return (proj.transpose() * box.squash(actor.forward(s))).sum();
    };
    worst = std::max(worst, testcheck::max_param_fd_error(actor, ga,
                                                          actor_loss));

    // critic on a state+action column, including the input gradient rows
    // that back the deterministic policy gradient
    Mlp critic = Mlp::create(sdim + adim, {8, 6}, 1, rng);
    Vector x(sdim + adim);
    ForwardCache ccache;
    do {
      for (int i = 0; i < sdim + adim; ++i) x(i) = rng.uniform(-1.0, 1.0);
      critic.forward(x, ccache);
    } while (!testcheck::away_from_kinks(ccache));
    Matrix dx;
    const Gradients gc = critic.backward(ccache, Matrix::Ones(1, 1), &dx);
    auto critic_loss = [&]() { return critic.forward(x).sum(); };
    worst = std::max(worst,
                     testcheck::max_param_fd_error(critic, gc, critic_loss));
    Vector dx_col = dx.col(0);
    worst = std::max(
        worst, testcheck::max_input_fd_error(x, dx_col, critic_loss));
  }

  detail = fmt("max relative error %.3g over 20 nets (threshold 1e-5)", worst);
  return worst < 1e-5;
}

// ---------------------------------------------------------------------------
// 4. DDPG mechanics: soft-update recurrence, gamma=0 regression, and
//    terminal transitions never touching the target nets
bool criterion4(std::string& detail) {
  const ActionSpace box = ActionSpace::uav_actions(1, 1.0);
  const Normalizer norm{Vector::Constant(4, -1.0), Vector::Constant(4, 1.0)};
  Rng rng(3);

  // (a) target nets follow the exact tau-interpolation recurrence
  AgentConfig lag_cfg;
  lag_cfg.state_dim = 4;
  lag_cfg.hidden = {6, 5};
  lag_cfg.tau = 0.01;
  Agent lag_agent(lag_cfg, norm, box, rng);
  Mlp shadow_actor = lag_agent.actor_target;
  Mlp shadow_critic = lag_agent.critic_target;
  auto drift = [&](Mlp& net) {
    for (auto& layer : net.layers) {
      for (Eigen::Index i = 0; i < layer.w.size(); ++i)
        layer.w.data()[i] += 0.01 * rng.gaussian();
      for (Eigen::Index i = 0; i < layer.b.size(); ++i)
        layer.b(i) += 0.01 * rng.gaussian();
    }
  };
  auto shadow_step = [&](const Mlp& main, Mlp& sh, double tau) {
    for (std::size_t l = 0; l < sh.layers.size(); ++l) {
      sh.layers[l].w = tau * main.layers[l].w + (1.0 - tau) * sh.layers[l].w;
      sh.layers[l].b = tau * main.layers[l].b + (1.0 - tau) * sh.layers[l].b;
    }
  };
  auto nets_equal = [](const Mlp& a, const Mlp& b) {
    for (std::size_t l = 0; l < a.layers.size(); ++l)
      if (a.layers[l].w != b.layers[l].w || a.layers[l].b != b.layers[l].b)
        return false;
    return true;
  };
  for (int step = 0; step < 1000; ++step) {
    drift(lag_agent.actor);
    drift(lag_agent.critic);
    lag_agent.soft_update_targets();
    shadow_step(lag_agent.actor, shadow_actor, lag_cfg.tau);
    shadow_step(lag_agent.critic, shadow_critic, lag_cfg.tau);
    if (!nets_equal(lag_agent.actor_target, shadow_actor) ||
        !nets_equal(lag_agent.critic_target, shadow_critic)) {
      detail = fmt("target diverged from the tau recurrence at step %d", step);
      return false;
    }
  }

  // (b) gamma = 0 turns the critic loss into supervised regression on the
  // rewards of a fixed 512 batch; Adam must drive the MSE below 1e-6
  AgentConfig reg_cfg;
  reg_cfg.state_dim = 4;
  reg_cfg.hidden = {16, 12};
  reg_cfg.gamma = 0.0;
  reg_cfg.learning_rate = 3e-3;
  reg_cfg.l2 = 0.0;
  reg_cfg.batch_size = 512;
  Agent regressor(reg_cfg, norm, box, rng);
  std::vector<Transition> data;
  data.reserve(512);
  for (int i = 0; i < 512; ++i) {
    Transition tr;
    tr.state = Vector(4);
    for (int j = 0; j < 4; ++j) tr.state(j) = rng.uniform(-1.0, 1.0);
    tr.action = Vector(2);
    tr.action(0) = rng.uniform(0.0, 6.28);
    tr.action(1) = rng.uniform(0.0, 1.0);
    tr.reward = 0.4 * tr.state(0) - 0.3 * tr.state(1) + 0.15 * tr.action(1) -
                0.02 * tr.action(0);
    tr.next_state = tr.state;
    tr.terminal = true;
    data.push_back(std::move(tr));
  }
  std::vector<const Transition*> batch;
  for (const auto& tr : data) batch.push_back(&tr);
  double mse = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (; iters < 5000; ++iters) {
    mse = regressor.critic_update(batch);
    if (mse < 1e-6) break;
  }
  if (mse >= 1e-6) {
    detail = fmt("gamma=0 regression MSE %.3g after 5000 updates", mse);
    return false;
  }

  // (c) an all-terminal batch must never evaluate the target nets, while a
  // batch with survivors must (proving the instrumentation is alive)
  AgentConfig term_cfg;
  term_cfg.state_dim = 4;
  term_cfg.hidden = {6, 5};
  term_cfg.gamma = 0.9;
  Agent term_agent(term_cfg, norm, box, rng);
  term_agent.actor_target.eval_cols = 0;
  term_agent.critic_target.eval_cols = 0;
  for (int i = 0; i < 5; ++i) term_agent.critic_update(batch);
  if (term_agent.actor_target.eval_cols != 0 ||
      term_agent.critic_target.eval_cols != 0) {
    detail = "terminal-only batch evaluated a target net";
    return false;
  }
  data[0].terminal = false;
  term_agent.critic_update(batch);
  if (term_agent.actor_target.eval_cols == 0 ||
      term_agent.critic_target.eval_cols == 0) {
    detail = "instrumentation failed to observe a bootstrapped batch";
    return false;
  }

  detail = fmt("lag recurrence exact over 1000 steps; regression MSE %.2g "
               "after %d updates; targets untouched on terminal batches",
               mse, iters + 1);
  return true;
}

// ---------------------------------------------------------------------------
// 5. environment invariants over random episodes plus constructed cases
bool criterion5(std::string& detail) {
  Rng rng(11);
  int quit_freezes_checked = 0;

  for (int episode = 0; episode < 100; ++episode) {
    ScenarioConfig cfg;
    cfg.horizon.steps = 20;
    cfg.horizon.segments = 1;
    cfg.users.count = 10 + static_cast<int>(rng.uniform_int(11));
    cfg.users.hotspot_fraction = 0.0;
    cfg.users.seed = rng.next_u64();
    cfg.fleet.count = 2 + static_cast<int>(rng.uniform_int(2));
    cfg.fleet.placement = "circle";
    cfg.fleet.circle_center = {5.0, 5.0};
    cfg.fleet.circle_radius = 1.0 + rng.uniform(0.0, 1.5);
    cfg.fleet.initial_energy.clear();
    for (int k = 0; k < cfg.fleet.count; ++k)
      cfg.fleet.initial_energy.push_back(rng.uniform(180.0, 450.0));
    cfg.validate();

    Env env(cfg);
    env.reset();
    const double n_users_beta = us_score(cfg.users.count,
                                         cfg.consts.score_exponent);
    std::vector<std::optional<UavState>> frozen(
        static_cast<std::size_t>(cfg.fleet.count));

    while (!env.terminal()) {
      Vector a(env.action_dim());
      for (int k = 0; k < env.n_uav(); ++k) {
        a(k) = rng.uniform(0.0, 6.2831);
        a(env.n_uav() + k) = rng.uniform(0.0, cfg.d_max_units());
      }
      const StepResult res = env.step(a);

      // reward * N_u^beta == SC_t
      const double lhs = res.reward * n_users_beta;
      const double rhs = us_score(res.served, cfg.consts.score_exponent);
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
        detail = fmt("episode %d: reward*N^beta = %.12f but SC = %.12f",
                     episode, lhs, rhs);
        return false;
      }

      // quit UAVs stay bitwise frozen
      const auto fleet = env.fleet();
      for (std::size_t k = 0; k < fleet.size(); ++k) {
        if (fleet[k].status != UavStatus::Quit) continue;
        if (!frozen[k]) {
          frozen[k] = fleet[k];
          continue;
        }
        ++quit_freezes_checked;
        if (fleet[k].pos.x != frozen[k]->pos.x ||
            fleet[k].pos.y != frozen[k]->pos.y ||
            fleet[k].energy != frozen[k]->energy ||
            fleet[k].altitude != frozen[k]->altitude) {
          detail = fmt("episode %d: quit UAV %zu moved after freezing",
                       episode, k);
          return false;
        }
      }
    }
  }
  if (quit_freezes_checked == 0) {
    detail = "random episodes never produced a battery quit to check";
    return false;
  }

  // boundary violation: movement cancelled, episode terminal, drain applied
  {
    ScenarioConfig cfg;
    cfg.users.count = 5;
    cfg.users.hotspot_fraction = 0.0;
    cfg.fleet.count = 1;
    cfg.fleet.placement = "explicit";
    cfg.fleet.positions = {{0.2, 5.0}};
    cfg.fleet.initial_energy = {10000.0};
    cfg.horizon.steps = 20;
    cfg.horizon.segments = 1;
    cfg.validate();
    Env env(cfg);
    env.reset();
    Vector a(2);
    a << 3.14159265358979, 0.5;  // west, half a unit: crosses x = 0
    const StepResult res = env.step(a);
    const auto fleet = env.fleet();
    if (!res.terminal || fleet[0].pos.x != 0.2 || fleet[0].pos.y != 5.0 ||
        fleet[0].energy >= 10000.0) {
      detail = fmt("boundary step: terminal=%d pos=(%.3f,%.3f) E=%.1f",
                   res.terminal ? 1 : 0, fleet[0].pos.x, fleet[0].pos.y,
                   fleet[0].energy);
      return false;
    }
  }

  // a joining UAV reaches 300 m on its 8th elevation step
  {
    ScenarioConfig cfg;
    cfg.users.count = 5;
    cfg.users.hotspot_fraction = 0.0;
    cfg.fleet.count = 2;
    cfg.fleet.placement = "explicit";
    cfg.fleet.positions = {{5.0, 5.0}, {3.0, 3.0}};
    cfg.fleet.initial_energy = {10000.0, 10000.0};
    cfg.horizon.steps = 20;
    cfg.horizon.segments = 1;
    LineupEvent join;
    join.kind = LineupEvent::Kind::Join;
    join.uav_index = 1;
    join.takeoff_step = 2;
    join.takeoff_point = {3.0, 3.0};
    join.start_altitude_m = 0.0;
    cfg.lineup_events = {join};
    cfg.validate();
    Env env(cfg);
    env.reset();
    const Vector hold = Vector::Zero(env.action_dim());
    int climb_steps = 0;
    double altitude_after_7 = -1.0, altitude_after_8 = -1.0;
    double previous = 0.0;
    while (!env.terminal()) {
      env.step(hold);
      const double alt = env.fleet()[1].altitude;
      if (alt > previous) {
        ++climb_steps;
        if (climb_steps == 7) altitude_after_7 = alt;
        if (climb_steps == 8) altitude_after_8 = alt;
      }
      previous = alt;
    }
    if (climb_steps != 8 || altitude_after_7 >= 300.0 ||
        altitude_after_8 != 300.0) {
      detail = fmt("climb took %d steps; altitude after 7/8: %.1f/%.1f",
                   climb_steps, altitude_after_7, altitude_after_8);
      return false;
    }
  }

  detail = fmt("reward identity and quit freeze over 100 random episodes "
               "(%d frozen-state checks); boundary cancel+terminal; 8-step "
               "climb to 300 m",
               quit_freezes_checked);
  return true;
}

// ---------------------------------------------------------------------------
// 6. toy-scale learning benchmark vs the placement oracle
bool criterion6(std::string& detail) {
  const ScenarioConfig cfg = toy_scenario();
  const PlacementResult oracle =
      brute_force_placement(toy_snapshot(cfg), cfg, cfg.fleet.count, 0.25);
  const double threshold = 0.9 * oracle.score;

  std::string per_seed;
  bool ok = true;
  for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
    TempDir dir("uavnet_acceptance6_" + std::to_string(seed));
    TrainOptions opts;
    opts.seed = seed;
    opts.out_dir = dir.path.string();
    opts.progress = false;
    const TrainResult result = run_training(cfg, opts);
    const EpisodeTrace trace =
        run_policy(policy_from(result.best_checkpoint), cfg);
    const double steady = median_sc_of_tail(trace);
    per_seed += fmt(" seed %llu: %.0f", seed, steady);
    ok = ok && steady >= threshold;
  }
  detail = fmt("steady-state US%s vs oracle %.0f (need >= %.0f, 3/3 seeds)",
               per_seed.c_str(), oracle.score, threshold);
  return ok;
}

// ---------------------------------------------------------------------------
// 7. toy-scale quit benchmark: proactive never worse than passive reaction
bool criterion7(std::string& detail) {
  const ScenarioConfig cfg = toy_quit_scenario();

  std::string per_seed;
  bool ok = true;
  for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
    TempDir dir("uavnet_acceptance7_" + std::to_string(seed));
    TrainOptions opts;
    opts.seed = seed;
    opts.out_dir = dir.path.string();
    opts.progress = false;
    const TrainResult result = run_training(cfg, opts);
    const Policy psr = policy_from(result.best_checkpoint);

    const EpisodeTrace proactive = run_policy(psr, cfg);
    const EpisodeTrace baseline = passive_baseline(cfg, psr, psr);
    const GainReport gain = transition_gain(proactive, baseline);

    // the comparison is meaningful only if the battery quit actually fired
    bool quit_fired = false;
    for (const auto& s : proactive.steps)
      for (const auto& u : s.fleet)
        quit_fired = quit_fired || u.status == UavStatus::Quit;
    if (!quit_fired) {
      detail = fmt("seed %llu: the battery quit never fired", seed);
      return false;
    }

    auto window_min = [&](const EpisodeTrace& tr) {
      int lowest = std::numeric_limits<int>::max();
      for (const auto& s : tr.steps)
        if (s.t >= gain.window_first && s.t <= gain.window_last)
          lowest = std::min(lowest, s.served);
      return lowest == std::numeric_limits<int>::max() ? 0 : lowest;
    };
    const int dip_p = window_min(proactive);
    const int dip_b = window_min(baseline);
    per_seed += fmt(" seed %llu: gain %.2f%% dip %d vs %d;", seed,
                    gain.gain_percent, dip_p, dip_b);
    ok = ok && gain.gain_percent >= 0.0 && dip_p >= dip_b;
  }
  detail = fmt("%s (need gain >= 0%% and no deeper dip, 3/3 seeds)",
               per_seed.c_str());
  return ok;
}

// ---------------------------------------------------------------------------
// 8. bit-for-bit determinism of seeded single-worker training
bool criterion8(std::string& detail) {
  ScenarioConfig cfg = toy_scenario();
  cfg.rl.episodes_per_worker = 60;
  cfg.validate();

  auto read_bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };

  TempDir dir_a("uavnet_acceptance8_a"), dir_b("uavnet_acceptance8_b");
  TrainResult results[2];
  const fs::path* dirs[2] = {&dir_a.path, &dir_b.path};
  for (int run = 0; run < 2; ++run) {
    TrainOptions opts;
    opts.workers = 1;
    opts.seed = 5;
    opts.out_dir = dirs[run]->string();
    opts.progress = false;
    results[run] = run_training(cfg, opts);
  }

  const auto& a = results[0];
  const auto& b = results[1];
  if (a.episodes.size() != b.episodes.size() ||
      a.updates.size() != b.updates.size()) {
    detail = "run shapes differ";
    return false;
  }
  for (std::size_t i = 0; i < a.episodes.size(); ++i)
    if (a.episodes[i].reward != b.episodes[i].reward ||
        a.episodes[i].smoothed != b.episodes[i].smoothed ||
        a.episodes[i].steps != b.episodes[i].steps) {
      detail = fmt("episode %zu diverged between identical runs", i);
      return false;
    }
  for (std::size_t i = 0; i < a.updates.size(); ++i)
    if (a.updates[i].critic_loss != b.updates[i].critic_loss ||
        a.updates[i].actor_grad_norm != b.updates[i].actor_grad_norm) {
      detail = fmt("update %zu diverged between identical runs", i);
      return false;
    }
  for (const char* name : {"best.ckpt", "final.ckpt"}) {
    const std::string bytes_a = read_bytes(*dirs[0] / name);
    const std::string bytes_b = read_bytes(*dirs[1] / name);
    if (bytes_a.empty() || bytes_a != bytes_b) {
      detail = fmt("%s differs between identical runs", name);
      return false;
    }
  }
  detail = fmt("two seeded runs: %zu episodes, %zu updates, and both "
               "checkpoints identical bit for bit",
               a.episodes.size(), a.updates.size());
  return true;
}

// ---------------------------------------------------------------------------
// 9. oracle saturation: more UAVs help less and less
bool criterion9(std::string& detail) {
  const ScenarioConfig cfg = toy_scenario();
  const UserSet snap = toy_snapshot(cfg);
  double score[4] = {0, 0, 0, 0};
  for (int n = 1; n <= 3; ++n)
    score[n] = brute_force_placement(snap, cfg, n, 0.5).score;
  const double inc1 = score[2] - score[1];
  const double inc2 = score[3] - score[2];
  detail = fmt("oracle US for 1/2/3 UAVs: %.0f/%.0f/%.0f (increments %.0f, "
               "%.0f)",
               score[1], score[2], score[3], inc1, inc2);
  return score[1] <= score[2] && score[2] <= score[3] && inc2 >= 0.0 &&
         inc1 > inc2;
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) which = std::atoi(argv[i + 1]);

  struct Row {
    int id;
    const char* name;
    bool (*fn)(std::string&);
  };
  const Row rows[] = {
      {1, "physics exactness", criterion1},
      {2, "allocation optimality", criterion2},
      {3, "gradient verification", criterion3},
      {4, "DDPG mechanics", criterion4},
      {5, "environment invariants", criterion5},
      {6, "toy learning benchmark", criterion6},
      {7, "toy quit benchmark", criterion7},
      {8, "training determinism", criterion8},
      {9, "placement saturation trend", criterion9},
  };

  bool all_ok = true;
  bool ran_any = false;
  for (const auto& row : rows) {
    if (which != 0 && which != row.id) continue;
    ran_any = true;
    std::string detail;
    bool ok = false;
    try {
      ok = row.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d (%s): %s — %s\n", row.id, row.name,
                ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  if (!ran_any) {
    std::fprintf(stderr, "unknown criterion %d (valid: 1..9)\n", which);
    return 2;
  }
  return all_ok ? 0 : 1;
}
