#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "uavnet/apc.hpp"

using namespace uavnet;

namespace {

bool vectors_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

bool nets_equal(const Mlp& a, const Mlp& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    if (a.layers[l].w.rows() != b.layers[l].w.rows() ||
        a.layers[l].w.cols() != b.layers[l].w.cols())
      return false;
    if (!(a.layers[l].w.array() == b.layers[l].w.array()).all()) return false;
    if (!(a.layers[l].b.array() == b.layers[l].b.array()).all()) return false;
  }
  return true;
}

// Two UAVs stacked at the area center: five one-unit moves can never leave
// the 10-unit square, so every episode runs the full horizon.
ScenarioConfig tiny_scenario() {
  ScenarioConfig cfg;
  cfg.users.count = 10;
  cfg.users.hotspot_fraction = 0.0;
  cfg.fleet.count = 2;
  cfg.fleet.circle_center = {5.0, 5.0};
  cfg.fleet.circle_radius = 0.0;
  cfg.horizon.steps = 5;
  cfg.horizon.segments = 1;
  cfg.rl.hidden = {8, 6};
  cfg.rl.batch_size = 16;
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("a worker uploads one contiguous episode ending at the boundary") {
  ScenarioConfig cfg;
  cfg.users.count = 5;
  cfg.users.hotspot_fraction = 0.0;
  cfg.fleet.count = 2;
  cfg.fleet.placement = "explicit";
  cfg.fleet.positions = {{1.2, 5.0}, {8.0, 5.0}};
  cfg.validate();

  Env env(cfg);
  // all-zero net: every UAV heads west (alpha = pi) half a unit per step, so
  // the UAV starting at x = 1.2 attempts x = -0.3 on its third step
  Mlp zero;
  zero.layers.push_back({Matrix::Zero(4, 6), Vector::Zero(4)});
  Policy scripted{zero, env.state_normalizer(), env.action_space()};

  Channel<WorkerMessage> inbox;
  Channel<Policy> replies;
  replies.send(scripted);
  replies.send(scripted);  // post-episode refresh so the worker can exit
  std::thread worker(worker_loop, 3, Env(cfg), 1, 99ull, 0.0, 0.9995,
                     std::ref(inbox), std::ref(replies));
  WorkerMessage msg = inbox.receive();
  worker.join();

  CHECK(msg.worker == 3);
  CHECK(msg.episode == 0);
  CHECK_FALSE(msg.failed);
  REQUIRE(msg.transitions.size() == 3);
  CHECK_FALSE(msg.transitions[0].terminal);
  CHECK_FALSE(msg.transitions[1].terminal);
  CHECK(msg.transitions[2].terminal);
  for (std::size_t i = 0; i + 1 < msg.transitions.size(); ++i)
    CHECK(vectors_equal(msg.transitions[i].next_state,
                        msg.transitions[i + 1].state));

  // state layout [x1, x2, y1, y2, E1, E2]
  const Vector& last = msg.transitions[2].next_state;
  CHECK(last(0) == doctest::Approx(0.2).epsilon(1e-12));  // cancelled move
  CHECK(last(1) == doctest::Approx(6.5).epsilon(1e-12));  // kept moving
  CHECK(last(2) == 5.0);
  CHECK(last(3) == 5.0);
  CHECK(last(4) == last(5));  // both drained three identical attempts
  CHECK(last(4) < 1e6);

  double reward_sum = 0.0;
  for (const auto& t : msg.transitions) reward_sum += t.reward;
  CHECK(msg.episode_reward == reward_sum);
}

TEST_CASE("training collects every worker episode and paces updates") {
  const ScenarioConfig cfg = tiny_scenario();
  TrainOptions opts;
  opts.workers = 2;
  opts.episodes_per_worker = 3;
  opts.updates_per_episode = 0;
  opts.seed = 5;
  opts.progress = false;

  const TrainResult result = run_training(cfg, opts);
  REQUIRE(result.episodes.size() == 6);
  CHECK(result.updates.empty());
  CHECK(result.transitions_stored == 30);  // six full 5-step episodes

  std::map<int, std::vector<int>> per_worker;
  for (const auto& r : result.episodes) {
    CHECK(r.steps == 5);
    per_worker[r.worker].push_back(r.episode);
  }
  REQUIRE(per_worker.size() == 2);
  for (const auto& [worker, eps] : per_worker) {
    CHECK((worker == 0 || worker == 1));
    CHECK(eps == std::vector<int>{0, 1, 2});  // uploads arrive in order
  }

  // smoothed column equals an independently computed trailing average
  double running = 0.0;
  for (std::size_t i = 0; i < result.episodes.size(); ++i) {
    running += result.episodes[i].reward;
    const double want = running / static_cast<double>(i + 1);
    CHECK(result.episodes[i].smoothed == doctest::Approx(want).epsilon(1e-12));
  }

  // each worker's noise variance decays once per environment step
  for (const auto& [worker, eps] : per_worker) {
    (void)eps;
    std::vector<double> vars;
    for (const auto& r : result.episodes)
      if (r.worker == worker) vars.push_back(r.noise_variance);
    double expect = 0.6;
    for (std::size_t e = 0; e < vars.size(); ++e) {
      for (int s = 0; s < 5; ++s) expect *= 0.9995;
      CHECK(vars[e] == expect);  // same arithmetic, same order: bitwise
    }
  }
}

TEST_CASE("update pacing waits for the replay buffer to fill") {
  const ScenarioConfig cfg = tiny_scenario();  // batch_size 16, 5-step episodes
  TrainOptions opts;
  opts.workers = 1;
  opts.episodes_per_worker = 8;
  opts.updates_per_episode = 2;
  opts.seed = 9;
  opts.progress = false;

  const TrainResult result = run_training(cfg, opts);
  // buffer sizes after each upload: 5,10,15,20,... => training starts at the
  // fourth episode, giving 5 paced episodes x 2 updates
  CHECK(result.updates.size() == 10);
  for (std::size_t i = 0; i < result.updates.size(); ++i) {
    CHECK(result.updates[i].update == static_cast<long>(i));
    CHECK(result.updates[i].critic_loss >= 0.0);
    CHECK(result.updates[i].actor_grad_norm >= 0.0);
  }
}

TEST_CASE("single-worker training is bitwise reproducible") {
  const ScenarioConfig cfg = tiny_scenario();
  TrainOptions opts;
  opts.workers = 1;
  opts.episodes_per_worker = 8;
  opts.updates_per_episode = 2;
  opts.seed = 31;
  opts.progress = false;

  const TrainResult a = run_training(cfg, opts);
  const TrainResult b = run_training(cfg, opts);

  REQUIRE(a.episodes.size() == b.episodes.size());
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    CHECK(a.episodes[i].reward == b.episodes[i].reward);
    CHECK(a.episodes[i].smoothed == b.episodes[i].smoothed);
    CHECK(a.episodes[i].steps == b.episodes[i].steps);
    CHECK(a.episodes[i].noise_variance == b.episodes[i].noise_variance);
  }
  REQUIRE(a.updates.size() == b.updates.size());
  for (std::size_t i = 0; i < a.updates.size(); ++i) {
    CHECK(a.updates[i].critic_loss == b.updates[i].critic_loss);
    CHECK(a.updates[i].actor_grad_norm == b.updates[i].actor_grad_norm);
  }
  CHECK(nets_equal(a.final_checkpoint.actor, b.final_checkpoint.actor));
  CHECK(nets_equal(a.final_checkpoint.critic, b.final_checkpoint.critic));
  CHECK(nets_equal(a.final_checkpoint.actor_target,
                   b.final_checkpoint.actor_target));
  CHECK(nets_equal(a.final_checkpoint.critic_target,
                   b.final_checkpoint.critic_target));
  CHECK(a.best_at == b.best_at);
  CHECK(nets_equal(a.best_checkpoint.actor, b.best_checkpoint.actor));

  // a different seed must actually change the run
  opts.seed = 32;
  const TrainResult c = run_training(cfg, opts);
  CHECK_FALSE(nets_equal(a.final_checkpoint.actor, c.final_checkpoint.actor));
}

TEST_CASE("training writes curves and checkpoints that read back exactly") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "uavnet_apc_test";
  fs::remove_all(dir);

  const ScenarioConfig cfg = tiny_scenario();
  TrainOptions opts;
  opts.workers = 1;
  opts.episodes_per_worker = 8;
  opts.updates_per_episode = 1;
  opts.seed = 77;
  opts.out_dir = dir.string();
  opts.progress = false;

  const TrainResult result = run_training(cfg, opts);
  CHECK(fs::exists(dir / "episodes.csv"));
  CHECK(fs::exists(dir / "updates.csv"));
  CHECK(fs::exists(dir / "best.ckpt"));
  CHECK(fs::exists(dir / "final.ckpt"));

  const Checkpoint final_ckpt = load_checkpoint((dir / "final.ckpt").string());
  CHECK(nets_equal(final_ckpt.actor, result.final_checkpoint.actor));
  CHECK(nets_equal(final_ckpt.critic, result.final_checkpoint.critic));
  const Checkpoint best_ckpt = load_checkpoint((dir / "best.ckpt").string());
  CHECK(nets_equal(best_ckpt.actor, result.best_checkpoint.actor));

  std::ifstream in(dir / "episodes.csv");
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "order,worker,episode,steps,reward,smoothed,sigma2");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // reward is the 5th field and must round-trip through the text exactly
    std::stringstream ss(line);
    std::string field;
    for (int f = 0; f < 5; ++f) REQUIRE(std::getline(ss, field, ','));
    CHECK(std::stod(field) == result.episodes[rows].reward);
    ++rows;
  }
  CHECK(rows == 8);
  fs::remove_all(dir);
}
