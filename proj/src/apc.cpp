#include "uavnet/apc.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>
#include <utility>

namespace uavnet {

namespace {

void append_csv_value(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

void write_episodes_csv(const std::string& path,
                        const std::vector<EpisodeRecord>& rows) {
  std::ofstream out(path);
  out << "order,worker,episode,steps,reward,smoothed,sigma2\n";
  for (const auto& r : rows) {
    std::string line = std::to_string(r.order) + ',' +
                       std::to_string(r.worker) + ',' +
                       std::to_string(r.episode) + ',' +
                       std::to_string(r.steps) + ',';
    append_csv_value(line, r.reward);
    line += ',';
    append_csv_value(line, r.smoothed);
    line += ',';
    append_csv_value(line, r.noise_variance);
    out << line << '\n';
  }
}

void write_updates_csv(const std::string& path,
                       const std::vector<UpdateRecord>& rows) {
  std::ofstream out(path);
  out << "update,critic_loss,actor_grad_norm,sigma2\n";
  for (const auto& r : rows) {
    std::string line = std::to_string(r.update) + ',';
    append_csv_value(line, r.critic_loss);
    line += ',';
    append_csv_value(line, r.actor_grad_norm);
    line += ',';
    append_csv_value(line, r.noise_variance);
    out << line << '\n';
  }
}

}  // namespace

void worker_loop(int id, Env env, int episodes, std::uint64_t noise_seed,
                 double noise_var0, double noise_decay,
                 Channel<WorkerMessage>& inbox, Channel<Policy>& replies) {
  Rng rng(noise_seed);
  NoiseState noise{noise_var0, noise_decay};
  try {
    Policy policy = replies.receive();
    for (int e = 0; e < episodes; ++e) {
      Vector state = env.reset();
      WorkerMessage msg;
      msg.worker = id;
      msg.episode = e;
      bool terminal = false;
      while (!terminal) {
        const Vector action = policy.explore(state, noise, rng);
        StepResult result = env.step(action);
        msg.transitions.push_back(
            {state, action, result.reward, result.state, result.terminal});
        msg.episode_reward += result.reward;
        state = std::move(result.state);
        terminal = result.terminal;
      }
      msg.noise_variance = noise.variance;
      inbox.send(std::move(msg));
      policy = replies.receive();
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "worker %d aborted: %s\n", id, ex.what());
    WorkerMessage obituary;
    obituary.worker = id;
    obituary.failed = true;
    inbox.send(std::move(obituary));
  }
}

TrainResult run_training(const ScenarioConfig& scenario,
                         const TrainOptions& opts) {
  const ScenarioConfig& cfg = scenario;
  cfg.validate();
  const int n_workers = opts.workers > 0 ? opts.workers : cfg.rl.workers;
  const int per_worker = opts.episodes_per_worker > 0
                             ? opts.episodes_per_worker
                             : cfg.rl.episodes_per_worker;
  const int updates_per_episode = opts.updates_per_episode >= 0
                                      ? opts.updates_per_episode
                                      : cfg.rl.updates_per_episode;
  if (n_workers <= 0 || per_worker <= 0)
    throw ConfigError("training needs at least one worker and one episode");

  Env proto(cfg);
  AgentConfig acfg;
  acfg.state_dim = proto.state_dim();
  acfg.hidden = cfg.rl.hidden;
  acfg.gamma = cfg.rl.gamma;
  acfg.tau = cfg.rl.tau;
  acfg.learning_rate = cfg.rl.learning_rate;
  acfg.l2 = cfg.rl.l2;
  acfg.batch_size = cfg.rl.batch_size;

  // fixed derivation order keeps every stream reproducible from one seed
  Rng master(opts.seed);
  Rng init_rng(master.next_u64());
  Rng sample_rng(master.next_u64());
  std::vector<std::uint64_t> worker_seeds;
  for (int k = 0; k < n_workers; ++k) worker_seeds.push_back(master.next_u64());

  Agent agent(acfg, proto.state_normalizer(), proto.action_space(), init_rng);
  ReplayBuffer buffer;

  const int ckpt_mode = proto.mode() == StateMode::Join ? 1 : 0;
  const auto snapshot = [&] {
    return agent.to_checkpoint(ckpt_mode, proto.dynamic_users(),
                               proto.n_uav());
  };

  if (!opts.out_dir.empty())
    std::filesystem::create_directories(opts.out_dir);
  const auto out_path = [&](const char* name) {
    return (std::filesystem::path(opts.out_dir) / name).string();
  };

  Channel<WorkerMessage> inbox;
  std::vector<std::unique_ptr<Channel<Policy>>> replies;
  for (int k = 0; k < n_workers; ++k)
    replies.push_back(std::make_unique<Channel<Policy>>());
  for (int k = 0; k < n_workers; ++k) replies[k]->send(agent.policy());

  std::vector<std::thread> threads;
  for (int k = 0; k < n_workers; ++k)
    threads.emplace_back(worker_loop, k, Env(cfg), per_worker, worker_seeds[k],
                         cfg.rl.noise_var0, cfg.rl.noise_decay,
                         std::ref(inbox), std::ref(*replies[k]));

  TrainResult result;
  const int total = n_workers * per_worker;
  int expected = total;
  // a best checkpoint is meaningful only once the smoothing window is full
  const int window_cap = 100;
  const int min_window = std::min(window_cap, total);
  std::deque<double> window;
  double window_sum = 0.0;
  long update_index = 0;

  for (int done = 0; done < expected;) {
    WorkerMessage msg = inbox.receive();
    if (msg.failed) {
      // drop the dead worker's outstanding episodes and keep going
      expected -= per_worker;
      for (const auto& r : result.episodes)
        if (r.worker == msg.worker) ++expected;
      continue;
    }
    const int steps = static_cast<int>(msg.transitions.size());
    for (auto& t : msg.transitions) buffer.push(std::move(t));
    // reply before training so the worker rolls out while the host learns
    replies[msg.worker]->send(agent.policy());

    window.push_back(msg.episode_reward);
    window_sum += msg.episode_reward;
    if (static_cast<int>(window.size()) > window_cap) {
      window_sum -= window.front();
      window.pop_front();
    }
    const double smoothed = window_sum / static_cast<double>(window.size());
    result.episodes.push_back({done, msg.worker, msg.episode, steps,
                               msg.episode_reward, smoothed,
                               msg.noise_variance});
    if (opts.progress)
      std::printf(
          "episode %d/%d  worker %d (#%d)  steps %d  reward %.6f  "
          "smoothed %.6f\n",
          done + 1, expected, msg.worker, msg.episode, steps,
          msg.episode_reward, smoothed);

    if (static_cast<int>(window.size()) >= min_window &&
        (result.best_at < 0 || smoothed > result.best_smoothed)) {
      result.best_smoothed = smoothed;
      result.best_at = done;
      result.best_checkpoint = snapshot();
      if (!opts.out_dir.empty())
        save_checkpoint(result.best_checkpoint, out_path("best.ckpt"));
    }

    if (buffer.size() >= static_cast<std::size_t>(acfg.batch_size)) {
      for (int u = 0; u < updates_per_episode; ++u) {
        const auto indices = buffer.sample_indices(
            static_cast<std::size_t>(acfg.batch_size), sample_rng);
        std::vector<const Transition*> batch;
        batch.reserve(indices.size());
        for (std::size_t i : indices) batch.push_back(&buffer[i]);
        const double loss = agent.critic_update(batch);
        const double grad_norm = agent.actor_update(batch);
        agent.soft_update_targets();
        result.updates.push_back(
            {update_index++, loss, grad_norm, msg.noise_variance});
      }
    }
    ++done;
  }

  for (auto& t : threads) t.join();
  result.transitions_stored = buffer.size();
  result.final_checkpoint = snapshot();
  if (!opts.out_dir.empty()) {
    save_checkpoint(result.final_checkpoint, out_path("final.ckpt"));
    if (result.best_at < 0)  // nothing qualified (e.g. all workers failed)
      save_checkpoint(result.final_checkpoint, out_path("best.ckpt"));
    write_episodes_csv(out_path("episodes.csv"), result.episodes);
    write_updates_csv(out_path("updates.csv"), result.updates);
  }
  return result;
}

}  // namespace uavnet
