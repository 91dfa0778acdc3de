#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "uavnet/ddpg.hpp"
#include "uavnet/env.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

// One completed episode, uploaded whole by the worker that ran it.
struct WorkerMessage {
  int worker = 0;
  int episode = 0;  // per-worker index, 0-based
  std::vector<Transition> transitions;
  double episode_reward = 0.0;  // sum of step rewards
  double noise_variance = 0.0;  // worker's sigma^2 after this episode
  bool failed = false;          // worker aborted; no more messages from it
};

// Unbounded blocking queue. Serves as the host's inbox (many producers) and
// as each worker's private parameter-reply slot (single producer).
template <typename T>
class Channel {
 public:
  void send(T value) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      items_.push_back(std::move(value));
    }
    ready_.notify_one();
  }

  T receive() {
    std::unique_lock<std::mutex> lock(mutex_);
    ready_.wait(lock, [&] { return !items_.empty(); });
    T value = std::move(items_.front());
    items_.pop_front();
    return value;
  }

 private:
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> items_;
};

struct TrainOptions {
  int workers = 0;               // <= 0: take the scenario's value
  int episodes_per_worker = 0;   // <= 0: take the scenario's value
  int updates_per_episode = -1;  // < 0: take the scenario's value
  std::uint64_t seed = 1;
  std::string out_dir;  // when set: episodes.csv, updates.csv, *.ckpt
  bool progress = true;
};

struct EpisodeRecord {
  int order;    // global completion index, 0-based
  int worker;
  int episode;  // per-worker index
  int steps;
  double reward;
  double smoothed;  // trailing mean over the last 100 completed episodes
  double noise_variance;
};

struct UpdateRecord {
  long update;  // global index, 0-based
  double critic_loss;
  double actor_grad_norm;
  double noise_variance;  // sigma^2 of the most recently received episode
};

struct TrainResult {
  std::vector<EpisodeRecord> episodes;  // completion order
  std::vector<UpdateRecord> updates;
  std::size_t transitions_stored = 0;
  double best_smoothed = 0.0;
  int best_at = -1;  // completion index that set best_smoothed
  Checkpoint best_checkpoint;
  Checkpoint final_checkpoint;
};

// One worker: runs `episodes` episodes against its own environment copy,
// uploads each finished episode, and blocks for refreshed actor parameters
// (including an initial receive before the first episode).
void worker_loop(int id, Env env, int episodes, std::uint64_t noise_seed,
                 double noise_var0, double noise_decay,
                 Channel<WorkerMessage>& inbox, Channel<Policy>& replies);

// Host side: owns the agent and the replay buffer, launches the workers,
// stores uploads, replies with actor snapshots, and paces training at
// updates_per_episode optimizer iterations per received episode (skipped
// while the buffer holds fewer than batch_size transitions).
TrainResult run_training(const ScenarioConfig& scenario,
                         const TrainOptions& opts);

}  // namespace uavnet
