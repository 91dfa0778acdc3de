#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavnet/apc.hpp"
#include "uavnet/checkpoint.hpp"
#include "uavnet/eval.hpp"
#include "uavnet/radio.hpp"

namespace fs = std::filesystem;
using namespace uavnet;

namespace {

Policy load_policy(const std::string& path) {
  return policy_from(load_checkpoint(path));
}

void print_trace_summary(const char* label, const EpisodeTrace& trace,
                         int n_users) {
  int min_served = n_users, max_served = 0;
  double mean_served = 0.0;
  for (const auto& s : trace.steps) {
    min_served = std::min(min_served, s.served);
    max_served = std::max(max_served, s.served);
    mean_served += s.served;
  }
  if (!trace.steps.empty()) mean_served /= static_cast<double>(trace.steps.size());
  std::printf(
      "%s: %zu steps, total reward %.6f, served min/mean/max %d/%.2f/%d of %d\n",
      label, trace.steps.size(), trace.total_reward, min_served, mean_served,
      max_served, n_users);
}

int cmd_train(const std::string& scenario_path, int workers, int episodes,
              int updates, unsigned long long seed, const std::string& out) {
  const ScenarioConfig cfg = load_scenario_file(scenario_path);
  TrainOptions opts;
  opts.workers = workers;
  opts.episodes_per_worker = episodes;
  opts.updates_per_episode = updates;
  opts.seed = seed;
  opts.out_dir = out;
  const TrainResult result = run_training(cfg, opts);

  std::printf("episodes completed: %zu\n", result.episodes.size());
  std::printf("host updates: %zu\n", result.updates.size());
  std::printf("transitions stored: %zu\n", result.transitions_stored);
  if (result.best_at >= 0)
    std::printf("best smoothed reward %.6f at episode %d\n",
                result.best_smoothed, result.best_at + 1);
  else
    std::printf("smoothing window never filled; best.ckpt is the final nets\n");
  std::printf("wrote %s/{episodes.csv,updates.csv,best.ckpt,final.ckpt}\n",
              out.c_str());
  return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& scenario_path,
             const std::string& out, long long seed) {
  ScenarioConfig cfg = load_scenario_file(scenario_path);
  if (seed >= 0) {
    cfg.users.seed = static_cast<unsigned long long>(seed);
    cfg.validate();
  }
  const Policy policy = load_policy(ckpt_path);
  const EpisodeTrace trace = run_policy(policy, cfg);

  fs::create_directories(out);
  const std::string trace_path = (fs::path(out) / "trace.csv").string();
  write_trace_csv(trace, trace_path);
  print_trace_summary("rollout", trace, cfg.users.count);
  const int last_t = trace.steps.empty() ? 0 : trace.steps.back().t;
  std::printf("accumulated US score: %.6f over steps 1..%d\n",
              trace.accumulated_sc(1, last_t), last_t);
  std::printf("wrote %s\n", trace_path.c_str());
  return 0;
}

int cmd_compare(const std::string& psr_path, const std::string& pre_path,
                const std::string& post_path, const std::string& scenario_path,
                const std::string& out, int first, int last) {
  const ScenarioConfig cfg = load_scenario_file(scenario_path);
  const Policy psr = load_policy(psr_path);
  const Policy pre = load_policy(pre_path);
  const Policy post = load_policy(post_path);

  const EpisodeTrace proactive = run_policy(psr, cfg);
  const EpisodeTrace baseline = passive_baseline(cfg, pre, post);
  const GainReport report = transition_gain(proactive, baseline, first, last);

  std::printf("transition window: steps %d..%d\n", report.window_first,
              report.window_last);
  std::printf("accumulated US score (proactive): %.6f\n", report.proactive_sum);
  std::printf("accumulated US score (baseline):  %.6f\n", report.baseline_sum);
  std::printf("gain: %.4f%%\n", report.gain_percent);

  fs::create_directories(out);
  write_trace_csv(proactive, (fs::path(out) / "proactive_trace.csv").string());
  write_trace_csv(baseline, (fs::path(out) / "baseline_trace.csv").string());
  std::ofstream gain(fs::path(out) / "gain.csv");
  gain << "window_first,window_last,proactive_sc,baseline_sc,gain_percent\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n",
                report.window_first, report.window_last, report.proactive_sum,
                report.baseline_sum, report.gain_percent);
  gain << buf;
  std::printf(
      "wrote %s/{gain.csv,proactive_trace.csv,baseline_trace.csv}\n",
      out.c_str());
  return 0;
}

int cmd_oracle(const std::string& scenario_path, int uavs, double grid, int t,
               long long seed) {
  ScenarioConfig cfg = load_scenario_file(scenario_path);
  if (seed >= 0) {
    cfg.users.seed = static_cast<unsigned long long>(seed);
    cfg.validate();
  }
  const UserSet users = snapshot_at(cfg.users, cfg.area, t, cfg.users.seed,
                                    cfg.horizon.steps, cfg.horizon.segments);
  const PlacementResult result =
      brute_force_placement(users, cfg, uavs, grid);

  std::printf("placement search: %s, %lld association evaluations\n",
              result.exhaustive ? "exhaustive grid combinations"
                                : "greedy seed + coordinate descent",
              result.evaluations);
  for (std::size_t i = 0; i < result.positions.size(); ++i)
    std::printf("uav %zu: (%.4f, %.4f)\n", i, result.positions[i].x,
                result.positions[i].y);
  std::printf("served: %d of %zu users (snapshot at step %d)\n", result.served,
              users.positions.size(), t);
  std::printf("US score: %.6f\n", result.score);
  return 0;
}

int cmd_curves(const std::string& log_dir, int window) {
  const fs::path in_path = fs::path(log_dir) / "episodes.csv";
  std::ifstream in(in_path);
  if (!in)
    throw std::runtime_error("cannot open " + in_path.string() +
                             " (run `train` first)");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(in_path.string() + " is empty");
  // header: order,worker,episode,steps,reward,smoothed,sigma2
  std::vector<double> rewards;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (int c = 0; c < 5 && std::getline(row, cell, ','); ++c) {
    }
    rewards.push_back(std::stod(cell));
  }
  const std::vector<double> smoothed = smooth_curve(rewards, window);

  const fs::path out_path = fs::path(log_dir) / "smoothed.csv";
  std::ofstream out(out_path);
  out << "order,reward,smoothed\n";
  char buf[128];
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1, rewards[i],
                  smoothed[i]);
    out << buf;
  }
  std::printf("smoothed %zu episode rewards (window %d)\nwrote %s\n",
              rewards.size(), window, out_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "UAV network laboratory: parallel DDPG training, rollout evaluation, "
      "passive-baseline comparison, and a placement oracle"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, ckpt_path, psr_path, pre_path, post_path,
      log_dir;
  int workers = 0, episodes = 0, updates = -1, uavs = 1, window = 100, t = 1;
  int win_first = -1, win_last = -1;
  unsigned long long seed = 1;
  long long seed_override = -1;
  double grid = 0.5;

  auto* train = app.add_subcommand("train", "train agents on a scenario");
  train->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--workers", workers,
                    "worker count (0: scenario default)");
  train->add_option("--episodes", episodes,
                    "episodes per worker (0: scenario default)");
  train->add_option("--updates", updates,
                    "host updates per received episode (-1: scenario default)");
  train->add_option("--seed", seed, "master seed");
  train->add_option("--out", out_dir, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "greedy rollout of a checkpoint");
  eval->add_option("--checkpoint", ckpt_path, "agent checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", out_dir, "output directory")->required();
  eval->add_option("--seed", seed_override,
                   "override the scenario's user snapshot seed");

  auto* compare = app.add_subcommand(
      "compare", "proactive rollout vs the passive-reaction baseline");
  compare->add_option("--psr", psr_path, "proactive agent checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--pre", pre_path, "pre-change agent checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--post", post_path, "post-change agent checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--out", out_dir, "output directory");
  compare->add_option("--first", win_first,
                      "explicit transition window start (1-based step)");
  compare->add_option("--last", win_last,
                      "explicit transition window end (inclusive)");

  auto* oracle = app.add_subcommand(
      "oracle", "best static placement for a user snapshot");
  oracle->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  oracle->add_option("--uavs", uavs, "number of UAVs to place")->required();
  oracle->add_option("--grid", grid, "grid step in units");
  oracle->add_option("--t", t, "snapshot step (1-based)");
  oracle->add_option("--seed", seed_override,
                     "override the scenario's user snapshot seed");

  auto* curves =
      app.add_subcommand("curves", "smooth a training run's reward curve");
  curves->add_option("--log", log_dir, "training output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  curves->add_option("--window", window, "trailing average window");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed())
      return cmd_train(scenario_path, workers, episodes, updates, seed,
                       out_dir);
    if (eval->parsed())
      return cmd_eval(ckpt_path, scenario_path, out_dir, seed_override);
    if (compare->parsed())
      return cmd_compare(psr_path, pre_path, post_path, scenario_path,
                         out_dir.empty() ? "." : out_dir, win_first, win_last);
    if (oracle->parsed())
      return cmd_oracle(scenario_path, uavs, grid, t, seed_override);
    if (curves->parsed()) return cmd_curves(log_dir, window);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
