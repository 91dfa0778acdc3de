#include "uavnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "uavnet/radio.hpp"

namespace uavnet {

namespace {

void check_dimensions(const Policy& policy, const Env& env, const char* which) {
  if (policy.actor.input_dim() != env.state_dim() ||
      policy.actor.output_dim() != env.action_dim())
    throw std::invalid_argument(std::string(which) +
                                " policy does not fit this scenario's state "
                                "and action dimensions");
}

StepRecord record_step(const Env& env, int t, const StepResult& result) {
  StepRecord rec;
  rec.t = t;
  rec.fleet = env.fleet();
  rec.served = result.served;
  rec.sc = us_score(result.served, env.config().consts.score_exponent);
  rec.reward = result.reward;
  return rec;
}

bool fleets_differ(const std::vector<UavState>& a,
                   const std::vector<UavState>& b) {
  if (a.size() != b.size()) return true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].pos.x != b[i].pos.x || a[i].pos.y != b[i].pos.y) return true;
  return false;
}

// The served count the trace settles at: the value of the last run of at
// least three consecutive equal counts (the final count when none exists).
int settled_served(const EpisodeTrace& trace) {
  int value = trace.steps.empty() ? 0 : trace.steps.back().served;
  int run = 0, prev = std::numeric_limits<int>::min();
  for (const auto& s : trace.steps) {
    run = (s.served == prev) ? run + 1 : 1;
    prev = s.served;
    if (run >= 3) value = s.served;
  }
  return value;
}

const char* status_name(UavStatus s) {
  switch (s) {
    case UavStatus::Active: return "active";
    case UavStatus::Quit: return "quit";
    case UavStatus::PreTakeoff: return "pre_takeoff";
    case UavStatus::Elevating: return "elevating";
  }
  return "?";
}

}  // namespace

double EpisodeTrace::accumulated_sc(int first, int last) const {
  double sum = 0.0;
  for (const auto& s : steps)
    if (s.t >= first && s.t <= last) sum += s.sc;
  return sum;
}

EpisodeTrace run_policy(const Policy& policy, const ScenarioConfig& scenario) {
  Env env(scenario);
  check_dimensions(policy, env, "the");
  Vector state = env.reset();
  EpisodeTrace trace;
  for (int t = 1;; ++t) {
    const StepResult result = env.step(policy.act(state));
    trace.steps.push_back(record_step(env, t, result));
    trace.total_reward += result.reward;
    if (result.terminal) break;
    state = result.state;
  }
  return trace;
}

EpisodeTrace passive_baseline(const ScenarioConfig& scenario,
                              const Policy& pre_agent,
                              const Policy& post_agent) {
  Env env(scenario);
  check_dimensions(pre_agent, env, "the pre-change");
  check_dimensions(post_agent, env, "the post-change");
  const auto join = scenario.join_event();
  const Vector hold = Vector::Zero(env.action_dim());
  const double threshold = scenario.consts.quit_threshold_units;

  Vector state = env.reset();
  EpisodeTrace trace;
  bool post_mode = false;
  int freeze_steps = 0;
  for (int t = 1;; ++t) {
    Vector action;
    if (post_mode) {
      action = post_agent.act(state);
    } else if (join) {
      action = hold;  // wait out the climb
    } else if (freeze_steps > 0) {
      action = hold;
      if (--freeze_steps == 0) post_mode = true;
    } else {
      action = pre_agent.act(state);
    }

    const StepResult result = env.step(action);
    trace.steps.push_back(record_step(env, t, result));
    trace.total_reward += result.reward;

    if (!post_mode) {
      if (join) {
        // the reaction starts once the joining UAV actually serves
        const auto fleet = env.fleet();
        if (fleet[static_cast<std::size_t>(join->uav_index)].status ==
            UavStatus::Active)
          post_mode = true;
      } else if (freeze_steps == 0) {
        // a quit is observed the moment some battery reaches the threshold
        for (const auto& uav : env.fleet())
          if (uav.status == UavStatus::Active && uav.energy <= threshold) {
            freeze_steps = 1;
            break;
          }
      }
    }

    if (result.terminal) break;
    state = result.state;
  }
  return trace;
}

GainReport transition_gain(const EpisodeTrace& proactive,
                           const EpisodeTrace& baseline, int window_first,
                           int window_last) {
  const int length = static_cast<int>(
      std::min(proactive.steps.size(), baseline.steps.size()));
  GainReport report;
  if (window_first < 0 || window_last < 0) {
    int diverged = -1;
    for (int i = 0; i < length; ++i)
      if (fleets_differ(proactive.steps[static_cast<std::size_t>(i)].fleet,
                        baseline.steps[static_cast<std::size_t>(i)].fleet)) {
        diverged = i;
        break;
      }
    if (diverged < 0) {
      // identical fleets throughout: compare the whole overlap
      report.window_first = length > 0 ? 1 : 0;
      report.window_last = length;
    } else {
      const int steady_p = settled_served(proactive);
      const int steady_b = settled_served(baseline);
      int end = length - 1;
      for (int i = diverged; i < length; ++i) {
        const auto& p = proactive.steps[static_cast<std::size_t>(i)];
        const auto& b = baseline.steps[static_cast<std::size_t>(i)];
        if (std::abs(p.served - steady_p) <= 1 &&
            std::abs(b.served - steady_b) <= 1) {
          end = i;
          break;
        }
      }
      report.window_first = proactive.steps[static_cast<std::size_t>(diverged)].t;
      report.window_last = proactive.steps[static_cast<std::size_t>(end)].t;
    }
  } else {
    if (length == 0 || window_first < 1 ||
        window_last > static_cast<int>(
                          std::min(proactive.steps.back().t,
                                   baseline.steps.back().t)) ||
        window_first > window_last)
      throw std::out_of_range("transition window outside the traces");
    report.window_first = window_first;
    report.window_last = window_last;
  }

  report.proactive_sum =
      proactive.accumulated_sc(report.window_first, report.window_last);
  report.baseline_sum =
      baseline.accumulated_sc(report.window_first, report.window_last);
  if (report.baseline_sum > 0.0) {
    report.gain_percent = (report.proactive_sum - report.baseline_sum) /
                          report.baseline_sum * 100.0;
  } else {
    report.gain_percent = report.proactive_sum > 0.0
                              ? std::numeric_limits<double>::infinity()
                              : 0.0;
  }
  return report;
}

namespace {

struct GridSearch {
  std::vector<Vec2> points;
  const UserSet* users;
  const PhysicalConstants* consts;
  double unit_m;
  long long evaluations = 0;

  int served_at(const std::vector<Vec2>& uavs) {
    ++evaluations;
    return associate_and_allocate(users->positions, uavs, *consts, unit_m)
        .served_count();
  }
};

}  // namespace

PlacementResult brute_force_placement(const UserSet& snapshot,
                                      const ScenarioConfig& scenario,
                                      int n_uavs, double grid_step) {
  if (n_uavs <= 0) throw std::invalid_argument("need at least one UAV");
  if (grid_step <= 0.0) throw std::invalid_argument("grid step must be positive");
  const double side = scenario.area.side_units();
  const int per_axis =
      static_cast<int>(std::floor(side / grid_step + 1e-9)) + 1;

  GridSearch search;
  search.users = &snapshot;
  search.consts = &scenario.consts;
  search.unit_m = scenario.area.unit_m;
  for (int ix = 0; ix < per_axis; ++ix)
    for (int iy = 0; iy < per_axis; ++iy)
      search.points.push_back(
          {std::min(ix * grid_step, side), std::min(iy * grid_step, side)});
  const auto n_points = static_cast<long long>(search.points.size());

  PlacementResult best;
  best.served = -1;

  if (n_uavs <= 3) {
    // unordered combinations with repetition: C(P + N - 1, N)
    double combos = 1.0;
    for (int k = 0; k < n_uavs; ++k)
      combos *= static_cast<double>(n_points + k) / (k + 1);
    if (combos > 5e8)
      throw IntractableError(
          "placement search needs about " + std::to_string(combos) +
          " association evaluations (limit 5e8); coarsen the grid");

    std::vector<Vec2> uavs(static_cast<std::size_t>(n_uavs));
    std::vector<long long> idx(static_cast<std::size_t>(n_uavs), 0);
    while (true) {
      for (int k = 0; k < n_uavs; ++k)
        uavs[static_cast<std::size_t>(k)] =
            search.points[static_cast<std::size_t>(
                idx[static_cast<std::size_t>(k)])];
      const int served = search.served_at(uavs);
      if (served > best.served) {
        best.served = served;
        best.positions = uavs;
      }
      // advance the nondecreasing index tuple
      int k = n_uavs - 1;
      while (k >= 0 && idx[static_cast<std::size_t>(k)] == n_points - 1) --k;
      if (k < 0) break;
      const long long next = idx[static_cast<std::size_t>(k)] + 1;
      for (int j = k; j < n_uavs; ++j) idx[static_cast<std::size_t>(j)] = next;
    }
    best.exhaustive = true;
  } else {
    const double bound =
        static_cast<double>(n_points) * n_uavs * 51.0;  // seed + 50 sweeps
    if (bound > 5e8)
      throw IntractableError(
          "placement refinement needs up to " + std::to_string(bound) +
          " association evaluations (limit 5e8); coarsen the grid");

    // greedy seeding: add UAVs one at a time at their best grid point
    std::vector<Vec2> uavs;
    for (int k = 0; k < n_uavs; ++k) {
      uavs.push_back(search.points.front());
      int local_best = -1;
      Vec2 pick = search.points.front();
      for (const Vec2& p : search.points) {
        uavs.back() = p;
        const int served = search.served_at(uavs);
        if (served > local_best) {
          local_best = served;
          pick = p;
        }
      }
      uavs.back() = pick;
      best.served = local_best;
    }
    // coordinate descent until a full sweep finds no strict improvement
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool improved = false;
      for (int k = 0; k < n_uavs; ++k) {
        const Vec2 original = uavs[static_cast<std::size_t>(k)];
        Vec2 pick = original;
        for (const Vec2& p : search.points) {
          uavs[static_cast<std::size_t>(k)] = p;
          const int served = search.served_at(uavs);
          if (served > best.served) {
            best.served = served;
            pick = p;
            improved = true;
          }
        }
        uavs[static_cast<std::size_t>(k)] = pick;
      }
      if (!improved) break;
    }
    best.positions = uavs;
    best.exhaustive = false;
  }

  best.score = us_score(best.served, scenario.consts.score_exponent);
  best.evaluations = search.evaluations;
  return best;
}

std::vector<double> smooth_curve(const std::vector<double>& series,
                                 int window) {
  if (window <= 0) throw std::invalid_argument("window must be positive");
  std::vector<double> out(series.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    sum += series[i];
    if (i >= static_cast<std::size_t>(window))
      sum -= series[i - static_cast<std::size_t>(window)];
    const auto covered = std::min<std::size_t>(i + 1,
                                               static_cast<std::size_t>(window));
    out[i] = sum / static_cast<double>(covered);
  }
  return out;
}

void write_trace_csv(const EpisodeTrace& trace, const std::string& path) {
  std::ofstream out(path);
  out << "step,uav,x,y,energy,altitude,status,served,sc,reward\n";
  char buf[256];
  for (const auto& s : trace.steps) {
    for (std::size_t i = 0; i < s.fleet.size(); ++i) {
      const auto& u = s.fleet[i];
      std::snprintf(buf, sizeof buf,
                    "%d,%zu,%.17g,%.17g,%.17g,%.17g,%s,%d,%.17g,%.17g\n", s.t,
                    i, u.pos.x, u.pos.y, u.energy, u.altitude,
                    status_name(u.status), s.served, s.sc, s.reward);
      out << buf;
    }
  }
}

}  // namespace uavnet
