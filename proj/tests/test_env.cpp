#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "uavnet/env.hpp"

using namespace uavnet;

namespace {

ScenarioConfig toy_config(int n_uav, int users) {
  ScenarioConfig cfg;
  cfg.users.count = users;
  cfg.users.hotspot_fraction = 0.0;
  cfg.users.hotspots.clear();
  cfg.fleet.count = n_uav;
  cfg.horizon.steps = 20;
  cfg.horizon.segments = 10;
  return cfg;
}

Vector hold_action(const Env& env) {
  return Vector::Zero(env.action_dim());
}

Vector move_action(const Env& env, int uav, double angle, double dist) {
  Vector a = Vector::Zero(env.action_dim());
  a(uav) = angle;
  a(env.n_uav() + uav) = dist;
  return a;
}

}  // namespace

TEST_CASE("circle placement spreads the fleet evenly") {
  auto cfg = toy_config(5, 10);
  Env env(cfg);
  env.reset();
  const auto fleet = env.fleet();
  REQUIRE(fleet.size() == 5);
  for (const auto& u : fleet) {
    CHECK(distance(u.pos, cfg.fleet.circle_center) == doctest::Approx(2.0));
    CHECK(u.status == UavStatus::Active);
    CHECK(u.altitude == doctest::Approx(300.0));
  }
  // pairwise distinct
  for (std::size_t i = 0; i < fleet.size(); ++i)
    for (std::size_t j = i + 1; j < fleet.size(); ++j)
      CHECK(distance(fleet[i].pos, fleet[j].pos) > 0.1);
}

TEST_CASE("state layout per mode") {
  auto cfg = toy_config(3, 10);
  Env quit_env(cfg);
  CHECK(quit_env.mode() == StateMode::Quit);
  CHECK(quit_env.state_dim() == 9);
  CHECK(quit_env.action_dim() == 6);
  const Vector s = quit_env.reset();
  const auto fleet = quit_env.fleet();
  for (int i = 0; i < 3; ++i) {
    CHECK(s(i) == fleet[static_cast<std::size_t>(i)].pos.x);
    CHECK(s(3 + i) == fleet[static_cast<std::size_t>(i)].pos.y);
    CHECK(s(6 + i) == fleet[static_cast<std::size_t>(i)].energy);
  }

  auto jcfg = toy_config(3, 10);
  LineupEvent ev;
  ev.kind = LineupEvent::Kind::Join;
  ev.uav_index = 2;
  ev.takeoff_step = 2;
  ev.takeoff_point = {5.0, 5.0};
  jcfg.lineup_events.push_back(ev);
  Env join_env(jcfg);
  CHECK(join_env.mode() == StateMode::Join);
  CHECK(join_env.state_dim() == 9);
  const Vector js = join_env.reset();
  CHECK(js(8) == doctest::Approx(0.0));  // joining UAV on the ground

  auto dcfg = toy_config(3, 10);
  dcfg.users.dynamic = true;
  dcfg.users.hotspot_fraction = 1.0;
  dcfg.users.hotspots.push_back({{2.0, 2.0}, {}, 0.5});
  Env dyn_env(dcfg);
  CHECK(dyn_env.state_dim() == 10);
  const Vector ds = dyn_env.reset();
  CHECK(ds(9) == doctest::Approx(1.0));  // time component
}

TEST_CASE("decode_action splits and clips") {
  const auto space = ActionSpace::uav_actions(2, 1.0);
  Vector a(4);
  a << 1.0, 9.0, 0.5, -0.25;  // 9 rad and -0.25 units are out of bounds
  const auto moves = decode_action(a, space);
  REQUIRE(moves.size() == 2);
  CHECK(moves[0].angle == doctest::Approx(1.0));
  CHECK(moves[1].angle < 2.0 * 3.14159265358979323846);
  CHECK(moves[0].dist == doctest::Approx(0.5));
  CHECK(moves[1].dist == 0.0);
  CHECK_THROWS_AS(decode_action(Vector::Zero(3), space),
                  std::invalid_argument);
}

TEST_CASE("hovering changes only battery and time components") {
  auto cfg = toy_config(2, 10);
  cfg.users.dynamic = true;
  cfg.users.hotspot_fraction = 1.0;
  cfg.users.hotspots.push_back({{5.0, 5.0}, {}, 0.5});
  Env env(cfg);
  const Vector s0 = env.reset();
  const auto r = env.step(hold_action(env));
  const int n = 2;
  for (int i = 0; i < 2 * n; ++i) CHECK(r.state(i) == s0(i));  // positions
  for (int i = 0; i < n; ++i) {
    CHECK(r.state(2 * n + i) == doctest::Approx(s0(2 * n + i) - 10.0));
  }
  CHECK(r.state(3 * n) == doctest::Approx(2.0));
}

TEST_CASE("movement follows the decoded heading") {
  auto cfg = toy_config(1, 5);
  cfg.fleet.placement = "explicit";
  cfg.fleet.positions = {{5.0, 5.0}};
  Env env(cfg);
  env.reset();
  const double pi = 3.14159265358979323846;
  auto r = env.step(move_action(env, 0, pi / 2.0, 0.75));
  auto fleet = env.fleet();
  CHECK(fleet[0].pos.x == doctest::Approx(5.0));
  CHECK(fleet[0].pos.y == doctest::Approx(5.75));
  CHECK_FALSE(r.terminal);
}

TEST_CASE("boundary crossing cancels the move and ends the episode") {
  auto cfg = toy_config(2, 10);
  cfg.fleet.placement = "explicit";
  cfg.fleet.positions = {{9.8, 5.0}, {3.0, 3.0}};
  cfg.fleet.initial_energy = {500.0, 500.0};
  Env env(cfg);
  env.reset();

  Vector a = Vector::Zero(env.action_dim());
  a(0) = 0.0;  // due east, straight across the fence
  a(2) = 0.5;
  a(1) = 3.14159265358979323846 / 2.0;  // the other UAV moves legally
  a(3) = 0.25;
  const auto r = env.step(a);

  CHECK(r.terminal);
  const auto fleet = env.fleet();
  CHECK(fleet[0].pos.x == doctest::Approx(9.8));  // cancelled
  CHECK(fleet[0].pos.y == doctest::Approx(5.0));
  CHECK(fleet[1].pos.y == doctest::Approx(3.25));  // executed
  // the aborted flight still burned its slot energy
  PhysicalConstants consts;
  CHECK(fleet[0].energy ==
        doctest::Approx(500.0 - slot_energy(50.0, consts)).epsilon(1e-12));
  CHECK_THROWS_AS(env.step(hold_action(env)), std::logic_error);
}

TEST_CASE("horizon end is terminal") {
  auto cfg = toy_config(1, 5);
  Env env(cfg);
  env.reset();
  for (int t = 1; t < 20; ++t) {
    const auto r = env.step(hold_action(env));
    CHECK_FALSE(r.terminal);
  }
  const auto last = env.step(hold_action(env));
  CHECK(last.terminal);
}

TEST_CASE("battery quit freezes the UAV bitwise") {
  auto cfg = toy_config(2, 12);
  cfg.users.hotspot_fraction = 1.0;
  cfg.users.hotspots.push_back({{2.0, 2.0}, {}, 0.3});
  cfg.fleet.placement = "explicit";
  cfg.fleet.positions = {{2.0, 2.0}, {8.0, 8.0}};
  cfg.fleet.initial_energy = {165.0, 5000.0};
  cfg.horizon.steps = 20;
  Env env(cfg);
  env.reset();

  // hover: 10 unit-seconds per slot; 165 -> 155 -> 145 (quit flag), frozen
  // from the following step onward
  auto r1 = env.step(hold_action(env));
  const int served_before = r1.served;
  CHECK(served_before > 0);  // the doomed UAV sits on the cluster
  env.step(hold_action(env));
  auto fleet = env.fleet();
  CHECK(fleet[0].energy == doctest::Approx(145.0));
  CHECK(fleet[0].status == UavStatus::Active);  // quit observed next step

  Rng rng(5);
  Vector frozen_state = env.state();
  for (int k = 0; k < 6; ++k) {
    Vector a(env.action_dim());
    // southwest-ish headings keep the surviving UAV inside the area
    for (int i = 0; i < env.n_uav(); ++i) {
      a(i) = rng.uniform(3.2, 4.0);
      a(env.n_uav() + i) = rng.uniform(0.0, 0.8);
    }
    const auto r = env.step(a);
    fleet = env.fleet();
    CHECK(fleet[0].status == UavStatus::Quit);
    // bitwise identical state components for the quit UAV
    CHECK(r.state(0) == frozen_state(0));
    CHECK(r.state(2) == frozen_state(2));
    CHECK(r.state(4) == frozen_state(4));
    // and it no longer serves its cluster
    CHECK(r.served == 0);
  }
}

TEST_CASE("joining UAV climbs eight slots and then serves") {
  auto cfg = toy_config(2, 20);
  cfg.users.hotspot_fraction = 1.0;
  cfg.users.hotspots.push_back({{5.0, 5.0}, {}, 0.3});
  cfg.fleet.placement = "explicit";
  cfg.fleet.positions = {{0.5, 0.5}, {5.0, 5.0}};  // UAV 0 parked far away
  LineupEvent ev;
  ev.kind = LineupEvent::Kind::Join;
  ev.uav_index = 1;
  ev.takeoff_step = 3;
  ev.takeoff_point = {5.0, 5.0};
  cfg.lineup_events.push_back(ev);
  Env env(cfg);
  env.reset();

  CHECK(env.fleet()[1].status == UavStatus::PreTakeoff);

  int first_serving_step = 0;
  for (int t = 1; t <= 12; ++t) {
    const auto r = env.step(hold_action(env));
    const auto fleet = env.fleet();
    if (t < 3) {
      CHECK(fleet[1].status == UavStatus::PreTakeoff);
      CHECK(fleet[1].altitude == doctest::Approx(0.0));
    } else if (t <= 10) {
      // climbing 40 m per slot from step 3 on; reward still excludes it
      CHECK(fleet[1].status == UavStatus::Elevating);
      CHECK(fleet[1].altitude ==
            doctest::Approx(std::min(40.0 * (t - 2), 300.0)));
      CHECK(r.served == 0);
    }
    if (r.served > 0 && first_serving_step == 0) first_serving_step = t;
  }
  // eighth climbing slot (step 10) tops out at 300 m; serving starts at 11
  CHECK(env.fleet()[1].altitude == doctest::Approx(300.0));
  CHECK(env.fleet()[1].status == UavStatus::Active);
  CHECK(first_serving_step == 11);
}

TEST_CASE("reward equals the normalized US score on random rollouts") {
  auto cfg = toy_config(2, 15);
  cfg.users.hotspot_fraction = 0.8;
  cfg.users.hotspots.push_back({{3.0, 3.0}, {}, 0.8});
  cfg.users.hotspots.push_back({{7.0, 7.0}, {}, 0.8});
  Env env(cfg);
  Rng rng(31);
  for (int ep = 0; ep < 10; ++ep) {
    env.reset();
    while (true) {
      Vector a(env.action_dim());
      for (int i = 0; i < env.n_uav(); ++i) {
        a(i) = rng.uniform(0.0, 2.0 * 3.141592653589793);
        a(env.n_uav() + i) = rng.uniform(0.0, 1.0);
      }
      const auto r = env.step(a);
      const double sc = us_score(r.served, cfg.consts.score_exponent);
      const double nb = std::pow(static_cast<double>(cfg.users.count),
                                 cfg.consts.score_exponent);
      CHECK(r.reward * nb == doctest::Approx(sc).epsilon(1e-12));
      CHECK(r.reward >= 0.0);
      CHECK(r.reward <= 1.0);
      if (r.terminal) break;
    }
  }
}

TEST_CASE("state normalizer bounds follow the scenario") {
  auto cfg = toy_config(2, 10);
  cfg.fleet.initial_energy = {400.0, 900.0};
  Env env(cfg);
  const auto norm = env.state_normalizer();
  CHECK(norm.lo(0) == 0.0);
  CHECK(norm.hi(0) == doctest::Approx(10.0));
  CHECK(norm.lo(4) == doctest::Approx(150.0));
  CHECK(norm.hi(4) == doctest::Approx(400.0));
  CHECK(norm.hi(5) == doctest::Approx(900.0));

  env.reset();
  const Vector y = norm.normalize(env.state());
  CHECK(y(4) == doctest::Approx(1.0));  // full battery
  CHECK(y(5) == doctest::Approx(1.0));

  auto dcfg = toy_config(1, 10);
  dcfg.users.dynamic = true;
  dcfg.users.hotspot_fraction = 1.0;
  dcfg.users.hotspots.push_back({{2.0, 2.0}, {}, 0.5});
  dcfg.horizon.steps = 100;
  Env denv(dcfg);
  const auto dnorm = denv.state_normalizer();
  CHECK(dnorm.lo(3) == doctest::Approx(1.0));
  CHECK(dnorm.hi(3) == doctest::Approx(100.0));
}

TEST_CASE("step before reset is rejected") {
  auto cfg = toy_config(1, 5);
  Env env(cfg);
  CHECK_THROWS_AS(env.step(Vector::Zero(2)), std::logic_error);
}
