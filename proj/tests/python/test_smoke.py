"""End-to-end smoke tests for the Python bindings."""

import math
from pathlib import Path

import pytest

import uavnet

ROOT = Path(__file__).resolve().parents[2]
TOY = ROOT / "scenarios" / "toy_static.json"


def test_physics_anchors():
    assert uavnet.path_loss_db(300.0) == pytest.approx(89.01, abs=0.01)
    assert uavnet.coverage_radius(300.0, 60.0) == pytest.approx(173.205, abs=1e-3)
    assert uavnet.level_power(0.0) == pytest.approx(9.428, abs=1e-3)
    assert uavnet.slot_energy(100.0) == pytest.approx(7.51, abs=0.01)
    assert uavnet.us_score(7, 2.0) == 49.0


def test_scenario_load():
    scenario = uavnet.load_scenario(str(TOY))
    assert scenario.n_uav == 2
    assert scenario.n_users == 20
    assert scenario.horizon_steps == 30
    assert scenario.side_units == pytest.approx(6.0)
    assert "2 UAVs" in repr(scenario)


def test_env_episode():
    scenario = uavnet.load_scenario(str(TOY))
    env = uavnet.Env(scenario)
    state = env.reset()
    assert len(state) == env.state_dim
    assert env.action_dim == 2 * env.n_uav

    hold = [0.0] * env.action_dim
    steps = 0
    while not env.terminal:
        state, reward, terminal, served = env.step(hold)
        steps += 1
        assert len(state) == env.state_dim
        assert 0.0 <= reward <= 1.0
        assert 0 <= served <= scenario.n_users
    assert steps == scenario.horizon_steps

    fleet = env.fleet()
    assert len(fleet) == env.n_uav
    assert all(u["status"] == "active" for u in fleet)
    assert all(u["altitude"] == 300.0 for u in fleet)

    env.reset()
    with pytest.raises(ValueError):
        env.step([0.0])


def test_placement_search():
    scenario = uavnet.load_scenario(str(TOY))
    result = uavnet.place(scenario, n_uavs=2, grid_step=0.5)
    assert result["exhaustive"]
    assert result["served"] == 20
    assert result["score"] == pytest.approx(400.0)
    assert len(result["positions"]) == 2
    assert result["evaluations"] > 0


def test_train_rollout_compare(tmp_path):
    scenario = uavnet.load_scenario(str(TOY))
    out = tmp_path / "run"
    summary = uavnet.train(
        scenario,
        workers=1,
        episodes_per_worker=3,
        updates_per_episode=2,
        seed=9,
        out_dir=str(out),
    )
    assert summary["episodes"] == 3
    assert len(summary["rewards"]) == 3
    assert all(math.isfinite(r) for r in summary["rewards"])
    checkpoint = out / "best.ckpt"
    assert checkpoint.is_file()

    trace = uavnet.rollout(str(checkpoint), scenario)
    assert trace["steps"] == len(trace["served"]) > 0
    assert trace["accumulated_sc"] == pytest.approx(sum(trace["sc"]))

    # without a lineup event the passive baseline equals the proactive run
    report = uavnet.compare(
        scenario, psr=str(checkpoint), pre=str(checkpoint), post=str(checkpoint)
    )
    assert report["gain_percent"] == pytest.approx(0.0)
    assert report["window_first"] == 1
    assert report["proactive_sum"] == pytest.approx(report["baseline_sum"])
