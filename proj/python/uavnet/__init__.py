"""UAV communication-network laboratory.

Coverage/SINR simulation with per-UAV resource-block budgets, rotor-
aerodynamics flight energy, an episodic environment whose UAV lineup can
shrink (battery quits) or grow (scheduled joins), asynchronous host/worker
actor-critic training, a passive-reaction baseline for transition windows,
and a brute-force placement search.
"""

try:
    from uavnet._core import (  # noqa: F401
        Env,
        Scenario,
        compare,
        coverage_radius,
        level_power,
        load_scenario,
        path_loss_db,
        place,
        rollout,
        slot_energy,
        train,
        us_score,
    )
except ImportError:  # in-tree layout: extension built next to the package dir
    from _core import (  # noqa: F401
        Env,
        Scenario,
        compare,
        coverage_radius,
        level_power,
        load_scenario,
        path_loss_db,
        place,
        rollout,
        slot_energy,
        train,
        us_score,
    )

__all__ = [
    "Env",
    "Scenario",
    "compare",
    "coverage_radius",
    "level_power",
    "load_scenario",
    "path_loss_db",
    "place",
    "rollout",
    "slot_energy",
    "train",
    "us_score",
]

__version__ = "0.1.0"
