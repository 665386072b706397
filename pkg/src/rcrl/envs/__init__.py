"""Desk-scale environments with split reward channels."""

from ..errors import ConfigError
from .base import OUTCOMES, EnvStep
from .pointgoal import (
    PointGoalConfig,
    PointGoalEnv,
    piecewise_quadratic,
    reward_action,
    reward_progress,
    reward_tracking,
    reward_velocity,
)
from .scenario import Scenario, load_scenario, parse_scenario, render_scenario, save_scenario
from .swingup import SwingUpConfig, SwingUpEnv

ENV_NAMES = ("pointgoal", "swingup")


def make_env(name: str, *, max_steps: int = 0, aux_mode: str = "",
             scenario: Scenario = None):
    """Build an environment by name with the common config knobs."""
    if name == "pointgoal":
        kwargs = {}
        if max_steps:
            kwargs["max_steps"] = max_steps
        return PointGoalEnv(PointGoalConfig(**kwargs), scenario=scenario)
    if name == "swingup":
        kwargs = {}
        if max_steps:
            kwargs["max_steps"] = max_steps
        if aux_mode:
            kwargs["aux_mode"] = aux_mode
        return SwingUpEnv(SwingUpConfig(**kwargs))
    raise ConfigError(f"unknown environment {name!r}")


__all__ = [
    "ENV_NAMES",
    "EnvStep",
    "OUTCOMES",
    "PointGoalConfig",
    "PointGoalEnv",
    "Scenario",
    "SwingUpConfig",
    "SwingUpEnv",
    "load_scenario",
    "make_env",
    "parse_scenario",
    "piecewise_quadratic",
    "render_scenario",
    "reward_action",
    "reward_progress",
    "reward_tracking",
    "reward_velocity",
    "save_scenario",
]
