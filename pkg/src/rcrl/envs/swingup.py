"""Torque-limited pendulum swing-up.

The pole starts hanging down; the torque bound is well below the gravity
torque, so the controller must pump energy over several swings before it
can balance. The base reward is an upright-alignment score in [0, 1];
the auxiliary channel penalizes either plain action magnitude or the
behavioral triple (action smoothness, velocity jerk, effort).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, NumericsError
from .base import EnvStep

AUX_MODES = ("action_magnitude", "behavioral")


@dataclass
class SwingUpConfig:
    length: float = 1.0
    mass: float = 1.0
    gravity: float = 10.0
    dt: float = 0.02
    max_steps: int = 1000
    torque_scale: float = 2.0     # physical torque at |action| = 1
    theta_dot_max: float = 8.0
    init_noise: float = 0.05
    aux_mode: str = "action_magnitude"

    def __post_init__(self):
        if self.aux_mode not in AUX_MODES:
            raise ConfigError(f"unknown aux_mode {self.aux_mode!r}")
        for name in ("length", "mass", "gravity", "dt", "torque_scale"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")


class SwingUpEnv:
    """theta is measured from upright; hanging down is theta = pi."""

    obs_dim = 3
    act_dim = 1

    def __init__(self, config: SwingUpConfig = None):
        self.cfg = config or SwingUpConfig()
        self._theta = math.pi
        self._theta_dot = 0.0
        self._prev_action = 0.0
        self._prev_theta_dot = 0.0
        self._steps = 0
        self._done = True

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        cfg = self.cfg
        self._theta = self._wrap(math.pi + rng.uniform(-cfg.init_noise, cfg.init_noise))
        self._theta_dot = rng.uniform(-cfg.init_noise, cfg.init_noise)
        self._prev_action = 0.0
        self._prev_theta_dot = self._theta_dot
        self._steps = 0
        self._done = False
        return self._observe()

    @staticmethod
    def _wrap(theta: float) -> float:
        return math.atan2(math.sin(theta), math.cos(theta))

    def _observe(self) -> np.ndarray:
        return np.array(
            [math.cos(self._theta), math.sin(self._theta),
             self._theta_dot / self.cfg.theta_dot_max]
        )

    def step(self, action) -> EnvStep:
        if self._done:
            raise ConfigError("step() called on a finished episode; call reset()")
        a = float(np.asarray(action, dtype=np.float64).reshape(-1)[0])
        if not math.isfinite(a):
            raise NumericsError("non-finite action")
        a = min(max(a, -1.0), 1.0)
        cfg = self.cfg

        torque = a * cfg.torque_scale
        accel = (cfg.gravity / cfg.length) * math.sin(self._theta) + torque / (
            cfg.mass * cfg.length * cfg.length
        )
        self._theta_dot = min(
            max(self._theta_dot + accel * cfg.dt, -cfg.theta_dot_max), cfg.theta_dot_max
        )
        self._theta = self._wrap(self._theta + self._theta_dot * cfg.dt)
        self._steps += 1

        r_base = 0.5 * (1.0 + math.cos(self._theta))
        r_smooth = -abs(a - self._prev_action)
        r_jerk = -abs(self._theta_dot - self._prev_theta_dot)
        r_effort = -abs(a)
        if cfg.aux_mode == "action_magnitude":
            r_aux = -abs(a)
        else:
            r_aux = r_smooth + r_jerk + r_effort
        self._prev_action = a
        self._prev_theta_dot = self._theta_dot

        truncated = self._steps >= cfg.max_steps
        self._done = truncated
        return EnvStep(
            next_observation=self._observe(),
            r_fixed=0.0,
            r_base=r_base,
            r_aux=r_aux,
            terminated=False,
            truncated=truncated,
            outcome="timeout" if truncated else "running",
            raw_terms={
                "r_smooth": r_smooth,
                "r_jerk": r_jerk,
                "r_effort": r_effort,
                "upright": r_base,
            },
        )
