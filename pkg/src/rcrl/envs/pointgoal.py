"""Planar goal-navigation environment (unicycle robot, acceleration
actions, static circular obstacles).

Reward channels:
  r_fixed = goal bonus on reaching the goal (curriculum-exempt)
  r_base  = base_scale * progress along the straight start-goal
            reference path (potential-based shaping)
  r_aux   = aux_scale * (velocity tracking + action magnitude + path
            tracking), each dense term normalized to [-1, 1]

An episode ends with exactly one of: goal (within goal_radius), collision
(wall or obstacle), or timeout (max_steps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, NumericsError, ResetError
from .base import EnvStep
from .scenario import Scenario


@dataclass
class PointGoalConfig:
    half_size: float = 6.0
    dt: float = 0.1
    v_max: float = 1.5
    v_ref: float = 1.2
    kappa: float = 0.942
    d_track_max: float = 5.0
    goal_radius: float = 0.3
    max_steps: int = 300
    goal_bonus: float = 10.0
    base_scale: float = 0.02
    aux_scale: float = 0.5
    lin_accel: float = 2.0       # units/s^2 at |action| = 1
    ang_accel: float = 6.0       # rad/s^2 at |action| = 1
    omega_max: float = 2.0       # rad/s
    ray_count: int = 8
    ray_range: float = 6.0
    min_goal_dist: float = 3.0
    max_goal_dist: float = 7.0
    wall_margin: float = 1.0
    max_obstacles: int = 3
    obstacle_radius_min: float = 0.3
    obstacle_radius_max: float = 0.8
    obstacle_clearance: float = 0.8
    # The published form of the tracking term rewards deviation; kept
    # available for comparison but off by default (see reward_tracking).
    legacy_tracking_reward: bool = False

    def __post_init__(self):
        if not 0.0 < self.v_ref < self.v_max:
            raise ConfigError("need 0 < v_ref < v_max")
        if not 0.0 <= self.kappa <= 1.0:
            raise ConfigError("kappa must be in [0, 1]")
        for name in ("goal_radius", "d_track_max", "dt", "half_size", "ray_range"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")


# -- reward terms -----------------------------------------------------------


def reward_action(action) -> float:
    """1 - sum(|a_i|): 1 for no actuation, -1 at full double actuation."""
    a = np.asarray(action, dtype=np.float64)
    return float(1.0 - np.sum(np.abs(a)))


def piecewise_quadratic(x: float, kappa: float) -> float:
    """kappa*x^2 for x > 0, (1-kappa)*x^2 otherwise; continuous at 0."""
    if x > 0.0:
        return kappa * x * x
    return (1.0 - kappa) * x * x


def reward_velocity(v: float, cfg: PointGoalConfig) -> float:
    """Asymmetric quadratic speed-tracking score, 1 at v_ref.

    1 - 2*q(v - v_ref) / max(q(-v_ref), q(v_max - v_ref)) with q the
    piecewise quadratic, so overspeed (v_max) maps to -1 and the
    normalization covers the v = 0 underspeed extreme too.
    """
    num = piecewise_quadratic(v - cfg.v_ref, cfg.kappa)
    den = max(
        piecewise_quadratic(-cfg.v_ref, cfg.kappa),
        piecewise_quadratic(cfg.v_max - cfg.v_ref, cfg.kappa),
    )
    return 1.0 - 2.0 * num / den


def reward_tracking(d_track: float, d_track_max: float, legacy: bool = False) -> float:
    """Deviation from the reference path: 1 on the path, -1 at or beyond
    d_track_max, linear between.

    ``legacy=True`` selects clip(|d|/d_max, -1, 1) instead, which is
    non-negative and grows with deviation; kept only for comparison runs.
    """
    ratio = abs(d_track) / d_track_max
    if legacy:
        return float(np.clip(ratio, -1.0, 1.0))
    return 1.0 - 2.0 * min(ratio, 1.0)


def reward_progress(p_prev: float, p_next: float, cfg: PointGoalConfig) -> float:
    """Path-potential difference per maximum step distance, clipped to
    [-1, 1]. Telescopes over an episode while unclipped."""
    return float(np.clip((p_next - p_prev) / (cfg.v_max * cfg.dt), -1.0, 1.0))


# -- geometry ---------------------------------------------------------------


def _project_to_segment(p, a, b):
    """(arc length along a->b, distance to segment) of point p."""
    ab = b - a
    L = float(np.hypot(ab[0], ab[1]))
    if L == 0.0:
        return 0.0, float(np.hypot(*(p - a)))
    t = float(np.dot(p - a, ab) / (L * L))
    t = min(max(t, 0.0), 1.0)
    closest = a + t * ab
    return t * L, float(np.hypot(*(p - closest)))


def _ray_box_exit(p, d, half: float) -> float:
    """Distance from p (inside the box) along direction d to the wall."""
    best = math.inf
    for i in (0, 1):
        if d[i] > 1e-12:
            t = (half - p[i]) / d[i]
        elif d[i] < -1e-12:
            t = (-half - p[i]) / d[i]
        else:
            continue
        if 0.0 <= t < best:
            other = p[1 - i] + t * d[1 - i]
            if abs(other) <= half + 1e-9:
                best = t
    return best


def _ray_circle(p, d, center, radius: float) -> float:
    """Smallest positive distance along ray p + t*d to the circle, inf if missed."""
    oc = p - center
    b = float(np.dot(oc, d))
    c = float(np.dot(oc, oc)) - radius * radius
    disc = b * b - c
    if disc < 0.0:
        return math.inf
    root = math.sqrt(disc)
    t = -b - root
    if t > 0.0:
        return t
    t = -b + root
    return t if t > 0.0 else math.inf


class PointGoalEnv:
    """Desk-scale analogue of goal navigation with dense behavioral terms."""

    obs_dim = 16
    act_dim = 2

    def __init__(self, config: PointGoalConfig = None, scenario: Scenario = None):
        self.cfg = config or PointGoalConfig()
        self.scenario = scenario
        self._pos = np.zeros(2)
        self._heading = 0.0
        self._v = 0.0
        self._omega = 0.0
        self._goal = np.zeros(2)
        self._obstacles: list = []
        self._path_a = np.zeros(2)
        self._path_b = np.zeros(2)
        self._path_len = 1.0
        self._p_along = 0.0
        self._steps = 0
        self._done = True

    # -- episode setup ------------------------------------------------------

    def _sample_world(self, rng: np.random.Generator):
        cfg = self.cfg
        lim = cfg.half_size - cfg.wall_margin
        start = rng.uniform(-lim, lim, size=2)
        heading = rng.uniform(-math.pi, math.pi)
        goal = None
        for _ in range(100):
            cand = rng.uniform(-lim, lim, size=2)
            dist = float(np.hypot(*(cand - start)))
            if cfg.min_goal_dist <= dist <= cfg.max_goal_dist:
                goal = cand
                break
        if goal is None:
            raise ResetError("could not place a goal satisfying the distance band")
        obstacles = []
        count = int(rng.integers(0, cfg.max_obstacles + 1))
        for _ in range(count):
            placed = False
            for _ in range(100):
                center = rng.uniform(-lim, lim, size=2)
                radius = rng.uniform(cfg.obstacle_radius_min, cfg.obstacle_radius_max)
                clear = radius + cfg.obstacle_clearance
                _, d_seg = _project_to_segment(center, start, goal)
                if (np.hypot(*(center - start)) > clear
                        and np.hypot(*(center - goal)) > clear + cfg.goal_radius
                        and d_seg > clear):
                    obstacles.append((float(center[0]), float(center[1]), float(radius)))
                    placed = True
                    break
            if not placed:
                raise ResetError("could not place obstacles clear of the path")
        return (float(start[0]), float(start[1]), heading), (float(goal[0]), float(goal[1])), obstacles

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        if self.scenario is not None:
            s = self.scenario
            start, goal, obstacles = s.start, s.goal, list(s.obstacles)
        else:
            start, goal, obstacles = self._sample_world(rng)
        self._pos = np.array(start[:2], dtype=np.float64)
        self._heading = float(start[2])
        self._v = 0.0
        self._omega = 0.0
        self._goal = np.array(goal, dtype=np.float64)
        self._obstacles = obstacles
        self._path_a = self._pos.copy()
        self._path_b = self._goal.copy()
        self._path_len = max(float(np.hypot(*(self._path_b - self._path_a))), 1e-9)
        self._p_along, _ = _project_to_segment(self._pos, self._path_a, self._path_b)
        self._steps = 0
        self._done = False
        return self._observe()

    # -- observation ----------------------------------------------------------

    def _rays(self) -> np.ndarray:
        cfg = self.cfg
        out = np.empty(cfg.ray_count)
        for k in range(cfg.ray_count):
            ang = self._heading + 2.0 * math.pi * k / cfg.ray_count
            d = np.array([math.cos(ang), math.sin(ang)])
            dist = _ray_box_exit(self._pos, d, cfg.half_size)
            for cx, cy, r in self._obstacles:
                dist = min(dist, _ray_circle(self._pos, d, np.array([cx, cy]), r))
            out[k] = min(dist, cfg.ray_range) / cfg.ray_range
        return out

    def _observe(self) -> np.ndarray:
        cfg = self.cfg
        c, s = math.cos(self._heading), math.sin(self._heading)
        rel = self._goal - self._pos
        local = np.array([c * rel[0] + s * rel[1], -s * rel[0] + c * rel[1]])
        _, d_track = _project_to_segment(self._pos, self._path_a, self._path_b)
        obs = np.empty(self.obs_dim)
        obs[0] = self._pos[0] / cfg.half_size
        obs[1] = self._pos[1] / cfg.half_size
        obs[2] = self._v / cfg.v_max
        obs[3] = self._omega / cfg.omega_max
        obs[4] = local[0] / (2.0 * cfg.half_size)
        obs[5] = local[1] / (2.0 * cfg.half_size)
        obs[6] = self._p_along / self._path_len
        obs[7] = min(d_track / cfg.d_track_max, 1.0)
        obs[8:] = self._rays()
        return obs

    # -- dynamics ---------------------------------------------------------------

    def step(self, action) -> EnvStep:
        if self._done:
            raise ConfigError("step() called on a finished episode; call reset()")
        a = np.asarray(action, dtype=np.float64).reshape(-1)
        if a.shape != (2,):
            raise ConfigError(f"action must have 2 components, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NumericsError("non-finite action")
        a = np.clip(a, -1.0, 1.0)
        cfg = self.cfg

        self._v = float(np.clip(self._v + a[0] * cfg.lin_accel * cfg.dt, 0.0, cfg.v_max))
        self._omega = float(np.clip(self._omega + a[1] * cfg.ang_accel * cfg.dt,
                                    -cfg.omega_max, cfg.omega_max))
        self._heading = math.atan2(
            math.sin(self._heading + self._omega * cfg.dt),
            math.cos(self._heading + self._omega * cfg.dt),
        )
        self._pos = self._pos + self._v * cfg.dt * np.array(
            [math.cos(self._heading), math.sin(self._heading)]
        )
        self._steps += 1

        p_prev = self._p_along
        p_next, d_track = _project_to_segment(self._pos, self._path_a, self._path_b)
        self._p_along = p_next

        r_p = reward_progress(p_prev, p_next, cfg)
        r_v = reward_velocity(self._v, cfg)
        r_a = reward_action(a)
        r_x = reward_tracking(d_track, cfg.d_track_max, cfg.legacy_tracking_reward)
        r_base = cfg.base_scale * r_p
        r_aux = cfg.aux_scale * (r_v + r_a + r_x)

        outcome = "running"
        terminated = False
        truncated = False
        r_fixed = 0.0
        outside = (abs(self._pos[0]) > cfg.half_size or abs(self._pos[1]) > cfg.half_size)
        hit = any(
            np.hypot(self._pos[0] - cx, self._pos[1] - cy) < r
            for cx, cy, r in self._obstacles
        )
        if outside or hit:
            terminated = True
            outcome = "collision"
        elif np.hypot(*(self._goal - self._pos)) <= cfg.goal_radius:
            terminated = True
            outcome = "goal"
            r_fixed = cfg.goal_bonus
        elif self._steps >= cfg.max_steps:
            truncated = True
            outcome = "timeout"
        self._done = terminated or truncated

        return EnvStep(
            next_observation=self._observe(),
            r_fixed=r_fixed,
            r_base=r_base,
            r_aux=r_aux,
            terminated=terminated,
            truncated=truncated,
            outcome=outcome,
            raw_terms={"r_p": r_p, "r_v": r_v, "r_a": r_a, "r_x": r_x},
        )

    def world_scenario(self) -> Scenario:
        """Snapshot of the current world layout as a scenario."""
        return Scenario(
            half_size=self.cfg.half_size,
            start=(float(self._path_a[0]), float(self._path_a[1]), self._heading),
            goal=(float(self._goal[0]), float(self._goal[1])),
            obstacles=list(self._obstacles),
        )
