"""Two-stage reward curriculum: weight schedule, switch predicates, and
the metric tracking that feeds them.

Training starts in phase 0 where only the base (task) reward is used.
Once a switch predicate fires, the auxiliary weight w is annealed from 0
to w_target over a fixed number of steps. Three adaptive predicates are
provided (actor-loss fit, base-reward threshold, base-reward plateau via
robust regression) plus a fixed-step switch for ablations.

All predicates are pure functions of the recorded metric history, so a
logged run can be replayed offline and must reproduce the same switch
step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericsError

log = logging.getLogger(__name__)

SCHEDULES = ("step", "linear", "cosine")
CRITERIA = ("actor_fit", "base_threshold", "convergence", "fixed")


# -- weight schedule -----------------------------------------------------


def anneal_factor(schedule: str, dt, t_ann: int):
    """Annealing factor in [0, 1] after dt steps of a t_ann-step ramp.

    step:   1 for all dt >= 0
    linear: min(dt / t_ann, 1)
    cosine: 0.5 * (1 - cos(pi * min(dt / t_ann, 1)))

    t_ann == 0 degenerates to the step schedule. Accepts scalars or
    arrays in dt.
    """
    if schedule not in SCHEDULES:
        raise ConfigError(f"unknown anneal schedule {schedule!r}")
    dt = np.asarray(dt, dtype=np.float64)
    if np.any(dt < 0):
        raise ConfigError("dt must be >= 0")
    if schedule == "step" or t_ann <= 0:
        out = np.ones_like(dt)
    else:
        frac = np.minimum(dt / float(t_ann), 1.0)
        if schedule == "linear":
            out = frac
        else:
            out = 0.5 * (1.0 - np.cos(np.pi * frac))
    return out if out.ndim else float(out)


@dataclass
class CurriculumState:
    """Phase flag, switch bookkeeping, and the annealing configuration."""

    w_target: float
    schedule: str = "linear"
    anneal_duration: int = 40_000
    criterion: str = "convergence"
    fixed_switch_step: int = 0
    phase: int = 0
    t_switch: int = None

    def __post_init__(self):
        if not 0.0 <= self.w_target < 1.0:
            raise ConfigError(f"w_target must be in [0, 1), got {self.w_target}")
        if self.schedule not in SCHEDULES:
            raise ConfigError(f"unknown anneal schedule {self.schedule!r}")
        if self.criterion not in CRITERIA:
            raise ConfigError(f"unknown switch criterion {self.criterion!r}")
        if self.criterion == "fixed" and self.fixed_switch_step <= 0:
            raise ConfigError("fixed criterion needs a positive fixed_switch_step")

    def switch(self, t: int) -> None:
        if self.phase != 0:
            raise ConfigError("phase switch may only happen once")
        self.phase = 1
        self.t_switch = int(t)


def current_weight(cs: CurriculumState, t) -> float:
    """Auxiliary weight at global step t: 0 in phase 0, annealed toward
    w_target after the switch, never exceeding w_target."""
    if cs.phase == 0:
        return np.zeros_like(np.asarray(t, dtype=np.float64)) if np.ndim(t) else 0.0
    a = anneal_factor(cs.schedule, np.asarray(t) - cs.t_switch, cs.anneal_duration)
    return a * cs.w_target


# -- robust slope estimation ----------------------------------------------


def _huber_rho(u: np.ndarray, eps: float) -> np.ndarray:
    au = np.abs(u)
    return np.where(au <= eps, 0.5 * u * u, eps * au - 0.5 * eps * eps)


def huber_objective(x, y, intercept: float, slope: float, sigma: float, eps: float) -> float:
    """Sum of Huber losses of standardized residuals; the quantity
    huber_fit minimizes once the residual scale sigma is fixed."""
    r = (np.asarray(y) - intercept - slope * np.asarray(x)) / sigma
    return float(np.sum(_huber_rho(r, eps)))


def huber_residual_scale(x, y) -> float:
    """Residual scale convention: 1.4826 * MAD of the OLS residuals."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    b, a = np.polyfit(x, y, 1)
    r = y - a - b * x
    return 1.4826 * float(np.median(np.abs(r - np.median(r))))


def huber_fit(x, y, eps_huber: float = 1.35):
    """Robust line fit: squared loss on small standardized residuals,
    linear beyond eps_huber.

    The residual scale is frozen up front (1.4826 * MAD of OLS residuals),
    making the objective convex in (intercept, slope); IRLS then converges
    to its unique minimum. Returns (intercept, slope). Data that an OLS
    line fits (near-)exactly short-circuits to the OLS solution.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ConfigError("need >= 2 (x, y) points of equal length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise NumericsError("non-finite values in regression input")
    if np.unique(x).size != x.size:
        raise ConfigError("x values must be distinct")
    if eps_huber <= 0:
        raise ConfigError("eps_huber must be positive")

    b, a = np.polyfit(x, y, 1)
    sigma = huber_residual_scale(x, y)
    yscale = max(1.0, float(np.max(np.abs(y))))
    if sigma <= 1e-12 * yscale:
        return float(a), float(b)

    for _ in range(200):
        r = (y - a - b * x) / sigma
        w = np.ones_like(r)
        big = np.abs(r) > eps_huber
        w[big] = eps_huber / np.abs(r[big])
        sw = w.sum()
        swx = (w * x).sum()
        swxx = (w * x * x).sum()
        swy = (w * y).sum()
        swxy = (w * x * y).sum()
        det = sw * swxx - swx * swx
        a_new = (swxx * swy - swx * swxy) / det
        b_new = (sw * swxy - swx * swy) / det
        if abs(a_new - a) + abs(b_new - b) < 1e-14 * (1.0 + abs(a) + abs(b)):
            a, b = a_new, b_new
            break
        a, b = a_new, b_new
    return float(a), float(b)


def huber_fit_slope(x, y, eps_huber: float = 1.35) -> float:
    """Slope of the robust line fit (see :func:`huber_fit`)."""
    return huber_fit(x, y, eps_huber)[1]


# -- metric tracking -------------------------------------------------------


@dataclass
class SwitchParams:
    """Thresholds and windows for the switch predicates. Windows are
    counted in metric samples (one per cadence of environment steps)."""

    gamma_fit: float = -50.0
    fit_window: int = 20
    gamma_rbase: float = 0.5
    eps_slope: float = 0.001
    conv_window: int = 10
    eps_huber: float = 1.35
    regression_window: int = 75
    improvement_factor: float = 1.5

    def __post_init__(self):
        for name in ("fit_window", "conv_window", "regression_window"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.eps_huber <= 0 or self.eps_slope <= 0:
            raise ConfigError("eps values must be positive")


class MetricHistory:
    """Windowed per-step metrics at a fixed cadence.

    Every environment step feeds reward channels via :meth:`record_step`;
    every gradient update feeds losses via :meth:`record_update`. At each
    cadence boundary, :meth:`close_window` appends the window means, the
    rolling-smoothed base reward, and (once the regression window is
    filled) the robust trend slope of the smoothed series.
    """

    def __init__(self, cadence: int = 1000, smooth_window: int = 20,
                 switch_params: SwitchParams = None):
        if cadence < 1:
            raise ConfigError("cadence must be positive")
        self.cadence = cadence
        self.smooth_window = smooth_window
        self.switch_params = switch_params or SwitchParams()
        self.r_base_init: float = None

        self.steps: list = []
        self.r_fixed_mean: list = []
        self.r_base_mean: list = []
        self.r_aux_mean: list = []
        self.smoothed_r_base: list = []   # None until smooth_window filled
        self.slopes: list = []            # None until regression window filled
        self.actor_loss: list = []
        self.actor_loss_no_entropy: list = []
        self.critic1_loss: list = []
        self.critic2_loss: list = []
        self.alpha: list = []

        self._acc = {"r_fixed": 0.0, "r_base": 0.0, "r_aux": 0.0, "n": 0}
        self._loss_acc = {k: [0.0, 0] for k in
                          ("actor", "actor_ne", "critic1", "critic2")}
        self._alpha_last = None

    def set_baseline(self, r_base_init: float) -> None:
        """Per-step mean base reward under the warm-up random policy."""
        self.r_base_init = float(r_base_init)

    def record_step(self, r_base: float, r_aux: float, r_fixed: float = 0.0) -> None:
        if not (np.isfinite(r_base) and np.isfinite(r_aux) and np.isfinite(r_fixed)):
            log.warning("skipping non-finite reward sample (r_base=%r, r_aux=%r)",
                        r_base, r_aux)
            return
        self._acc["r_fixed"] += r_fixed
        self._acc["r_base"] += r_base
        self._acc["r_aux"] += r_aux
        self._acc["n"] += 1

    def record_update(self, critic1: float, critic2: float, actor: float = None,
                      actor_no_entropy: float = None, alpha: float = None) -> None:
        for key, val in (("critic1", critic1), ("critic2", critic2),
                         ("actor", actor), ("actor_ne", actor_no_entropy)):
            if val is None:
                continue
            if not np.isfinite(val):
                log.warning("skipping non-finite %s loss sample", key)
                continue
            acc = self._loss_acc[key]
            acc[0] += val
            acc[1] += 1
        if alpha is not None:
            self._alpha_last = float(alpha)

    def _window_mean(self, key: str):
        acc = self._loss_acc[key]
        return acc[0] / acc[1] if acc[1] else None

    def close_window(self, step: int) -> int:
        """Flush the current window as one metric sample; returns its index."""
        n = max(self._acc["n"], 1)
        r_base = self._acc["r_base"] / n
        r_aux = self._acc["r_aux"] / n
        self.steps.append(int(step))
        self.r_fixed_mean.append(self._acc["r_fixed"] / n)
        self.r_base_mean.append(r_base)
        self.r_aux_mean.append(r_aux)
        self.actor_loss.append(self._window_mean("actor"))
        self.actor_loss_no_entropy.append(self._window_mean("actor_ne"))
        self.critic1_loss.append(self._window_mean("critic1"))
        self.critic2_loss.append(self._window_mean("critic2"))
        self.alpha.append(self._alpha_last)

        if len(self.r_base_mean) >= self.smooth_window:
            sm = float(np.mean(self.r_base_mean[-self.smooth_window:]))
        else:
            sm = None
        self.smoothed_r_base.append(sm)

        p = self.switch_params
        valid = [v for v in self.smoothed_r_base[-p.regression_window:] if v is not None]
        if len(valid) == p.regression_window:
            slope = huber_fit_slope(
                np.arange(p.regression_window, dtype=np.float64), np.asarray(valid),
                p.eps_huber,
            )
        else:
            slope = None
        self.slopes.append(slope)

        self._acc = {"r_base": 0.0, "r_aux": 0.0, "n": 0}
        self._loss_acc = {k: [0.0, 0] for k in self._loss_acc}
        return len(self.steps) - 1


def record_metric(h: MetricHistory, step: int, r_base_step: float,
                  actor_loss: float = None) -> None:
    """Convenience wrapper: per-step recording plus automatic window close
    at cadence boundaries."""
    h.record_step(r_base_step, 0.0)
    if actor_loss is not None:
        h.record_update(critic1=None, critic2=None, actor=actor_loss,
                        actor_no_entropy=actor_loss)
    if step % h.cadence == 0:
        h.close_window(step)


# -- switch predicates ------------------------------------------------------


def check_actor_fit(h: MetricHistory, p: SwitchParams) -> bool:
    """True iff the last fit_window actor-loss samples (entropy term
    excluded for stochastic-policy agents) are all strictly below
    gamma_fit. Missing samples count as non-satisfying."""
    series = h.actor_loss_no_entropy
    if len(series) < p.fit_window:
        return False
    recent = series[-p.fit_window:]
    return all(v is not None and v < p.gamma_fit for v in recent)


def check_base_threshold(h: MetricHistory, p: SwitchParams) -> bool:
    """True iff the latest windowed per-step base-reward mean has reached
    gamma_rbase."""
    if not h.r_base_mean:
        return False
    return h.r_base_mean[-1] >= p.gamma_rbase


def check_convergence(h: MetricHistory, p: SwitchParams) -> bool:
    """Plateau detection: the robust trend slope of the smoothed base
    reward stays below eps_slope for conv_window consecutive samples, and
    the current level clears improvement_factor times the random-policy
    baseline (guards against firing before learning starts)."""
    if h.r_base_init is None or len(h.slopes) < p.conv_window:
        return False
    recent = h.slopes[-p.conv_window:]
    if any(s is None or s >= p.eps_slope for s in recent):
        return False
    return h.r_base_mean[-1] > p.improvement_factor * h.r_base_init


def check_transition(cs: CurriculumState, h: MetricHistory, p: SwitchParams,
                     t: int) -> bool:
    """Dispatch the configured criterion; only meaningful while phase 0."""
    if cs.criterion == "fixed":
        return t >= cs.fixed_switch_step
    if cs.criterion == "actor_fit":
        return check_actor_fit(h, p)
    if cs.criterion == "base_threshold":
        return check_base_threshold(h, p)
    return check_convergence(h, p)


# -- offline replay ----------------------------------------------------------


def replay_switch(criterion: str, p: SwitchParams, r_base_means,
                  actor_losses=None, r_base_init: float = None,
                  cadence: int = 1000, smooth_window: int = 20,
                  fixed_switch_step: int = 0, start_step: int = 0):
    """Re-run a switch predicate over logged metric series.

    Feeds the per-sample series through a fresh MetricHistory exactly as
    the trainer does and returns the step at which the predicate first
    fires (or None). ``start_step`` suppresses firings at or before it
    (the trainer does not evaluate predicates during warm-up).
    """
    h = MetricHistory(cadence=cadence, smooth_window=smooth_window, switch_params=p)
    if r_base_init is not None:
        h.set_baseline(r_base_init)
    if criterion == "fixed":
        cs = CurriculumState(w_target=0.0, criterion="fixed",
                             fixed_switch_step=fixed_switch_step)
    else:
        cs = CurriculumState(w_target=0.0, criterion=criterion)
    if actor_losses is None:
        actor_losses = [None] * len(r_base_means)
    for i, (rb, al) in enumerate(zip(r_base_means, actor_losses)):
        step = (i + 1) * cadence
        h.record_step(rb, 0.0)
        if al is not None:
            h.record_update(critic1=None, critic2=None, actor=al, actor_no_entropy=al)
        h.close_window(step)
        if step > start_step and check_transition(cs, h, p, step):
            return step
    return None
