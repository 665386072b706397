"""Shared pieces for the actor-critic learners."""

from __future__ import annotations

import numpy as np

from ..errors import TrainingDiverged
from ..numerics import MlpParams, mlp_forward

SMOOTH_L1_DELTA = 1.0


def smooth_l1(err: np.ndarray) -> np.ndarray:
    """Quadratic within |err| <= 1, linear beyond."""
    a = np.abs(err)
    return np.where(a <= SMOOTH_L1_DELTA, 0.5 * err * err, a - 0.5 * SMOOTH_L1_DELTA)


def smooth_l1_grad(err: np.ndarray) -> np.ndarray:
    return np.clip(err, -SMOOTH_L1_DELTA, SMOOTH_L1_DELTA)


def critic_eval(params: MlpParams, states: np.ndarray, actions: np.ndarray,
                want_cache: bool = False):
    """Q(s, a) for a batch; inputs are concatenated columns."""
    x = np.hstack([states, actions])
    if want_cache:
        out, cache = mlp_forward(params, x, want_cache=True)
        return out[:, 0], x, cache
    return mlp_forward(params, x)[:, 0]


def check_losses(losses: dict) -> None:
    bad = {k: v for k, v in losses.items() if v is not None and not np.isfinite(v)}
    if bad:
        raise TrainingDiverged(f"non-finite losses: {bad}")
