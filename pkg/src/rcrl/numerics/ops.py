"""Public MLP operations: forward, exact backward, Adam, Polyak.

Gradients are plain VJPs: ``mlp_backward`` returns d(sum(upstream * out))
/ d(params); callers fold any 1/batch factors into ``upstream``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, NumericsError
from . import backend
from .params import LOG_STD_MAX, LOG_STD_MIN, MlpGrads, MlpParams, OptimState


@dataclass
class ForwardCache:
    acts: list
    z: np.ndarray
    out: np.ndarray


def _as_batch(x) -> tuple:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x[None, :], True
    if x.ndim == 2:
        return x, False
    raise ConfigError(f"input must be 1-D or 2-D, got shape {x.shape}")


def _apply_head(params: MlpParams, z: np.ndarray) -> np.ndarray:
    if params.head == "linear":
        return z
    if params.head == "tanh":
        return np.tanh(z)
    d = params.out_dim
    out = z.copy()
    np.clip(out[:, d:], LOG_STD_MIN, LOG_STD_MAX, out=out[:, d:])
    return out


def mlp_forward(params: MlpParams, x, want_cache: bool = False):
    """Head output for a single input vector or a batch.

    For the gaussian head the output columns are [mean | clamped log_std].
    """
    xb, squeeze = _as_batch(x)
    if xb.shape[1] != params.in_dim:
        raise ConfigError(f"input width {xb.shape[1]} != network input {params.in_dim}")
    acts, z = backend.forward(params.weights, params.biases, np.ascontiguousarray(xb))
    out = _apply_head(params, z)
    if want_cache:
        return out, ForwardCache(acts=acts, z=z, out=out)
    return out[0] if squeeze else out


def split_gaussian(out):
    """Split a gaussian-head output batch into (mean, log_std)."""
    d = out.shape[-1] // 2
    return out[..., :d], out[..., d:]


def mlp_backward(params: MlpParams, x, upstream, cache: ForwardCache = None) -> MlpGrads:
    """Exact gradients of sum(upstream * head_output) w.r.t. all parameters.

    ``upstream`` matches the head output shape (for the gaussian head:
    [d mean | d log_std] columns). Also returns the input-batch gradient,
    which critics expose to actor updates.
    """
    xb, _ = _as_batch(x)
    up, _ = _as_batch(upstream)
    if cache is None:
        _, cache = mlp_forward(params, xb, want_cache=True)
    z, out = cache.z, cache.out
    if up.shape != z.shape:
        raise ConfigError(f"upstream shape {up.shape} != head shape {z.shape}")
    if params.head == "linear":
        g_z = up
    elif params.head == "tanh":
        g_z = up * (1.0 - out * out)
    else:
        d = params.out_dim
        g_z = up.copy()
        raw = z[:, d:]
        g_z[:, d:] *= (raw > LOG_STD_MIN) & (raw < LOG_STD_MAX)
    gw, gb, gx = backend.backward(params.weights, cache.acts, np.ascontiguousarray(g_z))
    return MlpGrads(weights=gw, biases=gb, input=gx)


def adam_step(params: MlpParams, grads: MlpGrads, opt: OptimState) -> None:
    """In-place bias-corrected Adam update; rejects non-finite gradients."""
    p_arrays = params.arrays()
    g_arrays = grads.arrays()
    if len(p_arrays) != len(g_arrays):
        raise ConfigError("gradient layout does not match parameters")
    for p, g in zip(p_arrays, g_arrays):
        if p.shape != g.shape:
            raise ConfigError(f"gradient shape {g.shape} != param shape {p.shape}")
        if not np.all(np.isfinite(g)):
            raise NumericsError("non-finite gradient component; update rejected")
    opt.step_count += 1
    backend.adam(
        p_arrays,
        g_arrays,
        opt.first_moment,
        opt.second_moment,
        opt.step_count,
        opt.learning_rate,
        opt.beta1,
        opt.beta2,
        opt.epsilon,
    )


def polyak_update(target: MlpParams, online: MlpParams, tau: float) -> None:
    """target <- tau*target + (1-tau)*online, elementwise, in place."""
    if not 0.0 < tau <= 1.0:
        raise ConfigError(f"tau must be in (0, 1], got {tau}")
    t_arrays = target.arrays()
    o_arrays = online.arrays()
    for t, o in zip(t_arrays, o_arrays):
        if t.shape != o.shape:
            raise ConfigError("target/online shapes differ")
    if tau == 1.0:
        return
    backend.polyak(t_arrays, o_arrays, tau)
