"""Tanh-squashed Gaussian policy head.

Sampling uses the reparameterization u = mean + std * xi with xi drawn
standard normal, action = tanh(u). The log-density includes the tanh
change-of-variables term, computed in the softplus form

    log(1 - tanh(u)^2) = 2 * (log 2 - u - softplus(-2u))

which avoids the catastrophic cancellation of evaluating 1 - tanh(u)^2
for |u| of a few tens.
"""

from __future__ import annotations

import numpy as np

_LOG2 = float(np.log(2.0))
_HALF_LOG_2PI = 0.5 * float(np.log(2.0 * np.pi))


def _softplus(x):
    return np.logaddexp(0.0, x)


def tanh_log_jacobian(u):
    """log(1 - tanh(u)^2), elementwise, numerically stable."""
    return 2.0 * (_LOG2 - u - _softplus(-2.0 * u))


def squashed_gaussian_sample(mean, log_std, rng=None, xi=None):
    """Sample a bounded action and its log-probability.

    Returns (action, log_prob, xi) with shapes matching mean except
    log_prob, which is summed over the trailing action axis. Passing a
    pre-drawn ``xi`` freezes the noise (used by reparameterized gradients
    and their finite-difference checks).
    """
    mean = np.asarray(mean, dtype=np.float64)
    log_std = np.asarray(log_std, dtype=np.float64)
    if xi is None:
        xi = rng.standard_normal(mean.shape)
    std = np.exp(log_std)
    u = mean + std * xi
    action = np.tanh(u)
    log_prob = np.sum(
        -0.5 * xi * xi - _HALF_LOG_2PI - log_std - tanh_log_jacobian(u),
        axis=-1,
    )
    return action, log_prob, xi


def squashed_gaussian_mode(mean):
    """Deterministic action (noise forced to zero)."""
    return np.tanh(np.asarray(mean, dtype=np.float64))


def squashed_gaussian_logprob(mean, log_std, u):
    """Log-probability of the action tanh(u) given its pre-squash value."""
    mean = np.asarray(mean, dtype=np.float64)
    log_std = np.asarray(log_std, dtype=np.float64)
    std = np.exp(log_std)
    xi = (u - mean) / std
    return np.sum(
        -0.5 * xi * xi - _HALF_LOG_2PI - log_std - tanh_log_jacobian(u),
        axis=-1,
    )


def squashed_gaussian_grads(mean, log_std, xi, g_action, g_logprob):
    """Reparameterized gradients w.r.t. mean and log_std with frozen xi.

    ``g_action`` is dL/d(action) per element; ``g_logprob`` is
    dL/d(log_prob) per sample (broadcast over action dims). Uses
    d log_prob / du = 2 tanh(u) and the direct -1 dependence of the
    density term on log_std.
    """
    std = np.exp(log_std)
    u = mean + std * xi
    a = np.tanh(u)
    g_logprob = np.asarray(g_logprob)[..., None]
    g_u = g_action * (1.0 - a * a) + g_logprob * (2.0 * a)
    g_mean = g_u
    g_log_std = g_u * std * xi - g_logprob
    return g_mean, g_log_std
