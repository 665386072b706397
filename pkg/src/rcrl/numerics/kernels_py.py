"""Pure-numpy kernel backend.

Reference implementation of the hot loops; the compiled backend in
``_core`` implements the same four entry points with identical semantics.
"""

from __future__ import annotations

import numpy as np


def forward(weights, biases, x):
    """ReLU MLP forward pass.

    Returns (acts, z) where acts[0] is the input, acts[i] the i-th hidden
    activation, and z the pre-head output of the final layer.
    """
    acts = [x]
    h = x
    for w, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ w + b, 0.0)
        acts.append(h)
    z = h @ weights[-1] + biases[-1]
    return acts, z


def backward(weights, acts, g_z):
    """Backprop from the pre-head gradient g_z.

    Returns (grad_weights, grad_biases, grad_input).
    """
    n = len(weights)
    gw = [None] * n
    gb = [None] * n
    g = g_z
    for i in range(n - 1, -1, -1):
        gw[i] = acts[i].T @ g
        gb[i] = g.sum(axis=0)
        g = g @ weights[i].T
        if i > 0:
            g = g * (acts[i] > 0.0)
    return gw, gb, g


def adam(arrays, grads, first, second, step_count, lr, beta1, beta2, eps):
    """One bias-corrected Adam update, in place. step_count is the new count."""
    c1 = 1.0 - beta1 ** step_count
    c2 = 1.0 - beta2 ** step_count
    for p, g, m, v in zip(arrays, grads, first, second):
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * (g * g)
        p -= lr * (m / c1) / (np.sqrt(v / c2) + eps)


def polyak(targets, onlines, tau):
    """target <- tau*target + (1-tau)*online, in place."""
    for t, o in zip(targets, onlines):
        t *= tau
        t += (1.0 - tau) * o
