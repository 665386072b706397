"""Deterministic small-network math: ReLU MLPs with analytic gradients,
Adam, Polyak averaging, and the squashed-Gaussian policy head.

Two interchangeable kernel backends exist (compiled Cython and pure
numpy); see :mod:`rcrl.numerics.backend`.
"""

from .backend import backend_name
from .gaussian import (
    squashed_gaussian_grads,
    squashed_gaussian_logprob,
    squashed_gaussian_mode,
    squashed_gaussian_sample,
    tanh_log_jacobian,
)
from .ops import (
    ForwardCache,
    adam_step,
    mlp_backward,
    mlp_forward,
    polyak_update,
    split_gaussian,
)
from .params import (
    LOG_STD_MAX,
    LOG_STD_MIN,
    MlpGrads,
    MlpParams,
    OptimState,
    adam_init,
    init_mlp,
)

__all__ = [
    "LOG_STD_MAX",
    "LOG_STD_MIN",
    "ForwardCache",
    "MlpGrads",
    "MlpParams",
    "OptimState",
    "adam_init",
    "adam_step",
    "backend_name",
    "init_mlp",
    "mlp_backward",
    "mlp_forward",
    "polyak_update",
    "split_gaussian",
    "squashed_gaussian_grads",
    "squashed_gaussian_logprob",
    "squashed_gaussian_mode",
    "squashed_gaussian_sample",
    "tanh_log_jacobian",
]
