"""Parameter containers for the small MLPs used by the agents.

Weights use the ``x @ W + b`` convention: ``weights[i]`` has shape
``(fan_in, fan_out)`` and ``weights[i].shape[1] == weights[i+1].shape[0]``.
All arrays are float64 and C-contiguous so both kernel backends can work
on them directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError

HEADS = ("linear", "tanh", "gaussian")

# Numerical guard on the gaussian head's log-std output.
LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0


@dataclass
class MlpParams:
    """A fully connected ReLU network plus an output head.

    head:
      - "linear":   raw final layer output
      - "tanh":     tanh of the final layer, bounded to (-1, 1)
      - "gaussian": final layer holds [mean, log_std] halves; log_std is
        clamped to [LOG_STD_MIN, LOG_STD_MAX] before use
    """

    weights: list
    biases: list
    head: str = "linear"
    activation: str = "relu"

    def __post_init__(self):
        if self.head not in HEADS:
            raise ConfigError(f"unknown head {self.head!r}")
        if self.activation != "relu":
            raise ConfigError(f"unsupported activation {self.activation!r}")
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ConfigError("weights/biases must be non-empty and same length")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.shape[0]:
                raise ConfigError(f"layer {i}: weight {w.shape} / bias {b.shape} mismatch")
            if i + 1 < len(self.weights) and w.shape[1] != self.weights[i + 1].shape[0]:
                raise ConfigError(
                    f"layer {i} out width {w.shape[1]} != layer {i+1} in width "
                    f"{self.weights[i+1].shape[0]}"
                )
        if self.head == "gaussian" and self.weights[-1].shape[1] % 2 != 0:
            raise ConfigError("gaussian head needs an even final width (mean|log_std)")

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def out_dim(self) -> int:
        """Width of the head output (half of the final layer for gaussian)."""
        w = self.weights[-1].shape[1]
        return w // 2 if self.head == "gaussian" else w

    def arrays(self) -> list:
        """All parameter arrays in a fixed order: W0, b0, W1, b1, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def copy(self) -> "MlpParams":
        return MlpParams(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            head=self.head,
            activation=self.activation,
        )


@dataclass
class MlpGrads:
    """Gradients matching MlpParams plus the gradient w.r.t. the input batch."""

    weights: list
    biases: list
    input: np.ndarray = None

    def arrays(self) -> list:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out


@dataclass
class OptimState:
    """Adam moments for one MlpParams, arrays ordered as params.arrays()."""

    first_moment: list
    second_moment: list
    step_count: int = 0
    learning_rate: float = 3.0e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def copy(self) -> "OptimState":
        return OptimState(
            first_moment=[m.copy() for m in self.first_moment],
            second_moment=[v.copy() for v in self.second_moment],
            step_count=self.step_count,
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
        )


def init_mlp(layer_sizes, head: str, rng: np.random.Generator) -> MlpParams:
    """Fan-in-scaled uniform init (He-style bound), zero biases.

    ``layer_sizes`` is (in, hidden..., out); for the gaussian head ``out``
    is the action dimension and the final layer is widened to 2*out.
    """
    sizes = list(layer_sizes)
    if len(sizes) < 2:
        raise ConfigError("need at least input and output sizes")
    if head == "gaussian":
        sizes[-1] = 2 * sizes[-1]
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights=weights, biases=biases, head=head)


def adam_init(params: MlpParams, learning_rate: float = 3.0e-4) -> OptimState:
    return OptimState(
        first_moment=[np.zeros_like(a) for a in params.arrays()],
        second_moment=[np.zeros_like(a) for a in params.arrays()],
        learning_rate=learning_rate,
    )
