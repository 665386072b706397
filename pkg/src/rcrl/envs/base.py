"""Environment step contract shared by all environments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OUTCOMES = ("running", "goal", "timeout", "collision")


@dataclass
class EnvStep:
    """Result of one environment step with split reward channels.

    ``r_fixed`` is the curriculum-exempt channel (sparse outcome bonus),
    ``r_base`` the task channel, ``r_aux`` the behavioral channel.
    ``raw_terms`` carries the unscaled named reward terms for inspection.
    """

    next_observation: np.ndarray
    r_fixed: float
    r_base: float
    r_aux: float
    terminated: bool
    truncated: bool
    outcome: str = "running"
    raw_terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.terminated and self.truncated:
            raise ValueError("at most one of terminated/truncated may be set")
