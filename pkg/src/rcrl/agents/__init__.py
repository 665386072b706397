"""Off-policy learners operating on curriculum-composed rewards."""

from ..errors import ConfigError
from .checkpoint import load_checkpoint, save_checkpoint
from .common import SMOOTH_L1_DELTA, smooth_l1, smooth_l1_grad
from .sac import SacAgent
from .td3 import Td3Agent

AGENT_NAMES = ("td3", "sac")


def make_agent(name: str, obs_dim: int, act_dim: int, init_rng, **kwargs):
    if name == "td3":
        return Td3Agent(obs_dim, act_dim, init_rng=init_rng, **kwargs)
    if name == "sac":
        return SacAgent(obs_dim, act_dim, init_rng=init_rng, **kwargs)
    raise ConfigError(f"unknown agent {name!r}")


__all__ = [
    "AGENT_NAMES",
    "SMOOTH_L1_DELTA",
    "SacAgent",
    "Td3Agent",
    "load_checkpoint",
    "make_agent",
    "save_checkpoint",
    "smooth_l1",
    "smooth_l1_grad",
]
