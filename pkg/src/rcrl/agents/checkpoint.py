"""Versioned binary agent checkpoints (little-endian, float64 payloads)."""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ConfigError
from ..numerics import MlpParams, OptimState
from .sac import SacAgent
from .td3 import Td3Agent

_MAGIC = b"RCCK"
_VERSION = 1
_KINDS = {"td3": 0, "sac": 1}
_HEADS = {"linear": 0, "tanh": 1, "gaussian": 2}
_HEADS_REV = {v: k for k, v in _HEADS.items()}


def _write_array(fh, a: np.ndarray) -> None:
    fh.write(struct.pack("<B", a.ndim))
    fh.write(struct.pack(f"<{a.ndim}I", *a.shape))
    fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def _read_array(fh) -> np.ndarray:
    (ndim,) = struct.unpack("<B", fh.read(1))
    shape = struct.unpack(f"<{ndim}I", fh.read(4 * ndim))
    n = int(np.prod(shape)) if shape else 1
    data = np.frombuffer(fh.read(8 * n), dtype="<f8").astype(np.float64)
    return data.reshape(shape)


def _write_params(fh, p: MlpParams) -> None:
    fh.write(struct.pack("<BI", _HEADS[p.head], len(p.weights)))
    for w, b in zip(p.weights, p.biases):
        _write_array(fh, w)
        _write_array(fh, b)


def _read_params(fh) -> MlpParams:
    head_id, n = struct.unpack("<BI", fh.read(5))
    weights, biases = [], []
    for _ in range(n):
        weights.append(_read_array(fh))
        biases.append(_read_array(fh))
    return MlpParams(weights=weights, biases=biases, head=_HEADS_REV[head_id])


def _write_opt(fh, o: OptimState) -> None:
    fh.write(struct.pack("<4dQI", o.learning_rate, o.beta1, o.beta2, o.epsilon,
                         o.step_count, len(o.first_moment)))
    for m in o.first_moment:
        _write_array(fh, m)
    for v in o.second_moment:
        _write_array(fh, v)


def _read_opt(fh) -> OptimState:
    lr, b1, b2, eps, step, n = struct.unpack("<4dQI", fh.read(44))
    first = [_read_array(fh) for _ in range(n)]
    second = [_read_array(fh) for _ in range(n)]
    return OptimState(first_moment=first, second_moment=second, step_count=step,
                      learning_rate=lr, beta1=b1, beta2=b2, epsilon=eps)


def save_checkpoint(agent, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IB", _VERSION, _KINDS[agent.kind]))
        fh.write(struct.pack("<2I", agent.obs_dim, agent.act_dim))
        fh.write(struct.pack("<I", len(agent.hidden)))
        fh.write(struct.pack(f"<{len(agent.hidden)}I", *agent.hidden))
        fh.write(struct.pack("<2dQ", agent.gamma, agent.tau, agent.update_count))
        if agent.kind == "td3":
            fh.write(struct.pack("<I4dI", agent.policy_delay, agent.target_noise,
                                 agent.noise_clip, agent.explore_sigma_start,
                                 agent.explore_sigma_end,
                                 agent.explore_sigma_anneal_steps))
            nets = (agent.actor, agent.actor_target, agent.critic1, agent.critic2,
                    agent.critic1_target, agent.critic2_target)
        else:
            fh.write(struct.pack("<4dQd", agent.log_alpha, agent._alpha_m,
                                 agent._alpha_v, agent.alpha_init, agent._alpha_t,
                                 agent._lr_alpha))
            nets = (agent.actor, agent.critic1, agent.critic2,
                    agent.critic1_target, agent.critic2_target)
        for net in nets:
            _write_params(fh, net)
        for opt in (agent.actor_opt, agent.critic1_opt, agent.critic2_opt):
            _write_opt(fh, opt)


def load_checkpoint(path):
    scratch = np.random.default_rng(0)
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ConfigError("not an agent checkpoint (bad magic)")
        version, kind_id = struct.unpack("<IB", fh.read(5))
        if version != _VERSION:
            raise ConfigError(f"unsupported checkpoint version {version}")
        obs_dim, act_dim = struct.unpack("<2I", fh.read(8))
        (n_hidden,) = struct.unpack("<I", fh.read(4))
        hidden = struct.unpack(f"<{n_hidden}I", fh.read(4 * n_hidden))
        gamma, tau, update_count = struct.unpack("<2dQ", fh.read(24))
        if kind_id == _KINDS["td3"]:
            delay, t_noise, n_clip, s_start, s_end, s_steps = struct.unpack(
                "<I4dI", fh.read(40))
            agent = Td3Agent(obs_dim, act_dim, hidden=hidden, gamma=gamma, tau=tau,
                             policy_delay=delay, target_noise=t_noise,
                             noise_clip=n_clip, explore_sigma_start=s_start,
                             explore_sigma_end=s_end,
                             explore_sigma_anneal_steps=s_steps, init_rng=scratch)
            agent.actor = _read_params(fh)
            agent.actor_target = _read_params(fh)
            agent.critic1 = _read_params(fh)
            agent.critic2 = _read_params(fh)
            agent.critic1_target = _read_params(fh)
            agent.critic2_target = _read_params(fh)
        else:
            log_alpha, a_m, a_v, alpha_init, a_t, lr_alpha = struct.unpack(
                "<4dQd", fh.read(48))
            agent = SacAgent(obs_dim, act_dim, hidden=hidden, gamma=gamma, tau=tau,
                             lr_alpha=lr_alpha, alpha_init=alpha_init,
                             init_rng=scratch)
            agent.log_alpha = log_alpha
            agent._alpha_m = a_m
            agent._alpha_v = a_v
            agent._alpha_t = a_t
            agent.actor = _read_params(fh)
            agent.critic1 = _read_params(fh)
            agent.critic2 = _read_params(fh)
            agent.critic1_target = _read_params(fh)
            agent.critic2_target = _read_params(fh)
        agent.update_count = update_count
        agent.actor_opt = _read_opt(fh)
        agent.critic1_opt = _read_opt(fh)
        agent.critic2_opt = _read_opt(fh)
    return agent
