"""Twin-critic deterministic-policy learner with delayed actor updates.

Critics regress on Smooth-L1 toward clipped-double-Q targets built with
clipped noise on the target action; the actor maximizes the first
critic's value and is updated every ``policy_delay`` critic updates,
after which all targets are Polyak-averaged.
"""

from __future__ import annotations

import numpy as np

from ..numerics import (
    MlpGrads,
    adam_init,
    adam_step,
    init_mlp,
    mlp_backward,
    mlp_forward,
    polyak_update,
)
from ..replay import Batch, compose_rewards
from .common import check_losses, critic_eval, smooth_l1, smooth_l1_grad


class Td3Agent:
    kind = "td3"

    def __init__(self, obs_dim: int, act_dim: int, hidden=(64, 64),
                 gamma: float = 0.99, tau: float = 0.995,
                 lr_q: float = 3.0e-4, lr_pi: float = 3.0e-4,
                 policy_delay: int = 2, target_noise: float = 0.2,
                 noise_clip: float = 0.5,
                 explore_sigma_start: float = 0.1,
                 explore_sigma_end: float = 0.1,
                 explore_sigma_anneal_steps: int = 0,
                 init_rng: np.random.Generator = None):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.hidden = tuple(hidden)
        self.gamma = gamma
        self.tau = tau
        self.policy_delay = policy_delay
        self.target_noise = target_noise
        self.noise_clip = noise_clip
        self.explore_sigma_start = explore_sigma_start
        self.explore_sigma_end = explore_sigma_end
        self.explore_sigma_anneal_steps = explore_sigma_anneal_steps
        self.update_count = 0
        self._lr_q = lr_q
        self._lr_pi = lr_pi
        self.init_networks(init_rng)

    def init_networks(self, rng: np.random.Generator) -> None:
        """(Re)build all networks and optimizer states from a generator."""
        sizes_pi = [self.obs_dim, *self.hidden, self.act_dim]
        sizes_q = [self.obs_dim + self.act_dim, *self.hidden, 1]
        self.actor = init_mlp(sizes_pi, "tanh", rng)
        self.critic1 = init_mlp(sizes_q, "linear", rng)
        self.critic2 = init_mlp(sizes_q, "linear", rng)
        self.actor_target = self.actor.copy()
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.actor_opt = adam_init(self.actor, self._lr_pi)
        self.critic1_opt = adam_init(self.critic1, self._lr_q)
        self.critic2_opt = adam_init(self.critic2, self._lr_q)

    # -- acting ----------------------------------------------------------

    def exploration_sigma(self, step: int) -> float:
        """Linearly annealed collection-noise scale."""
        n = self.explore_sigma_anneal_steps
        if n <= 0 or step >= n:
            return self.explore_sigma_end
        frac = step / n
        return self.explore_sigma_start + frac * (
            self.explore_sigma_end - self.explore_sigma_start
        )

    def act_deterministic(self, obs: np.ndarray) -> np.ndarray:
        return mlp_forward(self.actor, obs)

    def act(self, obs: np.ndarray, rng: np.random.Generator, step: int = 0) -> np.ndarray:
        a = mlp_forward(self.actor, obs)
        sigma = self.exploration_sigma(step)
        if sigma > 0.0:
            a = a + sigma * rng.standard_normal(self.act_dim)
        return np.clip(a, -1.0, 1.0)

    # -- learning ----------------------------------------------------------

    def update(self, batch: Batch, w: float, rng: np.random.Generator) -> dict:
        r = compose_rewards(batch, w)
        bsz = batch.states.shape[0]

        noise = np.clip(
            self.target_noise * rng.standard_normal((bsz, self.act_dim)),
            -self.noise_clip, self.noise_clip,
        )
        a_next = np.clip(mlp_forward(self.actor_target, batch.next_states) + noise,
                         -1.0, 1.0)
        q1_t = critic_eval(self.critic1_target, batch.next_states, a_next)
        q2_t = critic_eval(self.critic2_target, batch.next_states, a_next)
        y = r + self.gamma * (1.0 - batch.terminated) * np.minimum(q1_t, q2_t)

        losses = {}
        for name, critic, opt in (
            ("critic1", self.critic1, self.critic1_opt),
            ("critic2", self.critic2, self.critic2_opt),
        ):
            pred, x, cache = critic_eval(critic, batch.states, batch.actions,
                                         want_cache=True)
            err = pred - y
            losses[name + "_loss"] = float(np.mean(smooth_l1(err)))
            upstream = (smooth_l1_grad(err) / bsz)[:, None]
            grads = mlp_backward(critic, x, upstream, cache)
            adam_step(critic, grads, opt)

        self.update_count += 1
        losses["actor_loss"] = None
        losses["actor_loss_no_entropy"] = None
        if self.update_count % self.policy_delay == 0:
            a_pi, cache_a = mlp_forward(self.actor, batch.states, want_cache=True)
            q1, x, cache_q = critic_eval(self.critic1, batch.states, a_pi.copy(),
                                         want_cache=True)
            actor_loss = float(-np.mean(q1))
            gq = np.full((bsz, 1), -1.0 / bsz)
            g_in = mlp_backward(self.critic1, x, gq, cache_q).input
            g_action = g_in[:, self.obs_dim:]
            grads = mlp_backward(self.actor, batch.states, g_action, cache_a)
            adam_step(self.actor, grads, self.actor_opt)
            polyak_update(self.actor_target, self.actor, self.tau)
            polyak_update(self.critic1_target, self.critic1, self.tau)
            polyak_update(self.critic2_target, self.critic2, self.tau)
            losses["actor_loss"] = actor_loss
            losses["actor_loss_no_entropy"] = actor_loss
        check_losses(losses)
        return losses
