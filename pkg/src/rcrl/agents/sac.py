"""Maximum-entropy twin-critic learner with a tanh-squashed Gaussian
policy and an entropy-constrained temperature.

Critic targets are entropy-regularized clipped-double-Q values built
from freshly sampled next actions. The actor minimizes
E[alpha * log pi(a|s) - min_i Q_i(s, a)] through reparameterized
samples; the temperature alpha is optimized in log-space against a fixed
target entropy of -act_dim. The actor loss with the entropy term removed
is reported separately (it feeds the actor-fit switch predicate).
"""

from __future__ import annotations

import math

import numpy as np

from ..numerics import (
    adam_init,
    adam_step,
    init_mlp,
    mlp_backward,
    mlp_forward,
    polyak_update,
    split_gaussian,
    squashed_gaussian_grads,
    squashed_gaussian_mode,
    squashed_gaussian_sample,
)
from ..replay import Batch, compose_rewards
from .common import check_losses, critic_eval, smooth_l1, smooth_l1_grad


class SacAgent:
    kind = "sac"

    def __init__(self, obs_dim: int, act_dim: int, hidden=(64, 64),
                 gamma: float = 0.99, tau: float = 0.995,
                 lr_q: float = 3.0e-4, lr_pi: float = 3.0e-4,
                 lr_alpha: float = 3.0e-4, alpha_init: float = 1.0,
                 init_rng: np.random.Generator = None):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.hidden = tuple(hidden)
        self.gamma = gamma
        self.tau = tau
        self.target_entropy = -float(act_dim)
        self.alpha_init = alpha_init
        self.update_count = 0
        self._lr_q = lr_q
        self._lr_pi = lr_pi
        self._lr_alpha = lr_alpha
        self.init_networks(init_rng)

    def init_networks(self, rng: np.random.Generator) -> None:
        sizes_pi = [self.obs_dim, *self.hidden, self.act_dim]
        sizes_q = [self.obs_dim + self.act_dim, *self.hidden, 1]
        self.actor = init_mlp(sizes_pi, "gaussian", rng)
        self.critic1 = init_mlp(sizes_q, "linear", rng)
        self.critic2 = init_mlp(sizes_q, "linear", rng)
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.actor_opt = adam_init(self.actor, self._lr_pi)
        self.critic1_opt = adam_init(self.critic1, self._lr_q)
        self.critic2_opt = adam_init(self.critic2, self._lr_q)
        self.log_alpha = math.log(self.alpha_init)
        self._alpha_m = 0.0
        self._alpha_v = 0.0
        self._alpha_t = 0

    @property
    def alpha(self) -> float:
        return math.exp(self.log_alpha)

    # -- acting ----------------------------------------------------------

    def act_deterministic(self, obs: np.ndarray) -> np.ndarray:
        mean, _ = split_gaussian(mlp_forward(self.actor, obs))
        return squashed_gaussian_mode(mean)

    def act(self, obs: np.ndarray, rng: np.random.Generator, step: int = 0) -> np.ndarray:
        mean, log_std = split_gaussian(mlp_forward(self.actor, obs))
        action, _, _ = squashed_gaussian_sample(mean, log_std, rng)
        return action

    # -- learning ----------------------------------------------------------

    def _alpha_adam(self, grad: float) -> None:
        b1, b2, eps = 0.9, 0.999, 1e-8
        self._alpha_t += 1
        self._alpha_m = b1 * self._alpha_m + (1.0 - b1) * grad
        self._alpha_v = b2 * self._alpha_v + (1.0 - b2) * grad * grad
        mhat = self._alpha_m / (1.0 - b1 ** self._alpha_t)
        vhat = self._alpha_v / (1.0 - b2 ** self._alpha_t)
        self.log_alpha -= self._lr_alpha * mhat / (math.sqrt(vhat) + eps)

    def update(self, batch: Batch, w: float, rng: np.random.Generator) -> dict:
        r = compose_rewards(batch, w)
        bsz = batch.states.shape[0]
        alpha = self.alpha

        # Entropy-regularized clipped-double-Q target; next action freshly
        # sampled from the current policy, alpha held constant.
        mean_n, log_std_n = split_gaussian(mlp_forward(self.actor, batch.next_states))
        a_next, logp_next, _ = squashed_gaussian_sample(mean_n, log_std_n, rng)
        q1_t = critic_eval(self.critic1_target, batch.next_states, a_next)
        q2_t = critic_eval(self.critic2_target, batch.next_states, a_next)
        soft_v = np.minimum(q1_t, q2_t) - alpha * logp_next
        y = r + self.gamma * (1.0 - batch.terminated) * soft_v

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

        # Actor: reparameterized sample, gradient through min(Q1, Q2) and
        # through the log-probability.
        out, cache_a = mlp_forward(self.actor, batch.states, want_cache=True)
        mean, log_std = split_gaussian(out)
        a_new, logp, xi = squashed_gaussian_sample(mean, log_std, rng)
        q1, x1, cache1 = critic_eval(self.critic1, batch.states, a_new, want_cache=True)
        q2, x2, cache2 = critic_eval(self.critic2, batch.states, a_new, want_cache=True)
        q_min = np.minimum(q1, q2)
        actor_loss = float(np.mean(alpha * logp - q_min))
        actor_loss_ne = float(np.mean(-q_min))

        pick1 = (q1 <= q2).astype(np.float64)
        up1 = (-pick1 / bsz)[:, None]
        up2 = (-(1.0 - pick1) / bsz)[:, None]
        g_a = (
            mlp_backward(self.critic1, x1, up1, cache1).input
            + mlp_backward(self.critic2, x2, up2, cache2).input
        )[:, self.obs_dim:]
        g_logp = np.full(bsz, alpha / bsz)
        g_mean, g_log_std = squashed_gaussian_grads(mean, log_std, xi, g_a, g_logp)
        upstream_actor = np.hstack([g_mean, g_log_std])
        grads = mlp_backward(self.actor, batch.states, upstream_actor, cache_a)
        adam_step(self.actor, grads, self.actor_opt)

        # Temperature: gradient of E[-alpha * (log pi + target_entropy)]
        # w.r.t. log alpha.
        gap = float(np.mean(logp + self.target_entropy))
        alpha_loss = -alpha * gap
        self._alpha_adam(-alpha * gap)

        polyak_update(self.critic1_target, self.critic1, self.tau)
        polyak_update(self.critic2_target, self.critic2, self.tau)
        self.update_count += 1

        losses.update(
            actor_loss=actor_loss,
            actor_loss_no_entropy=actor_loss_ne,
            alpha_loss=float(alpha_loss),
            alpha=self.alpha,
        )
        check_losses({k: v for k, v in losses.items() if k != "alpha"})
        return losses
