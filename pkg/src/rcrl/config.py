"""Run configuration: flat dotted-key text files, overrides, defaults.

Grammar: one ``section.key = value`` per line, ``#`` comments, blank
lines ignored. Unknown keys are rejected. Overrides (``--set key=value``)
apply after file parsing. The fully resolved key set is written next to
every run so that file + seed reproduces the run exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

from .errors import ConfigError

_TRUE = ("true", "1", "yes", "on")
_FALSE = ("false", "0", "no", "off")


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


# key -> (python type, allowed choices or None)
SCHEMA = {
    "agent": (str, ("td3", "sac")),
    "env": (str, ("pointgoal", "swingup")),
    "seed": (int, None),
    "train.total_steps": (int, None),
    "train.warmup_steps": (int, None),
    "train.batch_size": (int, None),
    "train.replay_capacity": (int, None),
    "train.replay_ratio": (float, None),
    "train.gamma": (float, None),
    "train.tau": (float, None),
    "train.hidden_width": (int, None),
    "train.lr_q": (float, None),
    "train.lr_pi": (float, None),
    "train.lr_alpha": (float, None),
    "train.reset_ablation": (
        str, ("none", "reset_buffer_on_switch", "reset_networks_on_switch")),
    "td3.policy_delay": (int, None),
    "td3.target_noise": (float, None),
    "td3.noise_clip": (float, None),
    "td3.sigma_start": (float, None),
    "td3.sigma_end": (float, None),
    "td3.sigma_anneal_steps": (int, None),
    "sac.alpha_init": (float, None),
    "curriculum.enabled": (bool, None),
    "curriculum.w_target": (float, None),
    "curriculum.switch": (str, ("actor_fit", "base_threshold", "convergence", "fixed")),
    "curriculum.fixed_switch_step": (int, None),
    "curriculum.schedule": (str, ("step", "linear", "cosine")),
    "curriculum.anneal_steps": (int, None),
    "curriculum.gamma_fit": (float, None),
    "curriculum.fit_window": (int, None),
    "curriculum.gamma_rbase": (float, None),
    "curriculum.eps_slope": (float, None),
    "curriculum.conv_window": (int, None),
    "curriculum.huber_eps": (float, None),
    "curriculum.regression_window": (int, None),
    "curriculum.improvement_factor": (float, None),
    "metrics.cadence": (int, None),
    "eval.every": (int, None),
    "eval.episodes": (int, None),
    "out.checkpoint_every": (int, None),
    "env.max_steps": (int, None),
    "env.aux_mode": (str, ("", "action_magnitude", "behavioral")),
    "env.scenario": (str, None),
}


def default_flat(env: str, agent: str) -> dict:
    """Desk-scale defaults; a few depend on the environment."""
    pointgoal = env == "pointgoal"
    return {
        "agent": agent,
        "env": env,
        "seed": 0,
        "train.total_steps": 300_000 if pointgoal else 200_000,
        "train.warmup_steps": 10_000,
        "train.batch_size": 128,
        "train.replay_capacity": 1_000_000,
        "train.replay_ratio": 1.0,
        "train.gamma": 0.99,
        "train.tau": 0.995,
        "train.hidden_width": 64,
        "train.lr_q": 3.0e-4,
        "train.lr_pi": 3.0e-4,
        "train.lr_alpha": 3.0e-4,
        "train.reset_ablation": "none",
        "td3.policy_delay": 2,
        "td3.target_noise": 0.2,
        "td3.noise_clip": 0.5,
        "td3.sigma_start": 0.9 if pointgoal else 0.1,
        "td3.sigma_end": 0.1,
        "td3.sigma_anneal_steps": 75_000 if pointgoal else 0,
        "sac.alpha_init": 1.0,
        "curriculum.enabled": True,
        "curriculum.w_target": 0.5,
        "curriculum.switch": "convergence",
        "curriculum.fixed_switch_step": 0,
        "curriculum.schedule": "linear",
        "curriculum.anneal_steps": 40_000,
        "curriculum.gamma_fit": -50.0,
        "curriculum.fit_window": 20,
        "curriculum.gamma_rbase": 0.5,
        "curriculum.eps_slope": 0.001,
        "curriculum.conv_window": 10,
        "curriculum.huber_eps": 1.35,
        "curriculum.regression_window": 75,
        "curriculum.improvement_factor": 1.5,
        "metrics.cadence": 1000,
        "eval.every": 10_000,
        "eval.episodes": 20,
        "out.checkpoint_every": 0,
        "env.max_steps": 0,
        "env.aux_mode": "",
        "env.scenario": "",
    }


def coerce(key: str, raw) -> object:
    if key not in SCHEMA:
        raise ConfigError(f"unknown config key {key!r}")
    typ, choices = SCHEMA[key]
    if isinstance(raw, str):
        raw = raw.strip()
        try:
            if typ is bool:
                value = _parse_bool(raw)
            elif typ is int:
                value = int(raw.replace("_", ""))
            elif typ is float:
                value = float(raw)
            else:
                value = raw
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc
    else:
        if typ in (int, float) and isinstance(raw, (int, float)) and not isinstance(raw, bool):
            value = typ(raw)
        elif not isinstance(raw, typ):
            raise ConfigError(f"config key {key!r}: expected {typ.__name__}")
        else:
            value = raw
    if choices is not None and value not in choices:
        raise ConfigError(f"config key {key!r}: {value!r} not in {choices}")
    return value


def parse_config_text(text: str) -> dict:
    """Parse file text into a {key: typed value} dict (no defaults)."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key in out:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = coerce(key, raw)
    return out


def load_config_file(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def apply_overrides(flat: dict, overrides) -> dict:
    """Apply key=value override strings (after file parsing)."""
    out = dict(flat)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        out[key] = coerce(key, raw)
    return out


def resolve(flat: dict) -> dict:
    """Fill defaults for missing keys and validate everything."""
    if "agent" not in flat or "env" not in flat:
        raise ConfigError("config must set 'agent' and 'env'")
    agent = coerce("agent", flat["agent"])
    env = coerce("env", flat["env"])
    resolved = default_flat(env, agent)
    for key, value in flat.items():
        resolved[key] = coerce(key, value)
    if resolved["curriculum.switch"] == "fixed" and resolved["curriculum.fixed_switch_step"] <= 0:
        raise ConfigError("curriculum.switch=fixed requires curriculum.fixed_switch_step > 0")
    if resolved["train.total_steps"] <= resolved["train.warmup_steps"]:
        raise ConfigError("train.total_steps must exceed train.warmup_steps")
    if not 0.0 <= resolved["curriculum.w_target"] < 1.0:
        raise ConfigError("curriculum.w_target must be in [0, 1)")
    if resolved["eval.every"] % resolved["metrics.cadence"] != 0:
        raise ConfigError("eval.every must be a multiple of metrics.cadence")
    return resolved


def render_config(flat: dict) -> str:
    """Snapshot text; parsing it back reproduces the dict exactly."""
    lines = []
    for key in sorted(flat):
        value = flat[key]
        if isinstance(value, bool):
            raw = "true" if value else "false"
        elif isinstance(value, float):
            raw = repr(value)
        else:
            raw = str(value)
        lines.append(f"{key} = {raw}")
    return "\n".join(lines) + "\n"


@dataclass
class TrainConfig:
    """Typed view of a resolved flat config."""

    agent: str
    env: str
    seed: int
    total_steps: int
    warmup_steps: int
    batch_size: int
    replay_capacity: int
    replay_ratio: float
    gamma: float
    tau: float
    hidden_width: int
    lr_q: float
    lr_pi: float
    lr_alpha: float
    reset_ablation: str
    policy_delay: int
    target_noise: float
    noise_clip: float
    sigma_start: float
    sigma_end: float
    sigma_anneal_steps: int
    alpha_init: float
    curriculum_enabled: bool
    w_target: float
    switch_criterion: str
    fixed_switch_step: int
    anneal_schedule: str
    anneal_steps: int
    gamma_fit: float
    fit_window: int
    gamma_rbase: float
    eps_slope: float
    conv_window: int
    huber_eps: float
    regression_window: int
    improvement_factor: float
    metric_cadence: int
    eval_every: int
    eval_episodes: int
    checkpoint_every: int
    env_max_steps: int
    env_aux_mode: str
    env_scenario: str

    _KEYMAP = {
        "agent": "agent",
        "env": "env",
        "seed": "seed",
        "total_steps": "train.total_steps",
        "warmup_steps": "train.warmup_steps",
        "batch_size": "train.batch_size",
        "replay_capacity": "train.replay_capacity",
        "replay_ratio": "train.replay_ratio",
        "gamma": "train.gamma",
        "tau": "train.tau",
        "hidden_width": "train.hidden_width",
        "lr_q": "train.lr_q",
        "lr_pi": "train.lr_pi",
        "lr_alpha": "train.lr_alpha",
        "reset_ablation": "train.reset_ablation",
        "policy_delay": "td3.policy_delay",
        "target_noise": "td3.target_noise",
        "noise_clip": "td3.noise_clip",
        "sigma_start": "td3.sigma_start",
        "sigma_end": "td3.sigma_end",
        "sigma_anneal_steps": "td3.sigma_anneal_steps",
        "alpha_init": "sac.alpha_init",
        "curriculum_enabled": "curriculum.enabled",
        "w_target": "curriculum.w_target",
        "switch_criterion": "curriculum.switch",
        "fixed_switch_step": "curriculum.fixed_switch_step",
        "anneal_schedule": "curriculum.schedule",
        "anneal_steps": "curriculum.anneal_steps",
        "gamma_fit": "curriculum.gamma_fit",
        "fit_window": "curriculum.fit_window",
        "gamma_rbase": "curriculum.gamma_rbase",
        "eps_slope": "curriculum.eps_slope",
        "conv_window": "curriculum.conv_window",
        "huber_eps": "curriculum.huber_eps",
        "regression_window": "curriculum.regression_window",
        "improvement_factor": "curriculum.improvement_factor",
        "metric_cadence": "metrics.cadence",
        "eval_every": "eval.every",
        "eval_episodes": "eval.episodes",
        "checkpoint_every": "out.checkpoint_every",
        "env_max_steps": "env.max_steps",
        "env_aux_mode": "env.aux_mode",
        "env_scenario": "env.scenario",
    }

    @classmethod
    def from_flat(cls, flat: dict) -> "TrainConfig":
        resolved = resolve(flat)
        kwargs = {attr: resolved[key] for attr, key in cls._KEYMAP.items()}
        return cls(**kwargs)

    def to_flat(self) -> dict:
        return {key: getattr(self, attr) for attr, key in self._KEYMAP.items()}
