"""Replay storage with split reward channels.

Each transition keeps three reward channels: a curriculum-exempt fixed
channel (sparse outcome bonuses), the task base channel, and the
auxiliary behavioral channel. No blended reward is ever baked into
storage, so a batch sampled later can be recomposed for any weight w via
:func:`compose_reward`. Storage is a fixed-capacity ring that grows
lazily (in doubling chunks) up to capacity; eviction is FIFO.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericsError

_MAGIC = int.from_bytes(b"RCRB", "little")
_VERSION = 1
_MIN_ROWS = 1024


@dataclass
class Transition:
    """One environment step with separated reward channels."""

    state: np.ndarray
    action: np.ndarray
    r_fixed: float
    r_base: float
    r_aux: float
    next_state: np.ndarray
    terminated: bool
    truncated: bool


@dataclass
class Batch:
    """Column arrays for a sampled minibatch."""

    states: np.ndarray
    actions: np.ndarray
    r_fixed: np.ndarray
    r_base: np.ndarray
    r_aux: np.ndarray
    next_states: np.ndarray
    terminated: np.ndarray  # float 0/1
    truncated: np.ndarray


def compose_reward(t: Transition, w: float) -> float:
    """Blend one transition's channels: r_fixed + (1-w)*r_base + w*r_aux.

    Exact at the endpoints: w=0 gives r_fixed + r_base and w=1 gives
    r_fixed + r_aux bit-for-bit.
    """
    if not 0.0 <= w <= 1.0:
        raise ConfigError(f"curriculum weight must be in [0, 1], got {w}")
    return t.r_fixed + ((1.0 - w) * t.r_base + w * t.r_aux)


def compose_rewards(batch: Batch, w: float) -> np.ndarray:
    """Vectorized :func:`compose_reward` over a batch."""
    if not 0.0 <= w <= 1.0:
        raise ConfigError(f"curriculum weight must be in [0, 1], got {w}")
    return batch.r_fixed + ((1.0 - w) * batch.r_base + w * batch.r_aux)


class ReplayBuffer:
    """Uniform-sampling ring buffer over fixed-width float64 columns."""

    def __init__(self, capacity: int = 1_000_000, obs_dim: int = 1, act_dim: int = 1):
        if capacity < 1:
            raise ConfigError("capacity must be positive")
        self.capacity = int(capacity)
        self.obs_dim = int(obs_dim)
        self.act_dim = int(act_dim)
        self.size = 0
        self.write_cursor = 0
        self._alloc(min(self.capacity, _MIN_ROWS))

    def _alloc(self, rows: int):
        self._rows = rows
        self.states = np.zeros((rows, self.obs_dim))
        self.actions = np.zeros((rows, self.act_dim))
        self.r_fixed = np.zeros(rows)
        self.r_base = np.zeros(rows)
        self.r_aux = np.zeros(rows)
        self.next_states = np.zeros((rows, self.obs_dim))
        self.terminated = np.zeros(rows, dtype=bool)
        self.truncated = np.zeros(rows, dtype=bool)

    def _grow(self):
        new_rows = min(self.capacity, self._rows * 2)
        for name in ("states", "actions", "r_fixed", "r_base", "r_aux",
                     "next_states", "terminated", "truncated"):
            old = getattr(self, name)
            shape = (new_rows,) + old.shape[1:]
            arr = np.zeros(shape, dtype=old.dtype)
            arr[: self._rows] = old
            setattr(self, name, arr)
        self._rows = new_rows

    def __len__(self) -> int:
        return self.size

    def push(self, t: Transition) -> None:
        """Append one transition; overwrites the oldest entry once full."""
        state = np.asarray(t.state, dtype=np.float64)
        action = np.asarray(t.action, dtype=np.float64)
        if state.shape != (self.obs_dim,) or action.shape != (self.act_dim,):
            raise ConfigError(
                f"transition shapes {state.shape}/{action.shape} do not match "
                f"buffer ({self.obs_dim},)/({self.act_dim},)"
            )
        rewards = (t.r_fixed, t.r_base, t.r_aux)
        if not (np.all(np.isfinite(state)) and np.all(np.isfinite(action))
                and np.all(np.isfinite(t.next_state)) and all(np.isfinite(r) for r in rewards)):
            raise NumericsError("non-finite transition field rejected")
        if t.terminated and t.truncated:
            raise ConfigError("at most one of terminated/truncated may be set")
        i = self.write_cursor
        if i >= self._rows:
            self._grow()
        self.states[i] = state
        self.actions[i] = action
        self.r_fixed[i] = t.r_fixed
        self.r_base[i] = t.r_base
        self.r_aux[i] = t.r_aux
        self.next_states[i] = t.next_state
        self.terminated[i] = t.terminated
        self.truncated[i] = t.truncated
        self.write_cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """Uniform draws with replacement; deterministic under a fixed rng."""
        if batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if batch_size > self.size:
            raise ConfigError(f"batch_size {batch_size} exceeds buffer size {self.size}")
        idx = rng.integers(0, self.size, size=batch_size)
        return Batch(
            states=self.states[idx],
            actions=self.actions[idx],
            r_fixed=self.r_fixed[idx],
            r_base=self.r_base[idx],
            r_aux=self.r_aux[idx],
            next_states=self.next_states[idx],
            terminated=self.terminated[idx].astype(np.float64),
            truncated=self.truncated[idx].astype(np.float64),
        )

    def get(self, i: int) -> Transition:
        """Logical indexing: 0 is the oldest stored transition."""
        if not 0 <= i < self.size:
            raise ConfigError(f"index {i} out of range for size {self.size}")
        if self.size == self.capacity:
            j = (self.write_cursor + i) % self.capacity
        else:
            j = i
        return Transition(
            state=self.states[j].copy(),
            action=self.actions[j].copy(),
            r_fixed=float(self.r_fixed[j]),
            r_base=float(self.r_base[j]),
            r_aux=float(self.r_aux[j]),
            next_state=self.next_states[j].copy(),
            terminated=bool(self.terminated[j]),
            truncated=bool(self.truncated[j]),
        )

    def clear(self) -> None:
        self.size = 0
        self.write_cursor = 0

    # -- binary snapshot -------------------------------------------------

    def save(self, path) -> None:
        """Write the checkpoint format: little-endian u32 header (magic,
        version, capacity, size, obs_dim, act_dim) then one packed f64 row
        per transition, oldest first: state, action, r_fixed, r_base,
        r_aux, next_state, terminated, truncated."""
        header = struct.pack(
            "<6I", _MAGIC, _VERSION, self.capacity, self.size, self.obs_dim, self.act_dim
        )
        order = np.arange(self.size)
        if self.size == self.capacity:
            order = (self.write_cursor + order) % self.capacity
        rows = np.hstack(
            [
                self.states[order],
                self.actions[order],
                self.r_fixed[order, None],
                self.r_base[order, None],
                self.r_aux[order, None],
                self.next_states[order],
                self.terminated[order, None].astype(np.float64),
                self.truncated[order, None].astype(np.float64),
            ]
        )
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(rows.astype("<f8").tobytes())

    @classmethod
    def load(cls, path) -> "ReplayBuffer":
        with open(path, "rb") as fh:
            header = fh.read(24)
            if len(header) != 24:
                raise ConfigError("truncated replay snapshot header")
            magic, version, capacity, size, obs_dim, act_dim = struct.unpack("<6I", header)
            if magic != _MAGIC:
                raise ConfigError("not a replay snapshot (bad magic)")
            if version != _VERSION:
                raise ConfigError(f"unsupported snapshot version {version}")
            width = 2 * obs_dim + act_dim + 5
            data = np.frombuffer(fh.read(size * width * 8), dtype="<f8")
        if data.size != size * width:
            raise ConfigError("truncated replay snapshot body")
        rows = data.reshape(size, width).astype(np.float64)
        buf = cls(capacity=capacity, obs_dim=obs_dim, act_dim=act_dim)
        while buf._rows < min(size, capacity):
            buf._grow()
        o, a = obs_dim, act_dim
        buf.states[:size] = rows[:, :o]
        buf.actions[:size] = rows[:, o : o + a]
        buf.r_fixed[:size] = rows[:, o + a]
        buf.r_base[:size] = rows[:, o + a + 1]
        buf.r_aux[:size] = rows[:, o + a + 2]
        buf.next_states[:size] = rows[:, o + a + 3 : 2 * o + a + 3]
        buf.terminated[:size] = rows[:, 2 * o + a + 3] != 0.0
        buf.truncated[:size] = rows[:, 2 * o + a + 4] != 0.0
        buf.size = size
        buf.write_cursor = size % capacity
        return buf
