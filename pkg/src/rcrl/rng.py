"""Deterministic random-number streams.

All stochastic components draw from PCG64 generators derived from the run
seed plus a stream tag, so the same seed reproduces the same run on any
platform and so that independent concerns (exploration, replay sampling,
evaluation, ...) never share a stream.
"""

from __future__ import annotations

import zlib

import numpy as np


def _tag_to_int(tag) -> int:
    if isinstance(tag, str):
        return zlib.crc32(tag.encode("utf-8"))
    return int(tag) & 0xFFFFFFFF


def make_rng(seed: int) -> np.random.Generator:
    """Generator for a bare integer seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def stream(seed: int, *tags) -> np.random.Generator:
    """Generator for (seed, tag...) so named streams are independent.

    Tags may be strings (hashed stably via crc32) or integers.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [_tag_to_int(t) for t in tags]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
