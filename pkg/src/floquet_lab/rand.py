"""Deterministic RNG streams.

Every stochastic routine takes an integer master seed and derives one
PCG64 generator per unit of work (shot, trial) via SeedSequence spawn
keys, so results are bit-reproducible regardless of worker count or
execution order.  Within a stream, draws happen in a documented order:
measurement outcomes are consumed in ascending check id within each
round, rounds in time order.
"""

from __future__ import annotations

import numpy as np


def spawn_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, key...)."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(seq))
