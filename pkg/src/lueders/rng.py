"""Deterministic random streams.

All randomness in the package flows through Philox, a counter-based generator:
a seed plus an optional stream index fully determines every draw, so repeated
runs are bit-identical and independent streams never overlap.
"""

from __future__ import annotations

import numpy as np

__all__ = ["philox_generator"]


def philox_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for (seed, stream); the same pair always yields the same draws."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))
