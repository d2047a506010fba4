"""Deterministic random streams for experiments.

Every randomized routine in this package draws from a Philox4x64
counter-based generator keyed by a 64-bit master seed plus a stream
index (usually a trial number).  Streams with distinct (seed, index)
pairs are statistically independent by construction, so experiment
trials can be generated in any order, or in parallel, and still
reproduce bit-identically.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Return the Philox generator for (seed, index)."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


__all__ = ["stream"]
