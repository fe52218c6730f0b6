"""Counter-based deterministic random numbers (splitmix64).

Every draw is a pure function of (seed, stream, counter), so the numba and
numpy training backends can consume identical decision streams without
sharing mutable RNG state, and parallel workers get disjoint streams by
construction.  The 53-bit uniforms feed subsampling decisions, negative
sampling, and vector initialization.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1E4357B7
_MIX2 = 0x94D049BB133111EB
_STREAM_SALT = 0xD6E8FEB86659FD93

# 2**-53: top 53 bits of a mixed counter become a uniform in [0, 1)
U53 = 1.0 / 9007199254740992.0

STREAM_INIT = 1
STREAM_TRAIN = 2
STREAM_TEST = 99


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit integer (pure-Python reference)."""
    x &= MASK64
    x = (x ^ (x >> 30)) * _MIX1 & MASK64
    x = (x ^ (x >> 27)) * _MIX2 & MASK64
    return x ^ (x >> 31)


def stream_state(seed: int, stream: int) -> int:
    """Base state for an independent substream of a seed."""
    return mix64((seed & MASK64) ^ (stream * _STREAM_SALT & MASK64))


def uniform(state: int, counter: int) -> float:
    """The counter-th uniform in [0, 1) of the stream rooted at state."""
    z = mix64((state + (counter + 1) * GOLDEN) & MASK64)
    return (z >> 11) * U53


def uniforms(state: int, start: int, n: int) -> np.ndarray:
    """Vectorized batch of `uniform(state, start + i)` for i in range(n)."""
    counters = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    x = (np.uint64(state) + counters * np.uint64(GOLDEN))
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return (x >> np.uint64(11)).astype(np.float64) * U53
