"""Deterministic 64-bit random streams for simulations and campaigns.

SplitMix64 generator: the state advances by a fixed odd constant and each
output is a finalizing hash of the state.  Any point of any stream can be
reconstructed directly from (seed, key...) without generating earlier
values, which is what makes results independent of scheduling: trial t of
size n always sees the same draws no matter which worker runs it.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective scramble of a 64-bit word."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MIX1) & MASK64
    x ^= x >> 27
    x = (x * _MIX2) & MASK64
    x ^= x >> 31
    return x


def derive_seed(seed: int, *keys: int) -> int:
    """Fold integer keys into a seed, one mixing round per key.

    derive_seed(seed, n, t) gives the stream seed for trial t at size n;
    distinct key tuples give unrelated streams.
    """
    state = mix64(seed & MASK64)
    for key in keys:
        state = mix64((state ^ ((key + 1) * GOLDEN64)) & MASK64)
    return state


class SplitMix64:
    """Sequential generator over a derived stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN64) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Uniform double in [0, 1) using the top 53 bits of one output."""
        return (self.next_u64() >> 11) * 2.0**-53


def derive_stream(seed: int, *keys: int) -> SplitMix64:
    return SplitMix64(derive_seed(seed, *keys))


def mix64_np(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`mix64` on a uint64 array (wrapping arithmetic)."""
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x
