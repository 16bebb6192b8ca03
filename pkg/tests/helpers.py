"""Deterministic sampling shared across the test modules."""

import zlib

from grouptest import Population
from grouptest.rng import SplitMix64, derive_seed

SUITE_SEED = 20260817


def stream(*keys) -> SplitMix64:
    ints = (k if isinstance(k, int) else zlib.crc32(str(k).encode()) for k in keys)
    return SplitMix64(derive_seed(SUITE_SEED, *ints))


def random_population(s: SplitMix64, n: int, lo: float = 0.05, hi: float = 0.95) -> Population:
    return Population.from_p(lo + (hi - lo) * s.uniform() for _ in range(n))
