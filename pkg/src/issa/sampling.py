"""Seeded ordered sampling of distinct indices.

A draw is an ordered sequence of ``tau`` distinct indices from
``range(n)``, uniform over all n!/(n-tau)! outcomes, produced by a
partial Fisher-Yates shuffle.  Randomness comes from numpy's Philox
counter-based generator, which is deterministic and platform
independent for a fixed seed; independent streams use independent keys.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SamplingSpec:
    """Population size, draw size and the stream seed."""

    n: int
    tau: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("population size must be >= 1")
        if not 1 <= self.tau <= self.n:
            raise ValueError(f"need 1 <= tau <= n, got tau={self.tau}, n={self.n}")


def make_stream(seed, substream=None):
    """Create a deterministic random stream for a 64-bit seed.

    ``substream`` derives an independent stream from the same base seed,
    used e.g. for per-trial Monte Carlo streams.
    """
    key = (seed, 0 if substream is None else substream)
    return np.random.Generator(np.random.Philox(key=key))


def draw_tau(spec, rng):
    """Draw one ordered tau-subset of range(n), advancing ``rng``.

    Partial Fisher-Yates: exact uniformity over ordered subsets in
    O(n + tau) time.
    """
    pool = np.arange(spec.n, dtype=np.int64)
    for i in range(spec.tau):
        j = int(rng.integers(i, spec.n))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[: spec.tau].copy()
