"""Deterministic random numbers for reproducible index traces.

Every stochastic choice in this package (row subsampling, cross-validation
fold seeds, MDS initialisation, synthetic data) is driven by splitmix64,
the 64-bit generator of Steele, Lea & Flood used to seed the xoshiro
family.  It is tiny, fully specified, and has published output vectors,
so index traces can be reproduced exactly by independent implementations.
The update rule, derived procedures, and test vectors are documented in
docs/rng.md.
"""

from __future__ import annotations

import math

from .errors import TooFewRows

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 stream seeded with a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1): top 53 bits of the next output."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def next_gaussian_pair(self) -> tuple[float, float]:
        """Standard-normal pair via the Box-Muller transform."""
        u1 = self.next_double()
        while u1 == 0.0:
            u1 = self.next_double()
        u2 = self.next_double()
        r = math.sqrt(-2.0 * math.log(u1))
        return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


def subsample_indices(m: int, m_sub: int, seed: int) -> list[int]:
    """First ``m_sub`` entries of a partial Fisher-Yates shuffle of range(m).

    Indices are returned in draw order.  The same seed always yields the
    same trace; see docs/rng.md for the exact procedure.
    """
    if m_sub > m:
        raise TooFewRows(f"cannot draw {m_sub} rows from {m}")
    if m_sub < 0:
        raise ValueError("m_sub must be nonnegative")
    rng = SplitMix64(seed)
    pool = list(range(m))
    for i in range(m_sub):
        j = i + rng.next_below(m - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:m_sub]


def fold_seeds(seed: int, folds: int) -> list[int]:
    """Derived seeds for cross-validation folds.

    Fold ``i`` uses the ``(i+1)``-th raw output of splitmix64 seeded with
    the base seed.
    """
    rng = SplitMix64(seed)
    return [rng.next_u64() for _ in range(folds)]


def uniform_matrix(rows: int, cols: int, seed: int, low: float = -1.0, high: float = 1.0):
    """Row-major matrix of uniform values in [low, high)."""
    import numpy as np

    rng = SplitMix64(seed)
    span = high - low
    out = np.empty((rows, cols), dtype=float)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = low + span * rng.next_double()
    return out


def gaussian_matrix(rows: int, cols: int, seed: int):
    """Row-major matrix of standard normals (Box-Muller)."""
    import numpy as np

    rng = SplitMix64(seed)
    n = rows * cols
    flat = np.empty(n, dtype=float)
    i = 0
    while i < n:
        a, b = rng.next_gaussian_pair()
        flat[i] = a
        if i + 1 < n:
            flat[i + 1] = b
        i += 2
    return flat.reshape(rows, cols)
