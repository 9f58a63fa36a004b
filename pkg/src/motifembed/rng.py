"""Seedable splitmix64 random number generator.

Every random decision in this package (edge hiding, reservoir sampling,
batch selection, negative draws, weight init, tie shuffles) flows through
this generator so that results are bit-identical across platforms and
library versions. splitmix64 is counter-based: output i is a fixed mix of
``seed + i * GAMMA``, which also makes bulk generation vectorizable.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, label: str) -> int:
    """Derive an independent stream seed from a master seed and a label.

    The label is folded in with FNV-1a so sub-streams (e.g. "hide",
    "negatives", "init") never collide or depend on call order.
    """
    h = 0xCBF29CE484222325
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return _mix((seed & _MASK) ^ h)


class SplitMix64:
    """splitmix64 stream with 64-bit state."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("randrange() bound must be positive")
        limit = _MASK + 1 - ((_MASK + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def floats(self, count: int) -> np.ndarray:
        """Bulk version of :meth:`random`; advances the stream by `count`."""
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self._state) + np.uint64(_GAMMA) * idx
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
        self._state = (self._state + _GAMMA * count) & _MASK
        return (z >> np.uint64(11)) * 2.0**-53

    def sample_indices(self, population: int, k: int) -> list[int]:
        """k distinct indices from range(population), uniform, order random.

        Partial Fisher-Yates; requires k <= population.
        """
        if k > population:
            raise ValueError("sample larger than population")
        pool = list(range(population))
        for i in range(k):
            j = i + self.randrange(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
