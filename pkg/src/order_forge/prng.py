"""splitmix64 streams and Fisher-Yates permutations.

This generator is part of the graph file contract: a graph written with
``seed=s`` must be regenerated bit for bit from ``s`` alone, so nothing here
may depend on Python's ``random`` module or numpy's bit generators.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# Stream tags keep auxiliary streams disjoint from the per-color streams,
# which use small non-negative indices.
TAG_SURGERY = 0x5355524745525900
TAG_PLANT = 0x504C414E54000000
TAG_ORDER = 0x4F52444552000000
TAG_TRIAL = 0x545249414C000000
TAG_SHATTER = 0x5348415454455200
TAG_GENERIC = 0x47454E4552494300


def mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed of sub-stream ``index`` of ``seed``."""
    return mix64((seed & MASK64) ^ mix64(((index + 1) * GOLDEN_GAMMA) & MASK64))


class SplitMix64:
    """The splitmix64 generator (Steele, Lea and Flood)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    @classmethod
    def stream(cls, seed: int, *path: int) -> "SplitMix64":
        for index in path:
            seed = derive_seed(seed, index)
        return cls(seed)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def bounded(self, m: int) -> int:
        """Integer in ``[0, m)`` by multiply-shift; no rejection loop."""
        if m <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * m) >> 64

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        self.shuffle(perm)
        return perm

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.bounded(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))
