"""Lower-tail binomial bound and a Monte Carlo check of it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def hoeffding_bound(n: int, p: float, x: float) -> float:
    """``exp(-2 (np - x)**2 / n)`` bounding ``P(Bin(n, p) <= x)`` for ``x <= np``.

    Above the mean the inequality says nothing, and 1 is returned.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} is not a probability")
    if x > n * p:
        return 1.0
    return math.exp(-2.0 * (n * p - x) ** 2 / n)


@dataclass(frozen=True)
class TailRow:
    x: float
    estimate: float
    stderr: float
    bound: float

    @property
    def flagged(self) -> bool:
        return self.estimate > self.bound + 3 * self.stderr


@dataclass(frozen=True)
class TailReport:
    n: int
    p: float
    samples: int
    seed: int
    rows: tuple[TailRow, ...]

    @property
    def flags(self) -> list[TailRow]:
        return [r for r in self.rows if r.flagged]

    def lines(self) -> list[str]:
        out = [
            f"n={self.n}",
            f"p={self.p!r}",
            f"samples={self.samples}",
            f"seed={self.seed}",
            f"flags={len(self.flags)}",
            "x\testimate\tstderr\tbound\tflagged",
        ]
        for r in self.rows:
            out.append(f"{r.x:g}\t{r.estimate:.6g}\t{r.stderr:.6g}\t{r.bound:.6g}\t{int(r.flagged)}")
        return out


def binom_tail_check(n: int, p: float, x_grid: Sequence[float], samples: int, seed: int) -> TailReport:
    """Estimate ``P(X <= x)`` by sampling and compare with :func:`hoeffding_bound`."""
    if samples < 10_000:
        raise ValueError("at least 10^4 samples are required")
    hoeffding_bound(n, p, 0)  # validates n and p
    draws = np.random.default_rng(seed).binomial(n, p, size=samples)
    rows = []
    for x in x_grid:
        est = float(np.count_nonzero(draws <= x)) / samples
        rows.append(TailRow(x, est, math.sqrt(est * (1 - est) / samples), hoeffding_bound(n, p, x)))
    return TailReport(n, p, samples, seed, tuple(rows))
