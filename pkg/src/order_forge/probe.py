"""Linear orders on graph vertices and the bi-orders they induce.

For a color ``k`` and an order ``<`` on the vertices, ``x <_k y`` holds when
the ``k``-neighbor of ``x`` is ``<``-below the ``k``-neighbor of ``y``.  A run
of ``N`` consecutive ranks together with ``<`` and ``<_k`` is a bi-order; this
module searches for, plants and samples such bi-orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, cmp_to_key
from typing import Optional, Sequence

import numpy as np

from order_forge.biorder import BiOrder, Decoded, compare_tables, decode, encode
from order_forge.graph import ColoredRegularGraph, Swap, generate, surgery
from order_forge.prng import TAG_ORDER, TAG_PLANT, TAG_TRIAL, SplitMix64


class PlantImpossible(RuntimeError):
    """No color admits the vertex set a planted witness needs."""


@dataclass(frozen=True)
class VertexOrdering:
    """``rank_of[v]`` is the rank of vertex ``v``."""

    rank_of: tuple[int, ...]

    def __post_init__(self):
        rank_of = tuple(int(r) for r in self.rank_of)
        if sorted(rank_of) != list(range(len(rank_of))):
            raise ValueError("rank_of must be a permutation")
        object.__setattr__(self, "rank_of", rank_of)

    @property
    def n(self) -> int:
        return len(self.rank_of)

    @cached_property
    def vertex_at(self) -> tuple[int, ...]:
        at = [0] * self.n
        for v, r in enumerate(self.rank_of):
            at[r] = v
        return tuple(at)

    @classmethod
    def from_sequence(cls, vertices: Sequence[int]) -> "VertexOrdering":
        """Order listing ``vertices`` in increasing rank."""
        if sorted(vertices) != list(range(len(vertices))):
            raise ValueError("vertex sequence must list each vertex once")
        rank_of = [0] * len(vertices)
        for r, v in enumerate(vertices):
            rank_of[v] = r
        return cls(tuple(rank_of))

    @classmethod
    def identity(cls, n: int) -> "VertexOrdering":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, seed: int) -> "VertexOrdering":
        return cls.from_sequence(SplitMix64.stream(seed, TAG_ORDER).permutation(n))


@dataclass(frozen=True)
class ProbeWitness:
    a: int
    k: int
    biorder: BiOrder


def neighbor(G: ColoredRegularGraph, x: int, k: int) -> int:
    return G.mates[k][x]


def less_k(G: ColoredRegularGraph, order: VertexOrdering, k: int, x: int, y: int) -> bool:
    mate = G.mates[k]
    return order.rank_of[mate[x]] < order.rank_of[mate[y]]


def eval_Phi(G: ColoredRegularGraph, order: VertexOrdering, x: int, y: int, u: int, v: int) -> bool:
    """``{u, v}`` is an edge and ``x <_k y`` for a color ``k`` it carries.

    On a multigraph an edge may carry several colors; the formula is then
    read existentially over them.
    """
    return any(less_k(G, order, k, x, y) for k in G.edge_colors(u, v))


def induced_biorder(G: ColoredRegularGraph, order: VertexOrdering, a: int, N: int, k: int) -> BiOrder:
    """Bi-order on ranks ``a..a+N-1`` with second order ``<_k``."""
    if N < 1 or a < 0 or a + N > G.n:
        raise ValueError(f"interval [{a}, {a + N - 1}] outside 0..{G.n - 1}")
    at = order.vertex_at
    mate = G.mates[k]
    keys = [order.rank_of[mate[at[r]]] for r in range(a, a + N)]
    return BiOrder.from_second_keys(keys)


def induced_biorder_phi(G: ColoredRegularGraph, order: VertexOrdering, a: int, N: int, u: int, v: int) -> BiOrder:
    """Bi-order on ranks ``a..a+N-1`` with second order ``Phi(., ., u, v)``."""
    at = order.vertex_at
    window = [at[r] for r in range(a, a + N)]

    def cmp(i: int, j: int) -> int:
        if i == j:
            return 0
        return -1 if eval_Phi(G, order, window[i], window[j], u, v) else 1

    return BiOrder(tuple(sorted(range(N), key=cmp_to_key(cmp))))


def scan(G: ColoredRegularGraph, order: VertexOrdering, target: BiOrder) -> list[ProbeWitness]:
    """Every ``(a, k)`` whose window ``[a, a+N-1]`` induces ``target``."""
    N = target.size
    if N > G.n:
        return []
    at = order.vertex_at
    rank_of = order.rank_of
    want = target.order2
    witnesses = []
    for k, mate in enumerate(G.mates):
        keys = [rank_of[mate[v]] for v in at]
        for a in range(G.n - N + 1):
            window = keys[a : a + N]
            if tuple(sorted(range(N), key=window.__getitem__)) == want:
                witnesses.append(ProbeWitness(a, k, target))
    return witnesses


def plant(G: ColoredRegularGraph, target: BiOrder, seed: int) -> VertexOrdering:
    """An order in which some window of some color induces ``target``.

    Picks ``N`` vertices whose ``k``-neighbors avoid the picked set, gives
    them consecutive ranks ``a..a+N-1`` and gives their neighbors the ranks
    ``a+N..a+2N-1`` in the pattern of ``target``'s second order.
    """
    N = target.size
    n = G.n
    rng = SplitMix64.stream(seed, TAG_PLANT)
    if 2 * N > n:
        raise PlantImpossible(f"target of size {N} needs at least {2 * N} vertices, graph has {n}")
    for k in rng.permutation(G.d):
        mate = G.mates[k]
        chosen: list[int] = []
        blocked: set[int] = set()
        for x in rng.permutation(n):
            if len(chosen) == N:
                break
            if x in blocked or mate[x] in blocked:
                continue
            chosen.append(x)
            blocked.update((x, mate[x]))
        if len(chosen) < N:
            continue
        a = rng.bounded(n - 2 * N + 1)
        rank_of = [-1] * n
        for i, x in enumerate(chosen):
            rank_of[x] = a + i
        for j, i in enumerate(target.order2):
            rank_of[mate[chosen[i]]] = a + N + j
        free_ranks = [r for r in range(n) if not a <= r < a + 2 * N]
        rest = [v for v in range(n) if rank_of[v] == -1]
        rng.shuffle(rest)
        for v, r in zip(rest, free_ranks):
            rank_of[v] = r
        return VertexOrdering(tuple(rank_of))
    raise PlantImpossible(f"no color admits {N} vertices with neighbors outside the set")


def _type_code(order2: Sequence[int], N: int) -> int:
    return sum(int(x) * N**j for j, x in enumerate(order2))


def _type_from_code(code: int, N: int) -> tuple[int, ...]:
    out = []
    for _ in range(N):
        code, x = divmod(code, N)
        out.append(x)
    return tuple(out)


@dataclass
class MonteCarloReport:
    trials: int
    N: int
    witness_counts: list[int]
    conditioned_total: int
    conditioned_hits: int
    type_counts: dict[tuple[int, ...], int] = field(default_factory=dict)

    @property
    def witness_mean(self) -> float:
        return float(np.mean(self.witness_counts)) if self.witness_counts else 0.0

    @property
    def witness_stderr(self) -> float:
        if len(self.witness_counts) < 2:
            return 0.0
        return float(np.std(self.witness_counts, ddof=1) / math.sqrt(len(self.witness_counts)))

    @property
    def witness_min(self) -> int:
        return min(self.witness_counts) if self.witness_counts else 0

    @property
    def hit_rate(self) -> float:
        return self.conditioned_hits / self.conditioned_total if self.conditioned_total else 0.0

    @property
    def hit_stderr(self) -> float:
        m = self.conditioned_total
        return math.sqrt(self.hit_rate * (1 - self.hit_rate) / m) if m else 0.0

    def type_frequency(self, order2: tuple[int, ...]) -> float:
        return self.type_counts.get(order2, 0) / self.conditioned_total if self.conditioned_total else 0.0

    def lines(self) -> list[str]:
        out = [
            f"trials={self.trials}",
            f"N={self.N}",
            f"witness_mean={self.witness_mean:.6f}",
            f"witness_stderr={self.witness_stderr:.6f}",
            f"witness_min={self.witness_min}",
            f"conditioned_total={self.conditioned_total}",
            f"conditioned_hits={self.conditioned_hits}",
            f"hit_rate={self.hit_rate:.6f}",
            f"hit_stderr={self.hit_stderr:.6f}",
            f"uniform_bound={1 / (2 * math.factorial(self.N)):.6f}",
            "type\tcount",
        ]
        for t in sorted(self.type_counts):
            out.append(",".join(map(str, t)) + f"\t{self.type_counts[t]}")
        return out


def montecarlo(G: ColoredRegularGraph, target: BiOrder, trials: int, seed: int) -> MonteCarloReport:
    """Sample uniform orders and tabulate the bi-orders of all windows.

    Per trial, ``witness_counts`` counts windows of every color inducing
    ``target``.  The type histogram and hit rate use only windows whose
    ``k``-neighbors fall outside the window.
    """
    N = target.size
    n = G.n
    want = _type_code(target.order2, N)
    mates = np.asarray(G.mates, dtype=np.int64)
    counts: dict[int, int] = {}
    witness_counts = []
    total = hits = 0
    starts = np.arange(n - N + 1)[:, None]
    for t in range(trials):
        vertex_at = np.asarray(SplitMix64.stream(seed, TAG_TRIAL, t).permutation(n), dtype=np.int64)
        rank_of = np.empty(n, dtype=np.int64)
        rank_of[vertex_at] = np.arange(n)
        found = 0
        for k in range(G.d):
            keys = rank_of[mates[k][vertex_at]]
            windows = np.lib.stride_tricks.sliding_window_view(keys, N)
            codes = np.argsort(windows, axis=1, kind="stable") @ (N ** np.arange(N))
            found += int(np.count_nonzero(codes == want))
            disjoint = np.all((windows < starts) | (windows >= starts + N), axis=1)
            kept = codes[disjoint]
            total += kept.size
            hits += int(np.count_nonzero(kept == want))
            for code, cnt in zip(*np.unique(kept, return_counts=True)):
                counts[int(code)] = counts.get(int(code), 0) + int(cnt)
        witness_counts.append(found)
    return MonteCarloReport(
        trials=trials,
        N=N,
        witness_counts=witness_counts,
        conditioned_total=total,
        conditioned_hits=hits,
        type_counts={_type_from_code(code, N): cnt for code, cnt in counts.items()},
    )


@dataclass
class EndToEndResult:
    verdict: bool
    k: int
    graph: ColoredRegularGraph
    swaps: list[Swap]
    order: VertexOrdering
    witness: Optional[ProbeWitness]
    edge: Optional[tuple[int, int]]
    decoded: Optional[Decoded]
    problems: list[str]

    def lines(self) -> list[str]:
        out = [
            f"verdict={'verified' if self.verdict else 'failed'}",
            f"k={self.k}",
            f"n={self.graph.n}",
            f"d={self.graph.d}",
            f"c={self.graph.c}",
            f"seed={self.graph.seed}",
            f"swaps={len(self.swaps)}",
        ]
        if self.witness is not None:
            out += [f"witness_a={self.witness.a}", f"witness_color={self.witness.k}"]
        if self.edge is not None:
            out.append(f"edge={self.edge[0]},{self.edge[1]}")
        if self.decoded is not None:
            out.append(f"domain={self.decoded.size}")
            out.append("op\tr\ts\tt")
            for name, rel in (("add", self.decoded.add), ("mul", self.decoded.mul)):
                out += [f"{name}\t{r}\t{s}\t{t}" for r, s, t in sorted(rel)]
        out += [f"problem={p}" for p in self.problems]
        return out


def interpret_arithmetic(
    G: ColoredRegularGraph,
    order: VertexOrdering,
    k: int,
    param_ranks: Optional[Sequence[int]] = None,
) -> tuple[Optional[ProbeWitness], Optional[tuple[int, int]], Optional[Decoded], list[str]]:
    """Find the arithmetic of ``{0..k-1}`` in ``(G, order)`` through ``Phi``."""
    carrier = encode(k)
    witnesses = scan(G, order, carrier.biorder)
    if not witnesses:
        return None, None, None, ["no window induces the target bi-order"]
    w = witnesses[0]
    u, v = G.matching(w.k)[0]
    induced = induced_biorder_phi(G, order, w.a, carrier.n, u, v)
    ranks = carrier.param_ranks if param_ranks is None else tuple(param_ranks)
    try:
        decoded = decode(induced, ranks)
    except ValueError as exc:
        return w, (u, v), None, [str(exc)]
    return w, (u, v), decoded, compare_tables(decoded, k)


def end_to_end(
    k: int,
    n: int,
    d: int,
    c: int,
    seed: int,
    param_ranks: Optional[Sequence[int]] = None,
) -> EndToEndResult:
    """Generate, remove small cycles, plant ``P_k``, then recover ``+`` and ``x``."""
    if n < 40 * k * k:
        raise ValueError(f"n={n} below 4 * 10 * k**2 = {40 * k * k}")
    G, swaps = surgery(generate(n, d, seed), c, seed)
    order = plant(G, encode(k).biorder, seed)
    witness, edge, decoded, problems = interpret_arithmetic(G, order, k, param_ranks)
    return EndToEndResult(not problems, k, G, swaps, order, witness, edge, decoded, problems)
