"""Regular colored multigraphs built from random perfect matchings.

Color ``k`` is a perfect matching stored as an involution ``mates[k]``, so the
``k``-neighbor of ``x`` is ``mates[k][x]``.  Two colors may pair the same two
vertices; such a doubled edge is a cycle of length 2.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from order_forge.prng import TAG_SURGERY, SplitMix64


class SurgeryStuck(RuntimeError):
    """No admissible partner edge exists for some small cycle."""


@dataclass(frozen=True)
class Swap:
    color: int
    removed: tuple[tuple[int, int], tuple[int, int]]
    added: tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class ColoredRegularGraph:
    n: int
    d: int
    mates: tuple[tuple[int, ...], ...]
    c: int = 0
    seed: int = 0
    surgered: bool = False
    changelog: tuple[Swap, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.mates) != self.d:
            raise ValueError(f"expected {self.d} matchings, got {len(self.mates)}")
        for k, mate in enumerate(self.mates):
            if len(mate) != self.n:
                raise ValueError(f"color {k}: matching has wrong length")
            for x, y in enumerate(mate):
                if y == x or not 0 <= y < self.n or mate[y] != x:
                    raise ValueError(f"color {k} is not a perfect matching at vertex {x}")

    @classmethod
    def from_matchings(cls, n: int, matchings: Sequence[Iterable[tuple[int, int]]], **meta) -> "ColoredRegularGraph":
        mates = []
        for k, pairs in enumerate(matchings):
            mate = [-1] * n
            for a, b in pairs:
                if mate[a] != -1 or mate[b] != -1:
                    raise ValueError(f"color {k}: vertex repeated in matching")
                mate[a], mate[b] = b, a
            if -1 in mate:
                raise ValueError(f"color {k}: matching does not cover every vertex")
            mates.append(tuple(mate))
        return cls(n=n, d=len(mates), mates=tuple(mates), **meta)

    def matching(self, k: int) -> list[tuple[int, int]]:
        mate = self.mates[k]
        return [(x, mate[x]) for x in range(self.n) if x < mate[x]]

    def matchings(self) -> list[list[tuple[int, int]]]:
        return [self.matching(k) for k in range(self.d)]

    def neighbor(self, x: int, k: int) -> int:
        return self.mates[k][x]

    def edge_colors(self, u: int, v: int) -> list[int]:
        """Colors of the edges joining ``u`` and ``v`` (empty if none)."""
        return [k for k in range(self.d) if self.mates[k][u] == v]

    def degree(self, x: int) -> int:
        return self.d

    def girth_exceeds(self, c: int) -> bool:
        return not enumerate_small_cycles(self, c)


@dataclass(frozen=True)
class Cycle:
    """A cycle; ``colors[i]`` colors the edge from ``vertices[i]`` to ``vertices[i+1]``."""

    vertices: tuple[int, ...]
    colors: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[tuple[int, int], int]]:
        r = self.length
        out = []
        for i in range(r):
            a, b = self.vertices[i], self.vertices[(i + 1) % r]
            out.append(((min(a, b), max(a, b)), self.colors[i]))
        return out

    @classmethod
    def canonical(cls, vertices: Sequence[int], colors: Sequence[int]) -> "Cycle":
        """Least (vertices, colors) over rotations and reflections, starting at the minimum vertex."""
        r = len(vertices)
        rev_v = list(vertices[::-1])
        rev_c = [colors[(r - 2 - i) % r] for i in range(r)]
        start = min(vertices)
        best = None
        for vs, cs in ((list(vertices), list(colors)), (rev_v, rev_c)):
            i = vs.index(start)
            key = (tuple(vs[i:] + vs[:i]), tuple(cs[i:] + cs[:i]))
            if best is None or key < best:
                best = key
        return cls(*best)


def param_d(n: int, c: int, alpha: float) -> int:
    """Color count ``round(n ** (1 - alpha))`` for ``1 - 1/(3c) < alpha < 1``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 - 1 / (3 * c) < alpha < 1:
        raise ValueError(f"alpha={alpha} outside ({1 - 1 / (3 * c)}, 1)")
    return max(1, math.floor(n ** (1 - alpha) + 0.5))


def generate(n: int, d: int, seed: int) -> ColoredRegularGraph:
    """Color ``k`` pairs ``sigma_k(2l)`` with ``sigma_k(2l+1)``.

    ``sigma_k`` is a Fisher-Yates permutation drawn from the splitmix64
    stream ``(seed, k)``.
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and at least 2, got {n}")
    if d < 1:
        raise ValueError("d must be at least 1")
    mates = []
    for k in range(d):
        sigma = SplitMix64.stream(seed, k).permutation(n)
        mate = [0] * n
        for l in range(0, n, 2):
            a, b = sigma[l], sigma[l + 1]
            mate[a], mate[b] = b, a
        mates.append(tuple(mate))
    return ColoredRegularGraph(n=n, d=d, mates=tuple(mates), seed=seed)


def _walk_cycles(mates, start: int, c: int, only_above: bool, out: set) -> None:
    # Depth-first over simple paths from ``start``; when ``only_above`` every
    # other vertex exceeds ``start`` so each cycle is rooted at its minimum.
    d = len(mates)
    path = [start]
    cols: list[int] = []
    on_path = {start}

    def extend(v: int) -> None:
        depth = len(cols)
        for k in range(d):
            w = mates[k][v]
            if w == start and depth >= 1:
                if depth == 1 and k == cols[0]:
                    continue
                out.add(Cycle.canonical(path, cols + [k]))
            elif depth + 1 < c and w not in on_path and (w > start or not only_above):
                path.append(w)
                cols.append(k)
                on_path.add(w)
                extend(w)
                on_path.discard(w)
                cols.pop()
                path.pop()

    extend(start)


def enumerate_small_cycles(G: ColoredRegularGraph, c: int) -> list[Cycle]:
    """All cycles of length ``<= c``, each once, in canonical order."""
    if c < 2:
        raise ValueError("c must be at least 2")
    found: set[Cycle] = set()
    for s in range(G.n):
        _walk_cycles(G.mates, s, c, True, found)
    return sorted(found, key=lambda cy: (cy.length, cy.vertices, cy.colors))


def cycles_through(mates, x: int, c: int) -> set[Cycle]:
    found: set[Cycle] = set()
    _walk_cycles(mates, x, c, False, found)
    return found


def _ball(mates, a: int, radius: int) -> set[int]:
    seen = {a}
    frontier = [a]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for mate in mates:
                w = mate[v]
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def graph_distance(G: ColoredRegularGraph, a: int, b: int) -> float:
    """Breadth-first distance over edges of every color; ``inf`` if disconnected."""
    if a == b:
        return 0
    dist = {a: 0}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for mate in G.mates:
            w = mate[v]
            if w not in dist:
                dist[w] = dist[v] + 1
                if w == b:
                    return dist[w]
                queue.append(w)
    return math.inf


def _uses_edge(cycles: Iterable[Cycle], u: int, v: int, k: int) -> bool:
    target = ((min(u, v), max(u, v)), k)
    return any(target in cy.edges() for cy in cycles)


def _still_present(mates, cy: Cycle) -> bool:
    r = cy.length
    return all(mates[k][cy.vertices[i]] == cy.vertices[(i + 1) % r] for i, k in enumerate(cy.colors))


def _swap(mates, k: int, a: int, b: int, a2: int, b2: int) -> None:
    mate = mates[k]
    mate[a], mate[a2] = a2, a
    mate[b], mate[b2] = b2, b


def _find_partner(mates, a: int, b: int, k: int, c: int, rng: SplitMix64) -> Optional[Swap]:
    near = _ball(mates, a, c + 1)
    mate = mates[k]
    for a2 in rng.permutation(len(mate)):
        if a2 in near:
            continue
        b2 = mate[a2]
        if b2 in (a, b):
            continue
        if _uses_edge(cycles_through(mates, a2, c), a2, b2, k):
            continue
        _swap(mates, k, a, b, a2, b2)
        created = cycles_through(mates, a, c) | cycles_through(mates, b, c)
        if _uses_edge(created, a, a2, k) or _uses_edge(created, b, b2, k):
            _swap(mates, k, a, a2, b, b2)  # restores {a,b} and {a2,b2}
            continue
        return Swap(color=k, removed=((a, b), (a2, b2)), added=((a, a2), (b, b2)))
    return None


def surgery(G: ColoredRegularGraph, c: int, seed: int) -> tuple[ColoredRegularGraph, list[Swap]]:
    """Remove every cycle of length ``<= c`` by same-color two-edge swaps.

    Cycles are handled in canonical order.  For a cycle still present, its
    first edge ``{a, b}`` of color ``k`` is exchanged with a color-``k`` edge
    ``{a', b'}`` such that ``a'`` is at distance ``>= c + 2`` from ``a`` and
    ``{a', b'}`` lies on no small cycle; the result carries ``{a, a'}`` and
    ``{b, b'}`` instead.  A swap that would close a new small cycle is undone
    and the next candidate, in a seed-derived order, is tried.
    """
    cycles = enumerate_small_cycles(G, c)
    mates = [list(m) for m in G.mates]
    changelog: list[Swap] = []
    for step, cy in enumerate(cycles):
        if not _still_present(mates, cy):
            continue
        a, b, k = cy.vertices[0], cy.vertices[1], cy.colors[0]
        rng = SplitMix64.stream(seed, TAG_SURGERY, step)
        swap = _find_partner(mates, a, b, k, c, rng)
        if swap is None:
            raise SurgeryStuck(f"no admissible partner for color-{k} edge {{{a}, {b}}} with c={c}")
        changelog.append(swap)
    out = replace(
        G,
        mates=tuple(tuple(m) for m in mates),
        c=c,
        surgered=True,
        changelog=tuple(changelog),
    )
    leftover = enumerate_small_cycles(out, c)
    if leftover:
        raise SurgeryStuck(f"{len(leftover)} small cycles survived surgery")
    return out, changelog
