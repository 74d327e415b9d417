"""Bi-orders and the two-order encoding of finite arithmetic.

A bi-order is a finite set with two linear orders.  Elements are named by
their rank in the first order, so the whole structure is determined by the
permutation listing elements in increasing second order.  That permutation is
the canonical form: two bi-orders are isomorphic iff their ``order2`` agree.

:func:`encode` lays ``({0..k-1}, +, x)`` out inside a bi-order of size
``10 k**2``; :func:`decode` reads the arithmetic back through one fixed pair
of first-order formulas with three parameters, never looking at ``k``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Optional, Sequence

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class BiOrder:
    """A finite set ``{0..N-1}`` with ``<1`` the natural order.

    ``order2[j]`` is the element (``<1``-rank) whose ``<2``-rank is ``j``.
    """

    order2: tuple[int, ...]

    def __post_init__(self):
        order2 = tuple(int(v) for v in self.order2)
        if sorted(order2) != list(range(len(order2))):
            raise ValueError("order2 must be a permutation of 0..N-1")
        object.__setattr__(self, "order2", order2)

    @property
    def size(self) -> int:
        return len(self.order2)

    def rank2(self) -> list[int]:
        """Inverse permutation: ``rank2()[x]`` is the ``<2``-rank of ``x``."""
        inv = [0] * self.size
        for j, x in enumerate(self.order2):
            inv[x] = j
        return inv

    def less1(self, x: int, y: int) -> bool:
        return x < y

    def less2(self, x: int, y: int) -> bool:
        inv = self.rank2()
        return inv[x] < inv[y]

    @classmethod
    def from_second_keys(cls, keys: Sequence) -> "BiOrder":
        """Bi-order on ``range(len(keys))`` with ``x <2 y`` iff ``keys[x] < keys[y]``."""
        return cls(tuple(sorted(range(len(keys)), key=keys.__getitem__)))

    @classmethod
    def identity(cls, size: int) -> "BiOrder":
        return cls(tuple(range(size)))


@dataclass(frozen=True)
class Block:
    kind: str  # "add" or "mul"
    triple: Triple
    points: tuple[int, int, int, int]  # c_r, c_s, c_t, delimiter as <1-ranks


@dataclass(frozen=True)
class ArithCarrier:
    k: int
    biorder: BiOrder
    reprs: tuple[int, ...]
    param_ranks: tuple[int, int, int]
    blocks: tuple[Block, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.biorder.size

    def check(self) -> None:
        """Assert every structural invariant of the encoding."""
        k, n = self.k, self.n
        assert n == 10 * k * k
        assert self.reprs == tuple(7 * k * (i + 1) for i in range(k))
        assert self.biorder.order2[:k] == self.reprs
        a1 = self.reprs[-1]
        r1, r2, r3 = self.param_ranks
        assert r1 == k - 1
        seen: set[int] = set()
        rank2 = self.biorder.rank2()
        adds = [b for b in self.blocks if b.kind == "add"]
        muls = [b for b in self.blocks if b.kind == "mul"]
        for blk in self.blocks:
            *codes, delim = blk.points
            assert delim > a1
            for c, value in zip(codes, blk.triple):
                assert code_of(c, self) == value
            ranks = [rank2[x] for x in blk.points]
            assert ranks == list(range(ranks[0], ranks[0] + 4))
            lo, hi = (r1, r2) if blk.kind == "add" else (r2, r3)
            assert lo < ranks[0] and ranks[-1] <= hi
            assert seen.isdisjoint(blk.points)
            seen.update(blk.points)
        assert r2 - r1 == 4 * len(adds) and r3 - r2 == 4 * len(muls)
        assert {b.triple for b in adds} == arithmetic_tables(k)[0]
        assert {b.triple for b in muls} == arithmetic_tables(k)[1]


@dataclass(frozen=True)
class Decoded:
    size: int
    add: frozenset
    mul: frozenset

    def add_table(self) -> dict[tuple[int, int], int]:
        return {(r, s): t for r, s, t in sorted(self.add)}

    def mul_table(self) -> dict[tuple[int, int], int]:
        return {(r, s): t for r, s, t in sorted(self.mul)}


def arithmetic_tables(k: int) -> tuple[frozenset, frozenset]:
    """Graphs of truncated + and x on ``{0..k-1}``, by enumeration."""
    add = frozenset((r, s, r + s) for r in range(k) for s in range(k) if r + s < k)
    mul = frozenset((r, s, r * s) for r in range(k) for s in range(k) if r * s < k)
    return add, mul


def encode(k: int) -> ArithCarrier:
    """Build the bi-order of size ``10 k**2`` carrying ``({0..k-1}, +, x)``.

    The second order starts with the representatives ``b_i = 7k(i+1)``, then
    one 4-point interval ``c_r <2 c_s <2 c_t <2 d`` per addition triple, then
    one per multiplication triple, then the unused points in ``<1`` order.
    ``c_r`` is a fresh point strictly between ``b_{r-1}`` and ``b_r`` and ``d``
    is a fresh point above ``b_{k-1}``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = 10 * k * k
    reprs = tuple(7 * k * (i + 1) for i in range(k))
    a1 = reprs[-1]

    next_code = [(-1 if r == 0 else reprs[r - 1]) + 1 for r in range(k)]
    next_delim = a1 + 1

    def take_code(r: int) -> int:
        c = next_code[r]
        assert c < reprs[r], f"code points for value {r} exhausted at k={k}"
        next_code[r] += 1
        return c

    def take_delim() -> int:
        nonlocal next_delim
        d = next_delim
        assert d < n, f"delimiters exhausted at k={k}"
        next_delim += 1
        return d

    order2 = list(reprs)
    blocks = []
    param_ranks = [k - 1]
    add, mul = arithmetic_tables(k)
    for kind, triples in (("add", add), ("mul", mul)):
        for triple in sorted(triples):
            points = (*(take_code(v) for v in triple), take_delim())
            blocks.append(Block(kind, triple, points))
            order2.extend(points)
        param_ranks.append(len(order2) - 1)

    used = set(order2)
    order2.extend(x for x in range(n) if x not in used)
    return ArithCarrier(
        k=k,
        biorder=BiOrder(tuple(order2)),
        reprs=reprs,
        param_ranks=tuple(param_ranks),
        blocks=tuple(blocks),
    )


def code_of(l: int, carrier: ArithCarrier) -> Optional[int]:
    """The value ``r`` that ``<1``-rank ``l`` codes for, if any."""
    if not 0 <= l < carrier.n:
        raise ValueError(f"rank {l} outside 0..{carrier.n - 1}")
    lower = -1
    for r, upper in enumerate(carrier.reprs):
        if lower < l < upper:
            return r
        lower = upper
    return None


def decode(b: BiOrder, param_ranks: Sequence[int]) -> Decoded:
    """Read ``(domain, +, x)`` out of ``b`` with parameters ``a1, a2, a3``.

    ``param_ranks`` are the ``<2``-ranks of the parameters.  The formulas:

    * ``Dom(x)``: ``x <=2 a1``; the value of ``x`` is its ``<2``-rank.
    * ``Repr(c) = y``: ``y`` is the ``<1``-least element of ``Dom`` above ``c``.
    * a block in ``(lo, hi]`` is a run ``u1..u4`` of ``<2``-successors with
      ``lo <2 u1``, ``u4 <=2 hi`` and ``a1 <1 u4``.
    * ``add(x, y, z)`` iff some block in ``(a1, a2]`` has
      ``Repr(u1), Repr(u2), Repr(u3) = x, y, z``; ``mul`` uses ``(a2, a3]``.
    """
    r1, r2, r3 = (int(r) for r in param_ranks)
    if not 0 <= r1 < r2 < r3 < b.size:
        raise ValueError(f"parameter ranks {tuple(param_ranks)} malformed for size {b.size}")
    order2 = b.order2
    a1 = order2[r1]
    dom = sorted(order2[: r1 + 1])
    value = {x: j for j, x in enumerate(order2[: r1 + 1])}

    def repr_of(c: int) -> Optional[int]:
        i = bisect_right(dom, c)
        return value[dom[i]] if i < len(dom) else None

    def relation(lo: int, hi: int) -> frozenset:
        found = set()
        for j in range(lo + 1, hi - 2):
            u = order2[j : j + 4]
            if not u[3] > a1:
                continue
            triple = tuple(repr_of(x) for x in u[:3])
            if None not in triple:
                found.add(triple)
        return frozenset(found)

    return Decoded(size=r1 + 1, add=relation(r1, r2), mul=relation(r2, r3))


def compare_tables(decoded: Decoded, k: int) -> list[str]:
    """Differences between ``decoded`` and the true tables for ``k``."""
    problems = []
    if decoded.size != k:
        problems.append(f"domain size {decoded.size} != {k}")
    for name, got, want in zip(("add", "mul"), (decoded.add, decoded.mul), arithmetic_tables(k)):
        for t in sorted(want - got):
            problems.append(f"{name} missing {t}")
        for t in sorted(got - want):
            problems.append(f"{name} extra {t}")
    return problems


def verify_carrier(carrier: ArithCarrier) -> tuple[bool, list[str]]:
    problems = compare_tables(decode(carrier.biorder, carrier.param_ranks), carrier.k)
    return not problems, problems


def verify_roundtrip(k: int) -> tuple[bool, list[str]]:
    """Encode ``k``, decode, and compare with enumerated ``+`` and ``x``."""
    return verify_carrier(encode(k))


def swap_adjacent(b: BiOrder, j: int) -> BiOrder:
    """Exchange the elements at ``<2``-ranks ``j`` and ``j+1``."""
    order2 = list(b.order2)
    order2[j], order2[j + 1] = order2[j + 1], order2[j]
    return BiOrder(tuple(order2))


def with_biorder(carrier: ArithCarrier, b: BiOrder) -> ArithCarrier:
    return ArithCarrier(carrier.k, b, carrier.reprs, carrier.param_ranks, carrier.blocks)


def all_biorders(size: int) -> Iterable[BiOrder]:
    return (BiOrder(p) for p in permutations(range(size)))
