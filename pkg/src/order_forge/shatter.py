"""Independence witnesses for orders on F_p^n.

Points are tuples over ``range(p)``; coordinate 1 (tuple index 0) is the
most significant, so Python's tuple comparison is the lexicographic order.
An affine line ``{d_0 < ... < d_{p-1}}`` (lex) is colored by the permutation
listing its points in increasing order under a given order.  Inside an
affine subspace whose lines all share one color ``pi``, the formula

    phi_pi(x, y) = AND_i  x + pi(i) y  <  x + pi(i+1) y

cuts out every subset of a lex-minimal basis, with parameters ``d_I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from itertools import chain, combinations, product
from typing import Iterator, Optional, Sequence

from order_forge.prng import TAG_SHATTER, SplitMix64

Point = tuple[int, ...]

MAX_POINTS = 4096


class NoMonochromaticSubspace(LookupError):
    pass


def all_points(p: int, n: int) -> list[Point]:
    return list(product(range(p), repeat=n))


def point_index(x: Point, p: int) -> int:
    idx = 0
    for digit in x:
        idx = idx * p + digit
    return idx


def index_point(idx: int, p: int, n: int) -> Point:
    digits = []
    for _ in range(n):
        idx, r = divmod(idx, p)
        digits.append(r)
    return tuple(reversed(digits))


def vadd(x: Point, y: Point, p: int) -> Point:
    return tuple((a + b) % p for a, b in zip(x, y))


def vscale(a: int, x: Point, p: int) -> Point:
    return tuple((a * b) % p for b in x)


def vsub(x: Point, y: Point, p: int) -> Point:
    return tuple((a - b) % p for a, b in zip(x, y))


@dataclass(frozen=True)
class PointOrder:
    """A strict total order on F_p^n, or a tournament when ``p == 2``.

    ``ranks[i]`` is the rank of the point with index ``i``.  A tournament
    keeps ``beats``, a flat ``p^n x p^n`` table with ``beats[i*m + j]`` true
    iff point ``i`` is below point ``j``.
    """

    p: int
    n: int
    kind: str
    ranks: Optional[tuple[int, ...]] = None
    beats: Optional[bytes] = None

    @property
    def size(self) -> int:
        return self.p**self.n

    def less(self, x: Point, y: Point) -> bool:
        i, j = point_index(x, self.p), point_index(y, self.p)
        if self.beats is not None:
            return i != j and bool(self.beats[i * self.size + j])
        return self.ranks[i] < self.ranks[j]

    @classmethod
    def lex(cls, p: int, n: int) -> "PointOrder":
        return cls(p, n, "lex", ranks=tuple(range(p**n)))

    @classmethod
    def explicit(cls, p: int, n: int, increasing: Sequence[int], kind: str = "explicit") -> "PointOrder":
        """Order listing point indices ``increasing`` from least to greatest."""
        m = p**n
        if sorted(increasing) != list(range(m)):
            raise ValueError(f"explicit order must list each of the {m} point indices once")
        ranks = [0] * m
        for r, i in enumerate(increasing):
            ranks[i] = r
        return cls(p, n, kind, ranks=tuple(ranks))

    @classmethod
    def random(cls, p: int, n: int, seed: int) -> "PointOrder":
        return cls.explicit(p, n, SplitMix64.stream(seed, TAG_SHATTER).permutation(p**n), kind="random")

    @classmethod
    def tournament(cls, n: int, seed: int) -> "PointOrder":
        """Uniform random tournament on F_2^n."""
        m = 2**n
        rng = SplitMix64.stream(seed, TAG_SHATTER, 1)
        beats = bytearray(m * m)
        for i in range(m):
            for j in range(i + 1, m):
                if rng.next_u64() >> 63:
                    beats[i * m + j] = 1
                else:
                    beats[j * m + i] = 1
        return cls(2, n, "tournament", beats=bytes(beats))


@dataclass(frozen=True)
class AffineSubspace:
    base: Point
    directions: tuple[Point, ...]
    p: int

    @property
    def dim(self) -> int:
        return len(self.directions)

    def vectors(self) -> list[Point]:
        """The direction space, in lex order."""
        n = len(self.base)
        out = set()
        for coeffs in product(range(self.p), repeat=self.dim):
            v = (0,) * n
            for a, b in zip(coeffs, self.directions):
                v = vadd(v, vscale(a, b, self.p), self.p)
            out.add(v)
        return sorted(out)

    def points(self) -> list[Point]:
        return sorted(vadd(self.base, v, self.p) for v in self.vectors())

    def lines(self) -> Iterator[list[Point]]:
        """Each affine line inside the subspace once, points in lex order."""
        p = self.p
        dirs = [v for v in self.vectors() if any(v) and _leading(v) == 1]
        for x in self.points():
            for v in dirs:
                line = sorted(vadd(x, vscale(j, v, p), p) for j in range(p))
                if line[0] == x:
                    yield line


def _leading(v: Point) -> int:
    return next(a for a in v if a)


def _is_line(points: Sequence[Point], p: int) -> bool:
    if len(points) != p or len(set(points)) != p:
        return False
    v = vsub(points[1], points[0], p)
    multiples = {vscale(j, v, p) for j in range(p)}
    return all(vsub(x, points[0], p) in multiples for x in points)


def color_line(L: Sequence[Point], order: PointOrder) -> tuple[int, ...]:
    """The permutation ``pi`` with ``d_pi(0) < ... < d_pi(p-1)``, ``d`` lex-sorted."""
    p = order.p
    if not _is_line(L, p):
        raise ValueError(f"not an affine line of F_{p}^{order.n}: {list(L)}")
    d = sorted(L)

    def cmp(i: int, j: int) -> int:
        if i == j:
            return 0
        return -1 if order.less(d[i], d[j]) else 1

    return tuple(sorted(range(p), key=cmp_to_key(cmp)))


def _rref_bases(p: int, n: int, k: int) -> Iterator[tuple[tuple[int, ...], tuple[Point, ...]]]:
    # One row-reduced basis per k-dimensional subspace: pivot columns in
    # combination order, then free entries in product order.
    for pivots in combinations(range(n), k):
        slots = [(i, j) for i, piv in enumerate(pivots) for j in range(piv + 1, n) if j not in pivots]
        for values in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, j), a in zip(slots, values):
                rows[i][j] = a
            yield pivots, tuple(tuple(r) for r in rows)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def affine_subspaces(p: int, n: int, k: int) -> Iterator[AffineSubspace]:
    for pivots, rows in _rref_bases(p, n, k):
        free = [j for j in range(n) if j not in pivots]
        for values in product(range(p), repeat=len(free)):
            base = [0] * n
            for j, a in zip(free, values):
                base[j] = a
            yield AffineSubspace(tuple(base), rows, p)


def is_monochromatic(W: AffineSubspace, order: PointOrder, cache: Optional[dict] = None) -> Optional[tuple[int, ...]]:
    """The common color of all lines of ``W``, or None if two colors occur."""
    color = None
    for line in W.lines():
        key = (line[0], line[1])
        if cache is not None and key in cache:
            c = cache[key]
        else:
            c = color_line(line, order)
            if cache is not None:
                cache[key] = c
        if color is None:
            color = c
        elif c != color:
            return None
    return color if color is not None else tuple(range(W.p))


def find_mono_subspace(n: int, k: int, order: PointOrder) -> Optional[AffineSubspace]:
    """First ``k``-flat, in enumeration order, all of whose lines share a color."""
    p = order.p
    if order.n != n:
        raise ValueError(f"order is on F_{p}^{order.n}, not F_{p}^{n}")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    if p**n > MAX_POINTS:
        raise ValueError(f"F_{p}^{n} has {p**n} points; limit is {MAX_POINTS}")
    cache: dict = {}
    for W in affine_subspaces(p, n, k):
        if is_monochromatic(W, order, cache) is not None:
            return W
    return None


def minimal_basis(W: AffineSubspace) -> tuple[list[Point], list[int]]:
    """Greedy lex-minimal basis ``b^1..b^k`` of the direction space and the
    1-based index ``omega_l`` of the first nonzero coordinate of each."""
    p = W.p
    n = len(W.base)
    span = {(0,) * n}
    basis: list[Point] = []
    for v in W.vectors():
        if v in span:
            continue
        basis.append(v)
        span = {vadd(s, vscale(a, v, p), p) for s in span for a in range(p)}
        if len(basis) == W.dim:
            break
    omega = [next(i for i, a in enumerate(b) if a) + 1 for b in basis]
    return basis, omega


def d_point(W: AffineSubspace, basis: Sequence[Point], omega: Sequence[int], s: Sequence[int]) -> Point:
    """The point of ``W`` whose coordinate ``omega_i`` equals ``s_i`` for all ``i``."""
    p = W.p
    k = len(basis)
    lam = [0] * k
    for i in reversed(range(k)):
        col = omega[i] - 1
        rest = W.base[col] + sum(lam[j] * basis[j][col] for j in range(i + 1, k))
        lam[i] = ((s[i] - rest) * pow(basis[i][col], -1, p)) % p
    x = W.base
    for a, b in zip(lam, basis):
        x = vadd(x, vscale(a, b, p), p)
    return x


def eval_phi_pi(x: Point, y: Point, pi: Sequence[int], order: PointOrder) -> bool:
    p = order.p
    chain_ = [vadd(x, vscale(a, y, p), p) for a in pi]
    return all(order.less(u, v) for u, v in zip(chain_, chain_[1:]))


def subsets(k: int) -> list[frozenset]:
    items = range(1, k + 1)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, r) for r in range(k + 1))]


@dataclass
class ShatterWitness:
    pi: tuple[int, ...]
    W: AffineSubspace
    b: list[Point]
    omega: list[int]
    dI: dict[frozenset, Point]

    @property
    def k(self) -> int:
        return len(self.b)


def build_witness(W: AffineSubspace, order: PointOrder) -> ShatterWitness:
    pi = is_monochromatic(W, order)
    if pi is None:
        raise ValueError("subspace is not monochromatic")
    basis, omega = minimal_basis(W)
    k = len(basis)
    dI = {I: d_point(W, basis, omega, [1 if i in I else 0 for i in range(1, k + 1)]) for I in subsets(k)}
    return ShatterWitness(pi, W, basis, omega, dI)


def verify_witness(w: ShatterWitness, order: PointOrder) -> list[tuple[frozenset, int]]:
    """Pairs ``(I, l)`` where ``phi_pi(d_I, b^l)`` disagrees with ``l not in I``."""
    bad = []
    for I, x in w.dI.items():
        for l, y in enumerate(w.b, start=1):
            if eval_phi_pi(x, y, w.pi, order) != (l not in I):
                bad.append((I, l))
    return bad


def build_and_verify_witness(n: int, k: int, order: PointOrder) -> tuple[ShatterWitness, bool]:
    W = find_mono_subspace(n, k, order)
    if W is None:
        raise NoMonochromaticSubspace(f"no monochromatic {k}-flat in F_{order.p}^{n}")
    w = build_witness(W, order)
    return w, not verify_witness(w, order)
