"""Ordering a pure-equality structure generically, one constraint at a time.

Elements are integer ids mapped injectively into the rationals.  A
constraint is a quantifier-free order formula in fresh variables ``x1..xm``
and parameters ``p<id>``; realizing it adds ``m`` new elements, pairwise
distinct and distinct from every parameter, whose images satisfy it.
With no algebraic closure to worry about, a constraint can be realized iff
some disjunct of its DNF has an acyclic strict-order graph once the
parameters' current order is added.

Formulas are nested tuples::

    ("lt", s, t)   s, t are ("x", i) or ("p", id)
    ("and", A, B)  ("or", A, B)  ("not", A)  ("true",)  ("false",)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from order_forge.prng import TAG_GENERIC, SplitMix64, derive_seed

Term = tuple[str, int]
Formula = tuple


class FormulaError(ValueError):
    pass


# -- formulas ---------------------------------------------------------------


def parse_term(tok: str) -> Term:
    if len(tok) >= 2 and tok[0] in "xp" and tok[1:].isdigit():
        return (tok[0], int(tok[1:]))
    raise FormulaError(f"bad term {tok!r}")


def parse_formula(text: str) -> Formula:
    tokens = text.split()
    pos = 0

    def take() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaError(f"truncated formula: {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "lt":
            s = parse_term(tokens[pos]) if pos < len(tokens) else None
            t = parse_term(tokens[pos + 1]) if pos + 1 < len(tokens) else None
            if s is None or t is None:
                raise FormulaError(f"truncated formula: {text!r}")
            pos += 2
            return ("lt", s, t)
        if tok in ("and", "or"):
            return (tok, take(), take())
        if tok == "not":
            return ("not", take())
        if tok in ("true", "false"):
            return (tok,)
        raise FormulaError(f"unknown token {tok!r}")

    out = take()
    if pos != len(tokens):
        raise FormulaError(f"trailing tokens in {text!r}")
    return out


def format_term(t: Term) -> str:
    return f"{t[0]}{t[1]}"


def format_formula(f: Formula) -> str:
    op = f[0]
    if op == "lt":
        return f"lt {format_term(f[1])} {format_term(f[2])}"
    if op in ("true", "false"):
        return op
    return " ".join([op] + [format_formula(g) for g in f[1:]])


def terms_of(f: Formula) -> set[Term]:
    if f[0] == "lt":
        return {f[1], f[2]}
    out: set[Term] = set()
    for g in f[1:]:
        out |= terms_of(g)
    return out


def evaluate(f: Formula, value) -> Optional[bool]:
    """Truth of ``f`` when ``value(term)`` gives a comparable or None (unknown)."""
    op = f[0]
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "lt":
        s, t = value(f[1]), value(f[2])
        if s is None or t is None:
            return None
        return s < t
    if op == "not":
        v = evaluate(f[1], value)
        return None if v is None else not v
    a, b = evaluate(f[1], value), evaluate(f[2], value)
    if op == "and":
        if a is False or b is False:
            return False
        return None if a is None or b is None else True
    if a is True or b is True:
        return True
    return None if a is None or b is None else False


def _dnf(f: Formula, positive: bool = True) -> list[list[tuple[Term, Term]]]:
    # Disjuncts as lists of strict atoms s < t; a negated atom over distinct
    # terms becomes t < s because all elements involved are distinct.
    op = f[0]
    if op == "not":
        return _dnf(f[1], not positive)
    if op in ("true", "false"):
        return [[]] if (op == "true") == positive else []
    if op == "lt":
        s, t = f[1], f[2]
        if s == t:
            return [] if positive else [[]]
        return [[(s, t)]] if positive else [[(t, s)]]
    left, right = _dnf(f[1], positive), _dnf(f[2], positive)
    if (op == "and") == positive:
        return [a + b for a in left for b in right]
    return left + right


@dataclass(frozen=True)
class OrderConstraint:
    var_count: int
    theta: Formula

    def __post_init__(self):
        for kind, i in terms_of(self.theta):
            if kind == "x" and not 1 <= i <= self.var_count:
                raise FormulaError(f"variable x{i} outside x1..x{self.var_count}")

    @property
    def params(self) -> list[int]:
        return sorted(i for kind, i in terms_of(self.theta) if kind == "p")

    @classmethod
    def parse(cls, line: str) -> "OrderConstraint":
        line = line.strip()
        m = None
        if line.startswith("vars="):
            head, _, line = line.partition(" ")
            m = int(head[5:])
        theta = parse_formula(line)
        if m is None:
            m = max((i for kind, i in terms_of(theta) if kind == "x"), default=0)
        return cls(m, theta)

    def format(self) -> str:
        return f"vars={self.var_count} {format_formula(self.theta)}"


# -- largeness and realization ------------------------------------------------


def _order_graph(atoms, param_values: dict[int, Fraction]):
    succ: dict[Term, set[Term]] = {}
    for s, t in atoms:
        succ.setdefault(s, set()).add(t)
        succ.setdefault(t, set())
    chain = sorted(param_values, key=param_values.__getitem__)
    for a, b in zip(chain, chain[1:]):
        succ.setdefault(("p", a), set()).add(("p", b))
        succ.setdefault(("p", b), set())
    return succ


def _toposort(succ) -> Optional[list[Term]]:
    indeg = {v: 0 for v in succ}
    for v in succ:
        for w in succ[v]:
            indeg[w] += 1
    ready = sorted(v for v, deg in indeg.items() if deg == 0)
    out = []
    while ready:
        v = ready.pop(0)
        out.append(v)
        for w in sorted(succ[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return out if len(out) == len(succ) else None


def feasible_disjuncts(constraint: OrderConstraint, f: dict[int, Fraction]) -> list[list[tuple[Term, Term]]]:
    params = {p: f[p] for p in constraint.params}
    return [atoms for atoms in _dnf(constraint.theta) if _toposort(_order_graph(atoms, params)) is not None]


def check_large(constraint: OrderConstraint, f: dict[int, Fraction]) -> bool:
    """Whether fresh, pairwise distinct rationals can satisfy ``constraint``.

    Every parameter must already be mapped by ``f``.
    """
    missing = [p for p in constraint.params if p not in f]
    if missing:
        raise FormulaError(f"parameters {missing} are not mapped")
    return bool(feasible_disjuncts(constraint, f))


def _pick(lo: Optional[Fraction], hi: Optional[Fraction], used: set) -> Fraction:
    if lo is None and hi is None:
        cand = max(used) + 1 if used else Fraction(0)
    elif lo is None:
        cand = hi - 1
        while cand in used:
            cand -= 1
    elif hi is None:
        cand = lo + 1
        while cand in used:
            cand += 1
    else:
        cand = (lo + hi) / 2
        while cand in used:
            cand = (lo + cand) / 2
    return cand


def _realize(atoms, m: int, f: dict[int, Fraction], params: Sequence[int]) -> dict[int, Fraction]:
    succ = _order_graph(atoms, {p: f[p] for p in params})
    for i in range(1, m + 1):
        succ.setdefault(("x", i), set())
    topo = _toposort(succ)
    assert topo is not None

    ceiling: dict[Term, Optional[Fraction]] = {}
    for v in reversed(topo):
        bounds = [f[w[1]] if w[0] == "p" else ceiling[w] for w in succ[v]]
        bounds = [b for b in bounds if b is not None]
        ceiling[v] = min(bounds) if bounds else None

    pred: dict[Term, list[Term]] = {v: [] for v in succ}
    for v, ws in succ.items():
        for w in ws:
            pred[w].append(v)

    used = set(f.values())
    values: dict[Term, Fraction] = {("p", p): f[p] for p in params}
    out = {}
    for v in topo:
        if v[0] != "x":
            continue
        lows = [values[u] for u in pred[v]]
        highs = [f[w[1]] if w[0] == "p" else ceiling[w] for w in succ[v]]
        highs = [h for h in highs if h is not None]
        val = _pick(max(lows) if lows else None, min(highs) if highs else None, used)
        used.add(val)
        values[v] = val
        out[v[1]] = val
    return out


@dataclass
class LogEntry:
    index: int
    status: str  # "realized" or "skipped"
    witnesses: tuple[int, ...] = ()


@dataclass
class EmbeddingState:
    f: dict[int, Fraction] = field(default_factory=dict)
    log: list[LogEntry] = field(default_factory=list)

    def copy(self) -> "EmbeddingState":
        return EmbeddingState(dict(self.f), list(self.log))

    def ordered(self) -> list[int]:
        return sorted(self.f, key=self.f.__getitem__)

    def is_injective(self) -> bool:
        return len(set(self.f.values())) == len(self.f)


def extend_step(state: EmbeddingState, constraint: OrderConstraint, seed: int, index: int = 0) -> EmbeddingState:
    """One stage of the construction; ``state`` is left untouched."""
    new = state.copy()
    for p in constraint.params:
        if p not in new.f:
            new.f[p] = max(new.f.values(), default=Fraction(0)) + 1
    options = feasible_disjuncts(constraint, new.f)
    if not options:
        new.log.append(LogEntry(index, "skipped"))
        return new
    atoms = options[SplitMix64.stream(seed, TAG_GENERIC).bounded(len(options))]
    vals = _realize(atoms, constraint.var_count, new.f, constraint.params)
    first = max(new.f, default=-1) + 1
    ids = tuple(range(first, first + constraint.var_count))
    for i, elem in zip(range(1, constraint.var_count + 1), ids):
        new.f[elem] = vals[i]
    new.log.append(LogEntry(index, "realized", ids))
    return new


def run_queue(
    constraints: Iterable[OrderConstraint],
    seed: int,
    state: Optional[EmbeddingState] = None,
) -> tuple[EmbeddingState, list[int]]:
    """Process ``constraints`` in order; returns the state and the element ids in increasing order."""
    state = EmbeddingState() if state is None else state.copy()
    for i, con in enumerate(constraints):
        state = extend_step(state, con, derive_seed(seed, i), index=i)
    return state, state.ordered()


def holds(constraint: OrderConstraint, witnesses: Sequence[int], f: dict[int, Fraction]) -> bool:
    def value(t: Term):
        return f[witnesses[t[1] - 1]] if t[0] == "x" else f[t[1]]

    return bool(evaluate(constraint.theta, value))


def find_witness(constraint: OrderConstraint, f: dict[int, Fraction]) -> Optional[tuple[int, ...]]:
    """Backtracking search for fresh elements satisfying ``constraint`` under ``f``."""
    params = set(constraint.params)
    m = constraint.var_count
    # theta sees only the order type over params, so m elements from each gap
    # between consecutive parameters realize every pattern the full set does.
    pool, gap_fill = [], 0
    for e in sorted(f, key=f.__getitem__):
        if e in params:
            gap_fill = 0
        elif gap_fill < m:
            pool.append(e)
            gap_fill += 1
    chosen: list[int] = []

    def value(t: Term):
        if t[0] == "p":
            return f[t[1]]
        return f[chosen[t[1] - 1]] if t[1] <= len(chosen) else None

    def search() -> bool:
        verdict = evaluate(constraint.theta, value)
        if verdict is False:
            return False
        if len(chosen) == m:
            return bool(verdict)
        for e in pool:
            if e in chosen:
                continue
            chosen.append(e)
            if search():
                return True
            chosen.pop()
        return False

    return tuple(chosen) if search() else None


def order_patterns(params: Sequence[int], m: int) -> list[OrderConstraint]:
    """Every complete order type of ``x1..xm`` relative to ``params``.

    ``params`` must be listed in increasing order; each pattern is the chain
    formula of one interleaving.
    """
    out = []
    xs = [("x", i) for i in range(1, m + 1)]
    ps = [("p", p) for p in params]
    slots = len(xs) + len(ps)
    for var_pos in combinations(range(slots), m):
        for var_perm in permutations(xs):
            seq, vi, pi = [], iter(var_perm), iter(ps)
            for j in range(slots):
                seq.append(next(vi) if j in var_pos else next(pi))
            atoms = [("lt", s, t) for s, t in zip(seq, seq[1:])]
            theta: Formula = ("true",)
            for atom in atoms:
                theta = atom if theta == ("true",) else ("and", theta, atom)
            out.append(OrderConstraint(m, theta))
    return out


def genericity_queue(state: EmbeddingState, params: Sequence[int], max_vars: int = 3, max_params: int = 2) -> list[OrderConstraint]:
    ordered = sorted(params, key=state.f.__getitem__)
    queue = []
    for r in range(max_params + 1):
        for subset in combinations(ordered, r):
            for m in range(1, max_vars + 1):
                queue.extend(order_patterns(subset, m))
    return queue
