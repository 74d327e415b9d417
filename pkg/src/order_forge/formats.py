"""Line-oriented text formats (LF line endings throughout)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from order_forge.biorder import ArithCarrier, BiOrder
from order_forge.generic import EmbeddingState, OrderConstraint
from order_forge.graph import ColoredRegularGraph, Swap
from order_forge.probe import VertexOrdering


class FormatError(ValueError):
    pass


def write_lines(path, lines: Sequence[str]) -> None:
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="\n")


def _read(path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _ints(line: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise FormatError(f"expected integers: {line!r}") from exc


# -- bi-orders ----------------------------------------------------------------


@dataclass(frozen=True)
class BiOrderFile:
    biorder: BiOrder
    param_ranks: Optional[tuple[int, int, int]] = None
    k: Optional[int] = None


def biorder_lines(b: BiOrder, param_ranks=None, k: Optional[int] = None) -> list[str]:
    lines = [f"biorder v1 N={b.size}", " ".join(map(str, b.order2))]
    if param_ranks is not None:
        lines.append("params " + " ".join(map(str, param_ranks)))
    if k is not None:
        lines.append(f"k={k}")
    return lines


def write_biorder(path, b: BiOrder) -> None:
    write_lines(path, biorder_lines(b))


def write_carrier(path, carrier: ArithCarrier) -> None:
    write_lines(path, biorder_lines(carrier.biorder, carrier.param_ranks, carrier.k))


def parse_biorder(lines: Sequence[str]) -> BiOrderFile:
    m = re.fullmatch(r"biorder v1 N=(\d+)", lines[0].strip()) if lines else None
    if not m:
        raise FormatError("missing 'biorder v1 N=<N>' header")
    size = int(m.group(1))
    order2 = _ints(lines[1]) if len(lines) > 1 else []
    if len(order2) != size:
        raise FormatError(f"header says N={size} but {len(order2)} entries follow")
    params = k = None
    for line in lines[2:]:
        line = line.strip()
        if line.startswith("params "):
            vals = _ints(line[len("params ") :])
            if len(vals) != 3:
                raise FormatError("params line needs three ranks")
            params = tuple(vals)
        elif line.startswith("k="):
            k = int(line[2:])
        elif line:
            raise FormatError(f"unexpected line {line!r}")
    return BiOrderFile(BiOrder(tuple(order2)), params, k)


def read_biorder(path) -> BiOrderFile:
    return parse_biorder(_read(path))


# -- graphs ---------------------------------------------------------------------


def graph_lines(G: ColoredRegularGraph) -> list[str]:
    lines = ["cgraph v1", f"n={G.n} d={G.d} c={G.c} seed={G.seed} surgered={int(G.surgered)}"]
    for k in range(G.d):
        lines.append(f"color {k}")
        lines.extend(f"{a} {b}" for a, b in G.matching(k))
    return lines


def write_graph(path, G: ColoredRegularGraph) -> None:
    write_lines(path, graph_lines(G))


def parse_graph(lines: Sequence[str]) -> ColoredRegularGraph:
    if not lines or lines[0].strip() != "cgraph v1":
        raise FormatError("missing 'cgraph v1' header")
    m = re.fullmatch(r"n=(\d+) d=(\d+) c=(\d+) seed=(\d+) surgered=([01])", lines[1].strip())
    if not m:
        raise FormatError(f"bad graph parameter line {lines[1]!r}")
    n, d, c, seed, surgered = (int(g) for g in m.groups())
    matchings: list[list[tuple[int, int]]] = []
    for line in lines[2:]:
        line = line.strip()
        if not line:
            continue
        if line.startswith("color "):
            if int(line[6:]) != len(matchings):
                raise FormatError(f"colors out of sequence at {line!r}")
            matchings.append([])
            continue
        if not matchings:
            raise FormatError("edge before first color line")
        a, b = _ints(line)
        if not a < b:
            raise FormatError(f"edge {line!r} must be written with a < b")
        matchings[-1].append((a, b))
    if len(matchings) != d:
        raise FormatError(f"header says d={d} but {len(matchings)} colors follow")
    try:
        return ColoredRegularGraph.from_matchings(n, matchings, c=c, seed=seed, surgered=bool(surgered))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def read_graph(path) -> ColoredRegularGraph:
    return parse_graph(_read(path))


def changelog_lines(swaps: Sequence[Swap]) -> list[str]:
    lines = ["color\tremoved_a\tremoved_b\tremoved_a2\tremoved_b2"]
    for s in swaps:
        (a, b), (a2, b2) = s.removed
        lines.append(f"{s.color}\t{a}\t{b}\t{a2}\t{b2}")
    return lines


def parse_changelog(lines: Sequence[str]) -> list[Swap]:
    out = []
    for line in lines[1:]:
        k, a, b, a2, b2 = _ints(line)
        out.append(Swap(k, ((a, b), (a2, b2)), ((a, a2), (b, b2))))
    return out


# -- orders ---------------------------------------------------------------------


def write_order(path, order: VertexOrdering) -> None:
    write_lines(path, [" ".join(map(str, order.vertex_at))])


def parse_order(lines: Sequence[str]) -> VertexOrdering:
    if len(lines) < 1:
        raise FormatError("empty order file")
    try:
        return VertexOrdering.from_sequence(_ints(lines[0]))
    except (ValueError, IndexError) as exc:
        raise FormatError(f"order line is not a permutation: {exc}") from exc


def read_order(path) -> VertexOrdering:
    return parse_order(_read(path))


def read_point_order_indices(path) -> list[int]:
    lines = _read(path)
    if not lines:
        raise FormatError("empty order file")
    return _ints(lines[0])


# -- constraints and embeddings ---------------------------------------------------


def read_constraints(path) -> list[OrderConstraint]:
    out = []
    for line in _read(path):
        if line.strip() and not line.lstrip().startswith("#"):
            out.append(OrderConstraint.parse(line))
    return out


def write_constraints(path, constraints: Sequence[OrderConstraint]) -> None:
    write_lines(path, [c.format() for c in constraints])


def embedding_lines(state: EmbeddingState) -> list[str]:
    realized = sum(e.status == "realized" for e in state.log)
    lines = [
        f"elements={len(state.f)}",
        f"realized={realized}",
        f"skipped={len(state.log) - realized}",
        f"injective={int(state.is_injective())}",
        "id\tvalue",
    ]
    lines += [f"{e}\t{state.f[e]}" for e in state.ordered()]
    lines.append(f"constraints={len(state.log)}")
    lines.append("constraint\tstatus\twitnesses")
    lines += [f"{e.index}\t{e.status}\t{','.join(map(str, e.witnesses))}" for e in state.log]
    return lines


def parse_embedding(lines: Sequence[str]) -> dict[int, Fraction]:
    _, tables = parse_report(lines)
    return {int(row[0]): Fraction(row[1]) for row in tables["id\tvalue"]}


# -- reports ----------------------------------------------------------------------


def parse_report(lines: Sequence[str]) -> tuple[dict[str, str], dict[str, list[list[str]]]]:
    """``key=value`` lines and TSV blocks.

    A tab-separated line directly after a non-tab line (or at the start) is
    a block header; the tab lines that follow it are its rows.
    """
    scalars: dict[str, str] = {}
    tables: dict[str, list[list[str]]] = {}
    current: Optional[str] = None
    for line in lines:
        if "\t" in line:
            if current is None:
                current = line
                tables[current] = []
            else:
                tables[current].append(line.split("\t"))
            continue
        current = None
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"report line {line!r} is neither key=value nor TSV")
        scalars.setdefault(key, value)
    return scalars, tables
