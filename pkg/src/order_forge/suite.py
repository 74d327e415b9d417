"""The disjoint union of surgered graphs, one per arithmetic size."""

from __future__ import annotations

from dataclasses import dataclass

from order_forge.biorder import ArithCarrier, Decoded, encode
from order_forge.graph import ColoredRegularGraph, enumerate_small_cycles, generate, surgery
from order_forge.prng import derive_seed
from order_forge.probe import interpret_arithmetic, plant


@dataclass
class M0Class:
    index: int
    offset: int
    graph: ColoredRegularGraph
    target: ArithCarrier
    verdict: bool
    decoded: Decoded | None
    problems: list[str]


@dataclass
class M0Family:
    classes: list[M0Class]

    @property
    def size(self) -> int:
        return sum(cls.graph.n for cls in self.classes)

    def class_of(self, x: int) -> int:
        for cls in self.classes:
            if cls.offset <= x < cls.offset + cls.graph.n:
                return cls.index
        raise ValueError(f"vertex {x} outside the family")

    def same_class(self, x: int, y: int) -> bool:
        return self.class_of(x) == self.class_of(y)

    def edges(self):
        """Colored edges ``(u, v, color)`` of the union, vertices renumbered globally."""
        for cls in self.classes:
            for k in range(cls.graph.d):
                for u, v in cls.graph.matching(k):
                    yield cls.offset + u, cls.offset + v, k

    def lines(self) -> list[str]:
        out = [
            f"classes={len(self.classes)}",
            f"vertices={self.size}",
            f"verified={sum(c.verdict for c in self.classes)}",
            "class\toffset\tn\td\tgirth_gt_class\tverdict",
        ]
        for c in self.classes:
            girth_ok = not enumerate_small_cycles(c.graph, c.index)
            out.append(f"{c.index}\t{c.offset}\t{c.graph.n}\t{c.graph.d}\t{int(girth_ok)}\t{int(c.verdict)}")
        return out


def assemble_m0(max_class: int, seed: int, d: int = 3) -> M0Family:
    """Classes ``3..max_class``; class ``n`` has ``40 n**2`` vertices, no
    cycle of length ``<= n`` and a planted copy of the size-``n`` arithmetic."""
    if max_class < 3:
        raise ValueError("max_class must be at least 3")
    classes = []
    offset = 0
    for n in range(3, max_class + 1):
        class_seed = derive_seed(seed, n)
        G, _ = surgery(generate(40 * n * n, d, class_seed), n, class_seed)
        carrier = encode(n)
        order = plant(G, carrier.biorder, class_seed)
        _, _, decoded, problems = interpret_arithmetic(G, order, n)
        classes.append(M0Class(n, offset, G, carrier, not problems, decoded, problems))
        offset += G.n
    return M0Family(classes)
