"""``order-forge`` command line.

Exit codes: 0 success or verified, 1 verification failed, 2 usage error,
3 construction error (surgery stuck, planting impossible).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from order_forge import formats
from order_forge.biorder import compare_tables, decode, encode, verify_roundtrip
from order_forge.bounds import binom_tail_check, hoeffding_bound
from order_forge.generic import run_queue
from order_forge.graph import SurgeryStuck, enumerate_small_cycles, generate, surgery
from order_forge.probe import PlantImpossible, end_to_end, montecarlo, plant, scan
from order_forge.shatter import (
    NoMonochromaticSubspace,
    PointOrder,
    build_and_verify_witness,
    verify_witness,
)
from order_forge.suite import assemble_m0

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CONSTRUCTION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, lines: Sequence[str]) -> None:
    text = "".join(line + "\n" for line in lines)
    if getattr(args, "report", None):
        Path(args.report).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


# -- arith ----------------------------------------------------------------------


def cmd_arith_encode(args) -> int:
    carrier = encode(args.k)
    formats.write_carrier(_require(args, "out"), carrier)
    _emit(args, [f"k={carrier.k}", f"n={carrier.n}", "params=" + " ".join(map(str, carrier.param_ranks))])
    return EXIT_OK


def cmd_arith_decode(args) -> int:
    parsed = formats.read_biorder(args.input)
    if parsed.param_ranks is None:
        raise UsageError(f"{args.input} has no params line")
    decoded = decode(parsed.biorder, parsed.param_ranks)
    lines = [f"domain={decoded.size}", f"add_entries={len(decoded.add)}", f"mul_entries={len(decoded.mul)}"]
    status = EXIT_OK
    if parsed.k is not None:
        problems = compare_tables(decoded, parsed.k)
        lines.append(f"verified={int(not problems)}")
        lines += [f"problem={p}" for p in problems]
        status = EXIT_OK if not problems else EXIT_FAILED
    lines.append("op\tr\ts\tt")
    for name, rel in (("add", decoded.add), ("mul", decoded.mul)):
        lines += [f"{name}\t{r}\t{s}\t{t}" for r, s, t in sorted(rel)]
    _emit(args, lines)
    return status


def cmd_arith_verify(args) -> int:
    ok, problems = verify_roundtrip(args.k)
    _emit(args, [f"k={args.k}", f"verified={int(ok)}"] + [f"problem={p}" for p in problems])
    return EXIT_OK if ok else EXIT_FAILED


# -- graph ------------------------------------------------------------------------


def cmd_graph_gen(args) -> int:
    G = generate(args.n, args.d, args.seed)
    formats.write_graph(_require(args, "out"), G)
    _emit(args, [f"n={G.n}", f"d={G.d}", f"seed={G.seed}"])
    return EXIT_OK


def cmd_graph_surgery(args) -> int:
    G = formats.read_graph(args.input)
    before = enumerate_small_cycles(G, args.c)
    G2, swaps = surgery(G, args.c, args.seed)
    formats.write_graph(_require(args, "out"), G2)
    if args.changelog:
        formats.write_lines(args.changelog, formats.changelog_lines(swaps))
    _emit(
        args,
        [
            f"c={args.c}",
            f"small_cycles_before={len(before)}",
            f"swaps={len(swaps)}",
            f"changed_edges={2 * len(swaps)}",
            f"small_cycles_after={len(enumerate_small_cycles(G2, args.c))}",
        ],
    )
    return EXIT_OK


def cmd_graph_stats(args) -> int:
    G = formats.read_graph(args.input)
    cycles = enumerate_small_cycles(G, args.c)
    lines = [
        f"n={G.n}",
        f"d={G.d}",
        f"c={args.c}",
        "matchings_ok=1",
        f"small_cycles={len(cycles)}",
        f"girth_gt_c={int(not cycles)}",
        "length\tcount",
    ]
    lines += [f"{s}\t{sum(cy.length == s for cy in cycles)}" for s in range(2, args.c + 1)]
    _emit(args, lines)
    return EXIT_OK


# -- probe ------------------------------------------------------------------------


def cmd_probe_scan(args) -> int:
    G = formats.read_graph(args.graph)
    order = formats.read_order(args.order)
    target = formats.read_biorder(args.target).biorder
    found = scan(G, order, target)
    lines = [f"N={target.size}", f"witnesses={len(found)}", "a\tcolor"]
    lines += [f"{w.a}\t{w.k}" for w in found]
    _emit(args, lines)
    return EXIT_OK


def cmd_probe_plant(args) -> int:
    G = formats.read_graph(args.graph)
    target = formats.read_biorder(args.target).biorder
    order = plant(G, target, args.seed)
    formats.write_order(_require(args, "out"), order)
    _emit(args, [f"N={target.size}", f"witnesses={len(scan(G, order, target))}"])
    return EXIT_OK


def cmd_probe_montecarlo(args) -> int:
    G = formats.read_graph(args.graph)
    target = formats.read_biorder(args.target).biorder
    _emit(args, montecarlo(G, target, args.trials, args.seed).lines())
    return EXIT_OK


# -- suites ---------------------------------------------------------------------------


def cmd_suite_end2end(args) -> int:
    result = end_to_end(args.k, args.n, args.d, args.c, args.seed)
    _emit(args, result.lines())
    return EXIT_OK if result.verdict else EXIT_FAILED


def cmd_suite_m0(args) -> int:
    family = assemble_m0(args.max_class, args.seed, d=args.d)
    _emit(args, family.lines())
    return EXIT_OK if all(c.verdict for c in family.classes) else EXIT_FAILED


# -- shatter / generic-order / bound ---------------------------------------------------


def _point_order(args) -> PointOrder:
    if args.tournament:
        if args.p != 2:
            raise UsageError("--tournament requires --p 2")
        return PointOrder.tournament(args.n, args.seed)
    if args.order == "lex":
        return PointOrder.lex(args.p, args.n)
    if args.order == "random":
        return PointOrder.random(args.p, args.n, args.seed)
    path = _require(args, "order_file")
    return PointOrder.explicit(args.p, args.n, formats.read_point_order_indices(path))


def cmd_shatter(args) -> int:
    order = _point_order(args)
    head = [f"p={args.p}", f"n={args.n}", f"k={args.k}", f"order={order.kind}"]
    try:
        w, ok = build_and_verify_witness(args.n, args.k, order)
    except NoMonochromaticSubspace:
        _emit(args, head + ["found=0", "verified=0"])
        return EXIT_FAILED
    lines = head + [
        "found=1",
        f"verified={int(ok)}",
        "pi=" + ",".join(map(str, w.pi)),
        "base=" + "".join(map(str, w.W.base)),
        "omega=" + ",".join(map(str, w.omega)),
        "basis=" + " ".join("".join(map(str, b)) for b in w.b),
        f"failures={len(verify_witness(w, order))}",
        "subset\tpoint",
    ]
    for I in sorted(w.dI, key=lambda s: (len(s), sorted(s))):
        lines.append(("{" + ",".join(map(str, sorted(I))) + "}") + "\t" + "".join(map(str, w.dI[I])))
    _emit(args, lines)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_generic_order(args) -> int:
    constraints = formats.read_constraints(args.constraints)
    state, _ = run_queue(constraints, args.seed)
    formats.write_lines(_require(args, "out"), formats.embedding_lines(state))
    realized = sum(e.status == "realized" for e in state.log)
    _emit(args, [f"constraints={len(constraints)}", f"realized={realized}", f"injective={int(state.is_injective())}"])
    return EXIT_OK


def cmd_bound_hoeffding(args) -> int:
    _emit(args, [f"n={args.n}", f"p={args.p!r}", f"x={args.x!r}", f"bound={hoeffding_bound(args.n, args.p, args.x)!r}"])
    return EXIT_OK


def cmd_bound_check(args) -> int:
    report = binom_tail_check(args.n, args.p, args.x, args.samples, args.seed)
    _emit(args, report.lines())
    return EXIT_OK if not report.flags else EXIT_FAILED


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--report")

    parser = argparse.ArgumentParser(prog="order-forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def group(name: str, help: str):
        p = sub.add_parser(name, help=help)
        return p.add_subparsers(dest="action", required=True)

    arith = group("arith", "arithmetic inside two linear orders")
    p = arith.add_parser("encode", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_arith_encode)
    p = arith.add_parser("decode", parents=[common])
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_arith_decode)
    p = arith.add_parser("verify", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_arith_verify)

    graph = group("graph", "random colored regular graphs")
    p = graph.add_parser("gen", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_graph_gen)
    p = graph.add_parser("surgery", parents=[common])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--changelog")
    p.set_defaults(func=cmd_graph_surgery)
    p = graph.add_parser("stats", parents=[common])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--c", type=int, required=True)
    p.set_defaults(func=cmd_graph_stats)

    probe = group("probe", "bi-orders induced by vertex orders")
    for name, func in (("scan", cmd_probe_scan), ("plant", cmd_probe_plant), ("montecarlo", cmd_probe_montecarlo)):
        p = probe.add_parser(name, parents=[common])
        p.add_argument("--graph", required=True)
        p.add_argument("--target", required=True)
        p.set_defaults(func=func)
        if name == "scan":
            p.add_argument("--order", required=True)
        if name == "montecarlo":
            p.add_argument("--trials", type=int, default=10)

    suite = group("suite", "end-to-end runs")
    p = suite.add_parser("end2end", parents=[common])
    for flag in ("--k", "--n", "--d", "--c"):
        p.add_argument(flag, type=int, required=True)
    p.set_defaults(func=cmd_suite_end2end)
    p = suite.add_parser("m0", parents=[common])
    p.add_argument("--max-class", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.set_defaults(func=cmd_suite_m0)

    p = sub.add_parser("shatter", parents=[common], help="F_p shattering witnesses")
    p.add_argument("--p", type=int, choices=(2, 3, 5), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--order", choices=("lex", "random", "file"), default="lex")
    p.add_argument("--order-file")
    p.add_argument("--tournament", action="store_true")
    p.set_defaults(func=cmd_shatter)

    p = sub.add_parser("generic-order", parents=[common], help="generic order on a pure set")
    p.add_argument("--constraints", required=True)
    p.set_defaults(func=cmd_generic_order)

    bound = group("bound", "binomial lower-tail bound")
    p = bound.add_parser("hoeffding", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_bound_hoeffding)
    p = bound.add_parser("check", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(func=cmd_bound_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SurgeryStuck, PlantImpossible) as exc:
        print(f"order-forge: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except (UsageError, formats.FormatError, ValueError, OSError) as exc:
        print(f"order-forge: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
