"""Command-line frontend.

Exit codes: 0 ok, 2 bad input, 3 order above the configured maximum,
4 invalid generator input (leaf / off-cycle state, invalid tree,
non-standard function), 5 no rooted spanning tree, 6 complexity too low.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import config
from .core import PeriodicSequence, RegisterState, is_de_bruijn, parse_function, state_str
from .errors import (
    ComplexityTooLow,
    DimensionError,
    FamilyParameterError,
    GjpoError,
    InitialStateOffRootCycle,
    InvalidTree,
    LeafInitialState,
    NonStandardFunction,
    NoRootedTrees,
    OrderLimitError,
    ParseError,
)
from .gpo import COMPLETED, gpo_generate, gpo_unchecked, reverse_engineer
from .graphjoin import (
    enumerate_outputs,
    find_pcps,
    gjpo_generate,
    rooted_spanning_trees,
    simplified_graph,
    spanning_trees,
)
from .stategraph import build_state_graph, export_dot

EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_GENERATOR = 4
EXIT_NO_TREES = 5
EXIT_COMPLEXITY = 6

_EXIT_CODES = [
    (OrderLimitError, EXIT_RESOURCE),
    (NoRootedTrees, EXIT_NO_TREES),
    (ComplexityTooLow, EXIT_COMPLEXITY),
    (LeafInitialState, EXIT_GENERATOR),
    (InitialStateOffRootCycle, EXIT_GENERATOR),
    (InvalidTree, EXIT_GENERATOR),
    (NonStandardFunction, EXIT_GENERATOR),
    (ParseError, EXIT_INPUT),
    (FamilyParameterError, EXIT_INPUT),
    (DimensionError, EXIT_INPUT),
]


def _dump(obj):
    return json.dumps(obj, indent=2)


def _state(text, n):
    s = RegisterState.from_str(text)
    if s.order != n:
        raise DimensionError(f"seed state {text} has {s.order} bits, expected {n}")
    return s.bits


def cmd_analyze(args, out):
    f = parse_function(args.function, args.order)
    g = build_state_graph(f)
    pag = find_pcps(g)
    H = simplified_graph(pag)
    n_spanning = len(spanning_trees(H))
    trees = rooted_spanning_trees(pag) if f.is_standard() else []
    by_root = Counter(t.root for t in trees)
    n = f.order
    if args.dot:
        text = export_dot(g)
        if args.dot == "-":
            out.write(text)
        else:
            with open(args.dot, "w") as fh:
                fh.write(text)
        return 0
    report = {
        "function": str(f),
        "n": n,
        "standard": f.is_standard(),
        "components": len(g.components),
        "graph": g.to_json()["components"],
        "pcps": [p.to_json() for p in pag.edges],
        "spanning_trees": n_spanning,
        "rooted_trees": len(trees),
        "rooted_trees_by_root": {str(r): by_root[r] for r in range(len(g.components))},
    }
    if args.json:
        out.write(_dump(report) + "\n")
        return 0
    out.write(f"function: {report['function']}\n")
    out.write(f"order: {n}\n")
    out.write(f"standard: {str(report['standard']).lower()}\n")
    out.write(f"components: {len(g.components)}\n")
    for comp in g.components:
        cyc = " ".join(state_str(v, n) for v in comp.cycle)
        out.write(
            f"  G{comp.id}: cycle ({cyc}) length {len(comp.cycle)}, "
            f"size {comp.size}, leaves {len(g.leaves(comp.id))}\n"
        )
    out.write(f"pcps: {len(pag)}\n")
    for p in pag.edges:
        out.write(f"  {p}\n")
    out.write(f"spanning_trees: {n_spanning}\n")
    per_root = " ".join(f"G{r}:{by_root[r]}" for r in range(len(g.components)))
    out.write(f"rooted_trees: {len(trees)} ({per_root})\n")
    return 0


def cmd_generate(args, out):
    f = parse_function(args.function, args.order)
    n = f.order
    u = _state(args.seed_state, n)
    meta = {"mode": args.mode, "function": str(f), "n": n, "seed_state": state_str(u, n)}
    if args.mode == "gpo":
        if args.unchecked:
            run = gpo_unchecked(f, u)
            if run.status != COMPLETED:
                print(f"warning: run stopped by the step guard ({run.status})", file=sys.stderr)
            seq = run.sequence()
        else:
            seq = gpo_generate(f, u)
    else:
        pag = find_pcps(build_state_graph(f))
        g = pag.graph
        if not g.on_cycle(u):
            raise InitialStateOffRootCycle(f"{state_str(u, n)} is not on any cycle")
        root = g.component_id[u]
        trees = rooted_spanning_trees(pag, root)
        if not trees:
            raise NoRootedTrees(f"no rooted spanning tree has root G{root}")
        if not 0 <= args.tree < len(trees):
            raise InvalidTree(f"tree index {args.tree} out of range (0..{len(trees) - 1})")
        tree = trees[args.tree]
        seq = gjpo_generate(f, tree, u, pag)
        meta["tree"] = args.tree
        meta["tree_edges"] = tree.to_json()
    if args.json:
        meta["bits"] = str(seq)
        meta["period"] = seq.period
        meta["de_bruijn"] = is_de_bruijn(seq, n)
        out.write(_dump(meta) + "\n")
    else:
        out.write(f"{seq}\n")
    return 0


def cmd_enumerate(args, out):
    f = parse_function(args.function, args.order)
    root = None
    if args.root is not None:
        g = build_state_graph(f)
        root = g.component_id[_state(args.root, f.order)]
    result = enumerate_outputs(f, jobs=args.jobs, root=root)
    if args.json:
        report = {"function": str(f), **result.to_json(args.emit_sequences)}
        if root is not None:
            report["root"] = root
        out.write(_dump(report) + "\n")
        return 0
    out.write(f"function: {f}\n")
    out.write(f"components: {result.components}\n")
    out.write(f"rooted_trees: {result.rooted_trees}\n")
    out.write(f"runs: {result.runs}\n")
    out.write(f"distinct: {result.distinct}\n")
    hist = " ".join(f"{k}:{v}" for k, v in result.histogram().items())
    out.write(f"histogram: {hist}\n")
    if args.emit_sequences:
        for bits, mult in result.counts.items():
            out.write(f"{bits} {mult}\n")
    return 0


def cmd_reverse(args, out):
    s = PeriodicSequence(args.bits)
    f, u = reverse_engineer(s)
    again = gpo_generate(f, u)
    ok = again.shift_equivalent(s)
    half = 1 << (f.order - 1)
    report = {
        "n": f.order,
        "seed_state": str(u),
        "g_table": f.table_bits()[:half],
        "table_sha256": f.digest(),
        "round_trip": ok,
    }
    if args.json:
        out.write(_dump(report) + "\n")
    else:
        out.write(f"n: {f.order}\n")
        out.write(f"seed_state: {u}\n")
        out.write(f"g_table: {report['g_table']}\n")
        out.write(f"table_sha256: {report['table_sha256']}\n")
        out.write(f"round_trip: {'OK' if ok else 'FAILED'}\n")
    return 0 if ok else 1


def cmd_verify(args, out):
    s = PeriodicSequence(args.bits)
    n = args.order
    ok = is_de_bruijn(s, n)
    windows = Counter(s.windows(n))
    repeated = sorted(w for w, c in windows.items() if c > 1)
    report = {
        "de_bruijn": ok,
        "n": n,
        "period": s.period,
        "expected_period": 1 << n,
        "distinct_windows": len(windows),
        "repeated_windows": [state_str(w, n) for w in repeated],
        "missing_windows": (1 << n) - len(windows),
    }
    if args.json:
        out.write(_dump(report) + "\n")
        return 0
    out.write(f"{str(ok).lower()}\n")
    print(
        f"period {s.period} (want {1 << n}), {len(windows)} distinct {n}-windows, "
        f"{len(repeated)} repeated, {report['missing_windows']} missing",
        file=sys.stderr,
    )
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-order", type=int, help="largest accepted order (default 20)")
    common.add_argument("--config", help="key=value config file")

    parser = argparse.ArgumentParser(
        prog="gjpo", description="Greedy and graph-joining de Bruijn sequence generation."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="state graph, PCPs and tree counts")
    p.add_argument("function")
    p.add_argument("-n", "--order", type=int, required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--dot", metavar="FILE", help="write the state graph as DOT ('-' = stdout)")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("generate", parents=[common], help="one period of a generated sequence")
    p.add_argument("mode", choices=["gpo", "gjpo"])
    p.add_argument("function")
    p.add_argument("-n", "--order", type=int, required=True)
    p.add_argument("-u", "--seed-state", required=True)
    p.add_argument("--tree", type=int, default=0, help="index among trees rooted at u's component")
    p.add_argument("--unchecked", action="store_true", help="gpo: allow non-standard functions")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("enumerate", parents=[common], help="all graph-joining outputs")
    p.add_argument("function")
    p.add_argument("-n", "--order", type=int, required=True)
    p.add_argument("--root", metavar="STATE", help="only trees rooted at this state's component")
    p.add_argument("--emit-sequences", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("reverse", parents=[common], help="recover (f, u) from a periodic sequence")
    p.add_argument("bits")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_reverse)

    p = sub.add_parser("verify", parents=[common], help="de Bruijn check")
    p.add_argument("bits")
    p.add_argument("-n", "--order", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    previous = config.get_max_order()
    try:
        config.set_max_order(config.resolve_max_order(args.config, args.max_order))
        return args.handler(args, out)
    except GjpoError as exc:
        for cls, code in _EXIT_CODES:
            if isinstance(exc, cls):
                break
        else:
            code = 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        config.set_max_order(previous)


if __name__ == "__main__":
    sys.exit(main())
