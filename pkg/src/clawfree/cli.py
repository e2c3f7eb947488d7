"""Command line: solve, gen, oracle, decompose, bench.

Exit codes: 0 success, 1 unreadable or malformed input, 2 input with a claw
(the witness goes to stderr), 3 internal guarantee failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Sequence

from .composition import CompositionError
from .graph import WeightedGraph
from .io import ParseError, parse, render, to_dot
from .lifting import LiftError
from .oracle import GenModel, brute_mwss, gen_instance
from .oracle.brute import MWSS_LIMIT
from .oracle.generators import KINDS
from .pipeline import PipelineError
from .solver import NotClawFree, SolveResult, solve

EXIT_INPUT = 1
EXIT_CLAW = 2
EXIT_INTERNAL = 3
BENCH_HEADER = "model,n,seed,ms,node_growth,phase_lifts_soft,phase_lifts_free,phase_lifts_s"


def _load(path: str) -> WeightedGraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse(text)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def report(result: SolveResult, *, ledger: bool = False, certify: bool = False) -> str:
    """Deterministic text report of a solve."""
    lines = [f"weight: {result.weight}", "set: " + " ".join(str(t) for t in result.nodes)]
    for key, value in result.stats.as_dict().items():
        lines.append(f"{key}: {value}")
    if certify:
        lines.append("oracle: match" if result.oracle is not None else f"oracle: skipped (n > {MWSS_LIMIT})")
    if ledger:
        for i, run in enumerate(result.runs):
            if not run.direct and run.ledger.records:
                lines.append(f"ledger component {i}:")
                lines.extend("  " + row for row in run.ledger.dump(run.graph).splitlines())
        for rec in result.twins.records:
            kind = "adjacent" if rec.adjacent else "merged"
            lines.append(f"twin {kind} kept={rec.kept} removed={rec.removed} weight={rec.removed_weight}")
    return "\n".join(lines) + "\n"


def cmd_solve(args: argparse.Namespace) -> int:
    g = _load(args.input)
    result = solve(g, certify=args.certify)
    _emit(report(result, ledger=args.ledger, certify=args.certify), None)
    if args.root_instance:
        parts = [run.instance.render() for run in result.runs if run.instance is not None]
        Path(args.root_instance).write_text("".join(parts))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    model = GenModel(args.model, args.n, args.seed, args.wmin, args.wmax)
    g = gen_instance(model)
    comment = f"generated model={model.kind} n={model.n} seed={model.seed} weights={model.wmin}..{model.wmax}"
    _emit(render(g, comment), args.output)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    g = _load(args.input)
    weight, chosen = brute_mwss(g)
    _emit(f"weight: {weight}\nset: {' '.join(str(t) for t in g.tags_of(chosen))}\n", None)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    g = _load(args.input)
    result = solve(g, certify=args.certify)
    summary = []
    dots = []
    for i, run in enumerate(result.runs):
        if run.decomposition is None:
            summary.append(f"component {i}: solved directly ({len(run.graph)} nodes)")
            continue
        kinds = [c.kind for c in run.decomposition.components]
        summary.append(
            f"component {i}: {len(run.graph)} nodes, {kinds.count('clique')} M-cliques, "
            f"{kinds.count('strip')} strips, {kinds.count('isolated')} isolated"
        )
        dots.append(to_dot(run.graph, run.decomposition, f"component{i}"))
    _emit("\n".join(summary) + "\n", None)
    if args.dot:
        _emit("".join(dots), args.dot)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    print(BENCH_HEADER, flush=True)
    for n in args.sizes:
        g = gen_instance(GenModel(args.model, n, args.seed))
        start = time.perf_counter()
        result = solve(g)
        ms = (time.perf_counter() - start) * 1000
        s = result.stats
        row = f"{args.model},{n},{args.seed},{ms:.1f},{s.node_growth:.3f},{s.soft_lifts},{s.free_lifts},{s.s_lifts}"
        print(row, flush=True)
    return 0


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clawfree", description="Maximum weight stable sets in claw-free graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file ('-' for stdin)")
    s.add_argument("input")
    s.add_argument("--certify", action="store_true", help="run every structural check and the oracle when small")
    s.add_argument("--ledger", action="store_true", help="print the lifting and twin ledgers")
    s.add_argument("--root-instance", metavar="PATH", help="write the matching instances to PATH")
    s.set_defaults(func=cmd_solve)

    gen = sub.add_parser("gen", help="generate a claw-free instance")
    gen.add_argument("--model", choices=KINDS, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--wmin", type=int, default=1)
    gen.add_argument("--wmax", type=int, default=100)
    gen.add_argument("-o", "--output", help="output file (default stdout)")
    gen.set_defaults(func=cmd_gen)

    o = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    o.add_argument("input")
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("decompose", help="summarise the basic graph after the liftings")
    d.add_argument("input")
    d.add_argument("--dot", metavar="PATH", help="write a DOT drawing ('-' for stdout)")
    d.add_argument("--certify", action="store_true")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("bench", help="time the solver on generated instances, CSV to stdout")
    b.add_argument("--sizes", type=_sizes, default=[200, 400, 800])
    b.add_argument("--model", choices=KINDS, default="line")
    b.add_argument("--seed", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotClawFree as exc:
        print(f"error: input is not claw-free: {exc}", file=sys.stderr)
        print("witness: " + " ".join(str(t) for t in exc.witness), file=sys.stderr)
        return EXIT_CLAW
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PipelineError, LiftError, CompositionError, AssertionError) as exc:
        phase = getattr(exc, "phase", type(exc).__name__)
        print(f"internal error in phase {phase}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
