"""Command-line driver.

    lamping check FILE [--mode eal|lal]
    lamping run FILE [--mode ...] [--translation lt|dlt] [--strategy sg|pn-mlbl]
                 [--max-steps N] [--probe-depth D] [--dot DIR]
    lamping trace FILE --edge E --ctx "S1|...|Sk|T" [...]

Exit codes: 0 pass, 1 verdict fail, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .derivations import (DerivationSyntaxError, RuleViolation,
                          check_derivation, parse_derivation)
from .formulas import show_formula
from .pipeline import format_report, prepared_graph, run_pipeline
from .proofnets import proofnet_dot
from .semantics import (FuelExhaustedRun, Reached, Stuck, parse_ctx, run_token,
                        show_ctx)
from .sharegraphs import graph_dot, normalize_sg
from .terms import show_term


def _load(path: str):
    try:
        return parse_derivation(Path(path).read_text())
    except (OSError, DerivationSyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(2)


def _checked(d, mode):
    try:
        return check_derivation(d, mode)
    except RuleViolation as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(2)


def cmd_check(args) -> int:
    d = _load(args.file)
    j = _checked(d, args.mode)
    if args.annotate:
        from .derivations import show_derivation
        print(show_derivation(d, judgements=True, mode=args.mode))
        return 0
    ctx = ", ".join(f"{n}:{show_formula(f)}" for n, f in j.ctx)
    print(f"{ctx} |- {show_term(j.subject)} : {show_formula(j.type)}")
    return 0


def cmd_run(args) -> int:
    d = _load(args.file)
    _checked(d, args.mode)
    stats = run_pipeline(d, mode=args.mode, translation=args.translation,
                         strategy=args.strategy, max_steps=args.max_steps,
                         probe_depth=args.probe_depth)
    print(format_report(stats))
    if args.dot:
        outdir = Path(args.dot)
        outdir.mkdir(parents=True, exist_ok=True)
        net, lab, graph = prepared_graph(d, args.mode, args.translation)
        (outdir / "proofnet.dot").write_text(proofnet_dot(net))
        (outdir / "graph.dot").write_text(graph_dot(graph))
        normalize_sg(graph, args.max_steps)
        (outdir / "normal.dot").write_text(graph_dot(graph))
    return 0 if stats.verdict else 1


def cmd_trace(args) -> int:
    d = _load(args.file)
    _checked(d, args.mode)
    net, lab, graph = prepared_graph(d, args.mode, args.translation)
    structure = net if args.on == "net" else graph
    if args.edge not in structure.conclusions:
        print(f"error: unknown edge {args.edge!r}; conclusions: "
              f"{' '.join(structure.conclusions)}", file=sys.stderr)
        return 2
    try:
        ctx = parse_ctx(args.ctx, lab.k)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    res, transcript = run_token(structure, lab, args.edge, ctx,
                                fuel=args.max_steps, trace=True)
    for state in transcript:
        t = state.target
        where = t[1] if t[0] == "c" else f"{t[1]}.{t[2]}"
        print(f"{where} -> {show_ctx(state.ctx)}")
    if isinstance(res, Reached):
        print(f"reached {res.port} {show_ctx(res.ctx)}")
    elif isinstance(res, Stuck):
        reason = "weakening" if res.reason == "weakening" else res.reason
        print(f"stuck: {reason}")
    elif isinstance(res, FuelExhaustedRun):
        print("stuck: fuel exhausted")
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="lamping", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file")
        p.add_argument("--mode", choices=["eal", "lal"], default="eal")
        p.add_argument("--translation", choices=["lt", "dlt"], default="dlt")
        p.add_argument("--max-steps", type=int, default=10 ** 5)

    p_check = sub.add_parser("check", help="verify a derivation file")
    p_check.add_argument("file")
    p_check.add_argument("--mode", choices=["eal", "lal"], default="eal")
    p_check.add_argument("--annotate", action="store_true",
                         help="reprint the derivation with judgement annotations")
    p_check.set_defaults(fn=cmd_check)

    p_run = sub.add_parser("run", help="full pipeline with report")
    common(p_run)
    p_run.add_argument("--strategy", choices=["sg", "pn-mlbl"], default="sg")
    p_run.add_argument("--probe-depth", type=int, default=4)
    p_run.add_argument("--dot", metavar="DIR")
    p_run.set_defaults(fn=cmd_run)

    p_trace = sub.add_parser("trace", help="print a token run transcript")
    common(p_trace)
    p_trace.add_argument("--edge", required=True)
    p_trace.add_argument("--ctx", required=True,
                         help='stacks "S1|...|Sk|T", e.g. "|pq" for k=1')
    p_trace.add_argument("--on", choices=["graph", "net"], default="graph")
    p_trace.set_defaults(fn=cmd_trace)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
