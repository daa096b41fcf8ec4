"""Command line front end.

Exit codes: 0 on success, 1 on any validation or runtime error, 2 when a
run stops at the step limit before converging.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .concurrent import schedule_tsv, simulate_concurrent
from .dot import to_dot
from .dsl import CompositionDocument, _parse_literal, format_value, serialize_trace
from .errors import FlowError, ParseError
from .model import Composition, ExecutionState
from .semantics import default_registry
from .sequential import RunLimits, RunResult, run_to_convergence


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit code 2 reserved for step limits
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tokenflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, runnable=True):
        p.add_argument("file", help="composition document")
        p.add_argument(
            "--seed-override",
            action="append",
            default=[],
            metavar="NAME=LITERAL",
            help="replace an init value (repeatable)",
        )
        if runnable:
            p.add_argument("--max-steps", type=int, default=RunLimits().max_steps)
            p.add_argument("--quiet", action="store_true", help="summary only")

    p = sub.add_parser("validate", help="parse and structurally check a document")
    p.add_argument("file")

    p = sub.add_parser("run", help="run sequentially to convergence")
    add_common(p)
    p.add_argument(
        "--trace",
        default="-",
        metavar="PATH",
        help="write the trace to PATH instead of stdout",
    )

    p = sub.add_parser("step", help="fire a bounded number of steps")
    add_common(p, runnable=False)
    p.add_argument("--steps", type=int, default=1)

    p = sub.add_parser("simulate", help="concurrent run over virtual time")
    add_common(p)

    p = sub.add_parser("graph", help="print the composition as Graphviz dot")
    add_common(p, runnable=False)
    return parser


def _load(path: str, overrides: list[str]):
    text = Path(path).read_text(encoding="utf-8")
    doc = CompositionDocument.parse(text)
    for item in overrides:
        name, eq, literal = item.partition("=")
        if not eq or not name:
            raise ParseError(0, f"bad --seed-override {item!r}, want name=literal")
        doc.override(name.strip(), _parse_literal(literal.strip(), 0))
    return doc.build()


def _summary(comp: Composition, state: ExecutionState) -> str:
    parts = [
        f"{n.name}={format_value(state.values[n.index])}({state.marking[n.index].code})"
        for n in comp.data
    ]
    return "final: " + " ".join(parts)


def _finish(comp, result: RunResult, args, out, trace_text: str) -> int:
    if not args.quiet:
        out.write(trace_text)
    out.write(_summary(comp, result.final_state) + "\n")
    return 0 if result.converged else 2


def main(argv=None) -> int:
    parser = _build_parser()
    out = sys.stdout
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "validate":
            comp, _, _ = _load(args.file, [])
            out.write(
                f"ok: {len(comp.data)} data nodes, {len(comp.operators)} operators\n"
            )
            return 0

        comp, state, durations = _load(args.file, args.seed_override)
        registry = default_registry()

        if args.command == "graph":
            out.write(to_dot(comp, state.marking))
            return 0

        if args.command == "step":
            from .sequential import step as fire_once

            events = []
            for _ in range(max(args.steps, 0)):
                outcome = fire_once(comp, state, registry)
                if outcome is None:
                    break
                state, event = outcome
                events.append(event)
            out.write(serialize_trace(events))
            out.write(_summary(comp, state) + "\n")
            return 0

        limits = RunLimits(max_steps=args.max_steps)
        if args.command == "run":
            result = run_to_convergence(comp, state, registry, limits)
            trace_text = serialize_trace(result.trace)
            if args.trace != "-":
                Path(args.trace).write_text(trace_text, encoding="utf-8")
                trace_text = ""
            return _finish(comp, result, args, out, trace_text)

        if args.command == "simulate":
            result, schedule = simulate_concurrent(
                comp, state, registry, durations, limits
            )
            text = serialize_trace(result.trace) + schedule_tsv(schedule)
            return _finish(comp, result, args, out, text)

        raise _UsageError(f"unknown command {args.command!r}")
    except FlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
