"""Command-line front end.

Exit status: ``check`` returns 0 when linearizable and 1 when not; the
property commands return 0 without a violation and 1 with one. Any parse,
configuration or search-size failure returns 2.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .checker import DEFAULT_MAX_OPS, SearchTooLarge, Variant, check
from .corpus import emit_corpus
from .history import History, HistoryError
from .meta import InconsistencyError, check_locality, check_nonblocking, classify
from .specs import ConfigurationError, SpecError
from .trace import TraceError, format_value, parse_trace

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _describe(h: History, i: int) -> str:
    e = h.events[i]
    args = "".join(f" {format_value(v)}" for v in e.payload)
    return f"{e.process} {e.obj} {e.op}{args} (event {i})"


def _load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_trace(text)


def cmd_check(args) -> int:
    h, env = _load(args.trace)
    variant = Variant(args.definition)
    verdict = check(h, variant, env, args.max_ops)
    print(f"definition={variant.value} linearizable={_yn(verdict.linearizable)}")
    if verdict.linearizable:
        w = verdict.witness
        print("completion plan:")
        for op in w.plan.linearized_pending:
            result = " ".join(map(format_value, w.plan.chosen_responses[op.inv_index]))
            print(f"  complete {_describe(h, op.inv_index)} -> {result}")
        for op in w.plan.dropped_pending:
            print(f"  drop     {_describe(h, op.inv_index)}")
        if not w.plan.linearized_pending and not w.plan.dropped_pending:
            print("  (no pending invocations)")
        print("sequential order:")
        s = w.seq_history.events
        for k in range(0, len(s), 2):
            call, ret = s[k], s[k + 1]
            argv = "".join(f" {format_value(v)}" for v in call.payload)
            result = " ".join(map(format_value, ret.payload))
            line = f"  {k // 2 + 1}. {call.process} {call.obj} {call.op}{argv} -> {result}"
            if w.points is not None:
                line += f"  @ {w.points[k // 2]}"
            print(line)
    return EXIT_OK if verdict.linearizable else EXIT_NO


def cmd_classify(args) -> int:
    h, env = _load(args.trace)
    try:
        rec = classify(h, env, args.max_ops)
    except InconsistencyError as err:
        print(f"INCONSISTENT: {err}")
        return EXIT_NO
    print(rec)
    return EXIT_OK


def cmd_locality(args) -> int:
    h, env = _load(args.trace)
    variant = Variant(args.definition)
    report = check_locality(h, variant, env, args.max_ops)
    print(f"definition={variant.value}")
    for x, ok in report.per_object.items():
        print(f"object {x} linearizable={_yn(ok)}")
    print(f"global linearizable={_yn(report.global_)}")
    print("VIOLATION" if report.is_locality_violation else "no violation")
    return EXIT_NO if report.is_locality_violation else EXIT_OK


def cmd_nonblocking(args) -> int:
    h, env = _load(args.trace)
    variant = Variant(args.definition)
    report = check_nonblocking(h, variant, env, args.max_ops)
    print(f"definition={variant.value} linearizable={_yn(report.linearizable)}")
    if not report.linearizable:
        print("history is not linearizable; the property holds vacuously")
    elif not report.per_pending:
        print("no pending invocations of total operations")
    for i, payload in report.per_pending.items():
        if payload is None:
            print(f"pending {_describe(h, i)}: no response keeps the history linearizable")
        else:
            print(f"pending {_describe(h, i)}: response {' '.join(map(format_value, payload))}")
    print("VIOLATION" if report.is_nonblocking_violation else "no violation")
    return EXIT_NO if report.is_nonblocking_violation else EXIT_OK


def cmd_emit_corpus(args) -> int:
    for name in emit_corpus(args.directory):
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linearcheck", description="Check concurrent histories for linearizability.")
    sub = parser.add_subparsers(dest="command", required=True)
    definitions = [v.value for v in Variant]

    def add(name, func, help, definition=False, trace=True):
        p = sub.add_parser(name, help=help)
        if definition:
            p.add_argument("--definition", required=True, choices=definitions)
        if trace:
            p.add_argument("--max-ops", type=int, default=DEFAULT_MAX_OPS, metavar="N")
            p.add_argument("trace", help="trace file, or - for standard input")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "decide linearizability under one definition", definition=True)
    add("classify", cmd_classify, "verdicts under all four definitions")
    add("locality", cmd_locality, "compare per-object and whole-history verdicts", definition=True)
    add("nonblocking", cmd_nonblocking, "look for responses to pending total invocations", definition=True)
    p = add("emit-corpus", cmd_emit_corpus, "write the reference traces", trace=False)
    p.add_argument("directory")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TraceError, HistoryError, SpecError, ConfigurationError, SearchTooLarge, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
