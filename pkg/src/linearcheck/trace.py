"""Plain-text trace format.

One item per line; ``#`` starts a comment, blank lines are ignored::

    object r register
    inv A r Read
    res A r Read 1
    inv B r Write 1

Values are decimal integers or bare tokens. Events keep line order.
"""

from __future__ import annotations

import re
from typing import Optional

from .history import Event, History, Kind, Value
from .specs import SPEC_FACTORIES, SpecEnvironment, SpecError, spec_for

_INT = re.compile(r"-?[0-9]+")


class TraceError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_value(tok: str) -> Value:
    return int(tok) if _INT.fullmatch(tok) else tok


def format_value(v: Value) -> str:
    if isinstance(v, str) and _INT.fullmatch(v):
        raise ValueError(f"token {v!r} would read back as an integer")
    return _token(str(v))


def _token(s: str) -> str:
    if "#" in s:
        raise ValueError(f"token {s!r} contains the comment marker")
    return s


def parse_trace(text: str) -> tuple[History, SpecEnvironment]:
    env: dict = {}
    events: list[Event] = []
    open_inv: dict[str, Event] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *rest = line.split()
        if word == "object":
            if len(rest) != 2:
                raise TraceError(lineno, "expected 'object <name> <spec>'")
            name, token = rest
            if token not in SPEC_FACTORIES:
                raise TraceError(lineno, f"unknown spec {token!r}; expected one of {', '.join(SPEC_FACTORIES)}")
            if name in env:
                raise TraceError(lineno, f"object {name!r} declared twice")
            env[name] = spec_for(token)
            continue
        if word not in ("inv", "res"):
            raise TraceError(lineno, f"expected 'object', 'inv' or 'res', got {word!r}")
        if len(rest) < 3:
            raise TraceError(lineno, f"expected '{word} <process> <object> <op> [values...]'")
        process, obj, op, *vals = rest
        if obj not in env:
            raise TraceError(lineno, f"object {obj!r} is not declared")
        e = Event(Kind.INV if word == "inv" else Kind.RES, process, obj, op, tuple(parse_value(v) for v in vals))
        try:
            env[obj].validate(e)
        except SpecError as err:
            raise TraceError(lineno, str(err)) from None
        if e.kind is Kind.INV:
            if process in open_inv:
                raise TraceError(lineno, f"process {process} invokes while {open_inv[process]} is pending")
            open_inv[process] = e
        else:
            call = open_inv.get(process)
            if call is None:
                raise TraceError(lineno, f"response with no pending invocation by {process}")
            if call.obj != obj:
                raise TraceError(lineno, f"response on {obj} but pending invocation {call} is on {call.obj}")
            if call.op != op:
                raise TraceError(lineno, f"response op {op} does not match pending invocation {call}")
            del open_inv[process]
        events.append(e)
    return History(tuple(events)), env


def serialize_trace(h: History, env: SpecEnvironment, comment: Optional[str] = None) -> str:
    """Canonical rendering; ``parse_trace`` reads it back to ``(h, env)``."""
    lines = []
    if comment:
        lines += [f"# {c}" if c else "#" for c in comment.splitlines()]
    for name, spec in env.items():
        lines.append(f"object {_token(name)} {spec.kind}")
    for e in h.events:
        words = [e.kind.value, _token(e.process), _token(e.obj), _token(e.op), *map(format_value, e.payload)]
        lines.append(" ".join(words))
    return "".join(line + "\n" for line in lines)
