"""Histories of invocation/response events and the constructions over them.

A history is a finite, immutable sequence of events. Everything here is a
pure function of its inputs: projections, ``complete``, extensions,
equivalence, sequentiality, the two readings of what counts as an
operation, and the real-time precedence order between operations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

Value = Union[int, str]


class HistoryError(ValueError):
    """Raised when a construction needs a well-formed history and gets another."""


class Kind(enum.Enum):
    INV = "inv"
    RES = "res"


class OpDef(enum.Enum):
    """Which events count as operations.

    ``DEF1`` pairs an invocation with its next matching response only.
    ``DEF5`` additionally treats a pending invocation as an operation.
    """

    DEF1 = "def1"
    DEF5 = "def5"


def _check_value(v: object) -> None:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise TypeError(f"payload values must be int or str, got {v!r}")
    if isinstance(v, str) and (not v or any(c.isspace() for c in v)):
        raise ValueError(f"token values must be nonempty and whitespace-free: {v!r}")


def _check_token(name: str, what: str) -> None:
    if not isinstance(name, str) or not name or any(c.isspace() for c in name):
        raise ValueError(f"{what} must be a nonempty token without whitespace: {name!r}")


@dataclass(frozen=True)
class Event:
    """One invocation or response.

    ``payload`` carries the arguments of an invocation or the results of a
    response. Integers and tokens are distinct values (``1 != "1"``).
    """

    kind: Kind
    process: str
    obj: str
    op: str
    payload: tuple[Value, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.kind, Kind):
            raise TypeError(f"kind must be a Kind, got {self.kind!r}")
        _check_token(self.process, "process")
        _check_token(self.obj, "object")
        _check_token(self.op, "op name")
        if not isinstance(self.payload, tuple):
            object.__setattr__(self, "payload", tuple(self.payload))
        for v in self.payload:
            _check_value(v)

    @property
    def is_inv(self) -> bool:
        return self.kind is Kind.INV

    @property
    def is_res(self) -> bool:
        return self.kind is Kind.RES

    def matches(self, inv: Event) -> bool:
        """True if this response answers ``inv`` (same process, object and op)."""
        return (
            self.kind is Kind.RES
            and inv.kind is Kind.INV
            and self.process == inv.process
            and self.obj == inv.obj
            and self.op == inv.op
        )

    def __str__(self) -> str:
        parts = [self.kind.value, self.process, self.obj, self.op]
        parts.extend(str(v) for v in self.payload)
        return " ".join(parts)


def inv(process: str, obj: str, op: str, *args: Value) -> Event:
    return Event(Kind.INV, process, obj, op, tuple(args))


def res(process: str, obj: str, op: str, *results: Value) -> Event:
    return Event(Kind.RES, process, obj, op, tuple(results))


class OperationInstance(NamedTuple):
    """An operation, located by event positions in its history.

    ``res_index`` is ``None`` for a pending invocation read as an operation.
    """

    inv_index: int
    res_index: Optional[int]

    @property
    def pending(self) -> bool:
        return self.res_index is None


class PrecedencePair(NamedTuple):
    earlier: OperationInstance
    later: OperationInstance


class _Matching(NamedTuple):
    well_formed: bool
    partner: tuple[Optional[int], ...]


@dataclass(frozen=True)
class History:
    """A finite sequence of events in real-time order."""

    events: tuple[Event, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.events, tuple):
            object.__setattr__(self, "events", tuple(self.events))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __getitem__(self, i: int) -> Event:
        return self.events[i]

    def __add__(self, other: Iterable[Event]) -> History:
        return History(self.events + tuple(other))

    def __str__(self) -> str:
        return "\n".join(str(e) for e in self.events)

    @cached_property
    def processes(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(e.process for e in self.events))

    @cached_property
    def objects(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(e.obj for e in self.events))

    @cached_property
    def _matching(self) -> _Matching:
        # Per process, at most one open invocation at any moment.
        partner: list[Optional[int]] = [None] * len(self.events)
        open_inv: dict[str, int] = {}
        ok = True
        for i, e in enumerate(self.events):
            j = open_inv.get(e.process)
            if e.kind is Kind.INV:
                if j is not None:
                    ok = False
                open_inv[e.process] = i
            else:
                if j is None or not e.matches(self.events[j]):
                    ok = False
                    continue
                partner[i] = j
                partner[j] = i
                del open_inv[e.process]
        return _Matching(ok, tuple(partner))


def history(events: Iterable[Event] = ()) -> History:
    return History(tuple(events))


def _require_well_formed(h: History) -> None:
    if not h._matching.well_formed:
        raise HistoryError("history is not well-formed")


def is_well_formed(h: History) -> bool:
    """Every process subhistory alternates matching inv/res pairs."""
    return h._matching.well_formed


def project_process(h: History, p: str) -> History:
    return History(tuple(e for e in h.events if e.process == p))


def project_object(h: History, x: str) -> History:
    return History(tuple(e for e in h.events if e.obj == x))


def pending_invocations(h: History) -> list[OperationInstance]:
    _require_well_formed(h)
    partner = h._matching.partner
    return [
        OperationInstance(i, None)
        for i, e in enumerate(h.events)
        if e.kind is Kind.INV and partner[i] is None
    ]


def complete(h: History) -> History:
    """Drop the pending invocations of ``h``."""
    _require_well_formed(h)
    partner = h._matching.partner
    return History(tuple(e for i, e in enumerate(h.events) if partner[i] is not None))


def extend(h: History, responses: Sequence[Event]) -> History:
    """Append responses to distinct pending invocations of ``h``."""
    _require_well_formed(h)
    open_by_process = {h.events[op.inv_index].process: op.inv_index for op in pending_invocations(h)}
    for e in responses:
        if e.kind is not Kind.RES:
            raise HistoryError(f"extension may only append responses, got {e}")
        i = open_by_process.pop(e.process, None)
        if i is None:
            raise HistoryError(f"no pending invocation left for response {e}")
        if not e.matches(h.events[i]):
            raise HistoryError(f"response {e} does not match pending {h.events[i]}")
    return History(h.events + tuple(responses))


def operations(h: History, interp: OpDef = OpDef.DEF1) -> list[OperationInstance]:
    """Operations of ``h`` in invocation order."""
    _require_well_formed(h)
    partner = h._matching.partner
    out = []
    for i, e in enumerate(h.events):
        if e.kind is not Kind.INV:
            continue
        j = partner[i]
        if j is not None or interp is OpDef.DEF5:
            out.append(OperationInstance(i, j))
    return out


def precedence(h: History, interp: OpDef = OpDef.DEF1) -> set[PrecedencePair]:
    """All pairs where the earlier operation responds before the later one is invoked."""
    ops = operations(h, interp)
    return {
        PrecedencePair(a, b)
        for a in ops
        if a.res_index is not None
        for b in ops
        if a.res_index < b.inv_index
    }


def equivalent(h1: History, h2: History) -> bool:
    """Same event sequence for every process."""
    procs = set(h1.processes) | set(h2.processes)
    return all(project_process(h1, p) == project_process(h2, p) for p in procs)


def is_sequential(h: History) -> bool:
    """Matching inv/res pairs back to back, with at most a trailing invocation."""
    ev = h.events
    n = len(ev)
    for i in range(0, n, 2):
        if ev[i].kind is not Kind.INV:
            return False
        if i + 1 < n and not ev[i + 1].matches(ev[i]):
            return False
    return True


def ordinal_keys(h: History, interp: OpDef = OpDef.DEF5) -> dict[int, tuple[str, int]]:
    """Map each operation's invocation index to ``(process, k)``.

    ``k`` counts the process's earlier invocations, so the key names the same
    operation in ``h``, any extension of it, ``complete`` of that extension,
    and every history equivalent to it.
    """
    seen: dict[str, int] = {}
    keys = {}
    for op in operations(h, interp):
        p = h.events[op.inv_index].process
        k = seen.get(p, 0)
        seen[p] = k + 1
        keys[op.inv_index] = (p, k)
    return keys
