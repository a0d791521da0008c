"""Locality, nonblocking and classification checks, plus history corpora.

Corpora come in two flavours: :func:`generate_history` draws seeded random
histories from a simulated execution, and :func:`enumerate_histories`
lists every small register history exhaustively.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Optional, Sequence

from .checker import DEFAULT_MAX_OPS, Variant, check
from .history import Event, History, Kind, Value, extend, inv, pending_invocations, project_object, res
from .specs import OK, SpecEnvironment, spec_for


class InconsistencyError(AssertionError):
    """The definitions' verdicts break a relation they must satisfy."""


@dataclass(frozen=True)
class LocalityReport:
    per_object: dict[str, bool]
    global_: bool

    @property
    def is_locality_violation(self) -> bool:
        return all(self.per_object.values()) and not self.global_


@dataclass(frozen=True)
class NonblockingReport:
    """Per pending invocation of a total operation: a result that keeps the
    history linearizable when appended, or ``None`` if none exists.

    Only filled in when the history itself is linearizable; otherwise the
    property holds vacuously.
    """

    linearizable: bool
    per_pending: dict[int, Optional[tuple[Value, ...]]] = field(default_factory=dict)

    @property
    def is_nonblocking_violation(self) -> bool:
        return self.linearizable and any(r is None for r in self.per_pending.values())

    @property
    def blocked(self) -> list[int]:
        return [i for i, r in self.per_pending.items() if r is None]


REGIONS = ("INSIDE_ALT", "AMENDED_ONLY", "ORIGINAL_ONLY", "OUTSIDE")


@dataclass(frozen=True)
class ClassificationRecord:
    original: bool
    amended: bool
    alt: bool
    linpoints: bool

    @property
    def region(self) -> str:
        if self.alt:
            return "INSIDE_ALT"
        if self.amended:
            return "AMENDED_ONLY"
        if self.original:
            return "ORIGINAL_ONLY"
        return "OUTSIDE"

    def __str__(self) -> str:
        yn = {True: "yes", False: "no"}
        return (
            f"original={yn[self.original]} amended={yn[self.amended]} "
            f"alt={yn[self.alt]} linpoints={yn[self.linpoints]} region={self.region}"
        )


def check_locality(
    h: History, variant: Variant, env: SpecEnvironment, max_ops: int = DEFAULT_MAX_OPS
) -> LocalityReport:
    per_object = {
        x: check(project_object(h, x), variant, {x: env[x]}, max_ops).linearizable for x in h.objects
    }
    whole = check(h, variant, env, max_ops).linearizable
    return LocalityReport(per_object, whole)


def response_candidates(h: History, env: SpecEnvironment, inv_index: int, witness=None) -> list[tuple]:
    """Results to try for a pending invocation, most promising first.

    Starts with what a witness of ``h`` already gives: the result it chose
    for the invocation, or the result of running the invocation after the
    witness. Then every tuple over the history's values and the spec's
    constants, which covers every result the built-in specs can produce.
    """
    call = h.events[inv_index]
    spec = env[call.obj]
    seen: dict[tuple, None] = {}
    if witness is not None:
        if inv_index in witness.plan.chosen_responses:
            seen[tuple(witness.plan.chosen_responses[inv_index])] = None
        else:
            state = spec.initial_state
            s = project_object(witness.seq_history, call.obj)
            for a, b in zip(s.events[::2], s.events[1::2]):
                state = next(nxt for out, nxt in sorted(spec.step(state, a.op, a.payload), key=repr) if out == b.payload)
            for out, _ in sorted(spec.step(state, call.op, call.payload), key=repr):
                seen[tuple(out)] = None
    values: dict[Value, None] = {}
    for e in h.events:
        values.update(dict.fromkeys(e.payload))
    values.update(dict.fromkeys(spec.constants))
    for combo in product(list(values), repeat=spec.signature(call.op).n_results):
        seen.setdefault(tuple(combo), None)
    return list(seen)


def check_nonblocking(
    h: History, variant: Variant, env: SpecEnvironment, max_ops: int = DEFAULT_MAX_OPS
) -> NonblockingReport:
    verdict = check(h, variant, env, max_ops)
    if not verdict.linearizable:
        return NonblockingReport(False)
    per_pending: dict[int, Optional[tuple]] = {}
    for op in pending_invocations(h):
        call = h.events[op.inv_index]
        if not env[call.obj].totality(call.op):
            continue
        per_pending[op.inv_index] = None
        for payload in response_candidates(h, env, op.inv_index, verdict.witness):
            ext = extend(h, [Event(Kind.RES, call.process, call.obj, call.op, payload)])
            if check(ext, variant, env, max_ops).linearizable:
                per_pending[op.inv_index] = payload
                break
    return NonblockingReport(True, per_pending)


def classify(h: History, env: SpecEnvironment, max_ops: int = DEFAULT_MAX_OPS) -> ClassificationRecord:
    """Verdicts under all four definitions, checked against the inclusions
    alt => amended => original and amended == linpoints."""
    got = {v: check(h, v, env, max_ops).linearizable for v in Variant}
    rec = ClassificationRecord(got[Variant.ORIGINAL], got[Variant.AMENDED], got[Variant.ALT], got[Variant.LINPOINTS])
    if (rec.alt and not rec.amended) or (rec.amended and not rec.original):
        raise InconsistencyError(f"inclusion chain broken: {rec}")
    if rec.amended != rec.linpoints:
        raise InconsistencyError(f"amended and linearization-point verdicts differ: {rec}")
    return rec


# --------------------------------------------------------------------------
# Random histories

_OPS = {
    "register": (("Read", False), ("Write", True)),
    "queue": (("Enq", True), ("Deq", False)),
    "stack": (("Push", True), ("Pop", False)),
    "blocking-stack": (("Push", True), ("Pop", False)),
}
SPEC_KINDS = tuple(_OPS)
PROCESS_NAMES = ("A", "B", "C")
OBJECT_NAMES = ("x", "y")


@dataclass(frozen=True)
class GenParams:
    processes: int = 2
    objects: int = 1
    operations: int = 6
    spec_kinds: tuple[str, ...] = SPEC_KINDS
    max_corruptions: int = 1
    max_truncations: int = 2

    def __post_init__(self) -> None:
        if not 1 <= self.processes <= 3:
            raise ValueError("processes must be in 1..3")
        if not 1 <= self.objects <= 2:
            raise ValueError("objects must be in 1..2")
        if not 0 <= self.operations <= 8:
            raise ValueError("operations must be in 0..8")
        for k in self.spec_kinds:
            if k not in _OPS:
                raise ValueError(f"unknown spec kind {k!r}")


@dataclass(frozen=True)
class GeneratedHistory:
    history: History
    env: SpecEnvironment
    corrupted: int
    truncated: int


def generate_history(seed: int, params: GenParams = GenParams()) -> GeneratedHistory:
    """A random well-formed history, reproducible from ``seed``.

    Simulates processes invoking operations, each taking effect atomically on
    the object at some moment before its response, so the raw history is
    linearizable. Then up to ``max_truncations`` final responses are removed
    (their invocations become pending) and up to ``max_corruptions``
    response payloads are replaced with other values.
    """
    rng = random.Random(seed)
    procs = PROCESS_NAMES[: params.processes]
    objs = OBJECT_NAMES[: params.objects]
    env = {x: spec_for(rng.choice(params.spec_kinds)) for x in objs}
    state = {x: env[x].initial_state for x in objs}
    values = (0, 1, 2) if any(s.kind == "register" for s in env.values()) else (1, 2, 3)

    events: list[Event] = []
    # process -> [obj, op, args, result or None once invoked]
    running: dict[str, list] = {}
    budget = params.operations
    while True:
        moves = []
        if budget:
            moves += [("inv", p) for p in procs if p not in running]
        for p, call in running.items():
            if call[3] is None:
                x, op, args = call[0], call[1], call[2]
                if env[x].step(state[x], op, args):
                    moves.append(("effect", p))
            else:
                moves.append(("res", p))
        if not moves:
            break
        kind, p = rng.choice(moves)
        if kind == "inv":
            x = rng.choice(objs)
            op, takes_arg = rng.choice(_OPS[env[x].kind])
            args = (rng.choice(values),) if takes_arg else ()
            running[p] = [x, op, args, None]
            events.append(inv(p, x, op, *args))
            budget -= 1
        elif kind == "effect":
            x, op, args, _ = running[p]
            out, nxt = sorted(env[x].step(state[x], op, args), key=repr)[0]
            state[x] = nxt
            running[p][3] = out
        else:
            x, op, _, out = running.pop(p)
            events.append(res(p, x, op, *out))

    truncated = 0
    for _ in range(rng.randint(0, params.max_truncations)):
        last_of = {}
        for i, e in enumerate(events):
            last_of[e.process] = i
        tails = [i for i in last_of.values() if events[i].kind is Kind.RES]
        if not tails:
            break
        del events[rng.choice(tails)]
        truncated += 1

    corrupted = 0
    res_ix = [i for i, e in enumerate(events) if e.kind is Kind.RES and e.payload]
    pool = sorted({v for e in events for v in e.payload} | {0, 1, 2, 3, OK, "empty"}, key=repr)
    for i in rng.sample(res_ix, min(len(res_ix), rng.randint(0, params.max_corruptions))):
        e = events[i]
        choices = [v for v in pool if (v,) != e.payload]
        events[i] = Event(e.kind, e.process, e.obj, e.op, (rng.choice(choices),))
        corrupted += 1
    return GeneratedHistory(History(tuple(events)), env, corrupted, truncated)


# --------------------------------------------------------------------------
# Exhaustive small histories


def _register_items(obj: str, values: Sequence[int]):
    """(invocation args, results) per register call; results None when pending."""
    matched = [(obj, "Read", (), (v,)) for v in values] + [(obj, "Write", (v,), (OK,)) for v in values]
    pending = [(obj, "Read", (), None)] + [(obj, "Write", (v,), None) for v in values]
    return matched, pending


def _process_sequences(p: str, objects: Sequence[str], max_invocations: int, values: Sequence[int]):
    matched, pending = [], []
    for x in objects:
        m, q = _register_items(x, values)
        matched += m
        pending += q
    cache: dict = {}

    def ev(kind: Kind, obj: str, op: str, payload: tuple) -> Event:
        key = (kind, obj, op, payload)
        if key not in cache:
            cache[key] = Event(kind, p, obj, op, payload)
        return cache[key]

    out = [()]
    for k in range(1, max_invocations + 1):
        for prefix in product(matched, repeat=k - 1):
            body = []
            for x, op, args, results in prefix:
                body += [ev(Kind.INV, x, op, args), ev(Kind.RES, x, op, results)]
            for x, op, args, results in matched:
                out.append(tuple(body + [ev(Kind.INV, x, op, args), ev(Kind.RES, x, op, results)]))
            for x, op, args, _ in pending:
                out.append(tuple(body + [ev(Kind.INV, x, op, args)]))
    return out


def _normal_merges(seqs: list[tuple], rank: dict[str, int]) -> Iterator[tuple]:
    """Merges of per-process sequences in commutation normal form.

    Two adjacent events of the same kind from different processes commute
    without changing any verdict; the normal form keeps each maximal run of
    same-kind events sorted by process.
    """
    n = len(seqs)
    pos = [0] * n
    total = sum(len(s) for s in seqs)
    out: list[Event] = []

    def rec(last_kind, last_rank):
        if len(out) == total:
            yield tuple(out)
            return
        for i in range(n):
            if pos[i] == len(seqs[i]):
                continue
            e = seqs[i][pos[i]]
            if e.kind is last_kind and rank[e.process] < last_rank:
                continue
            out.append(e)
            pos[i] += 1
            yield from rec(e.kind, rank[e.process])
            pos[i] -= 1
            out.pop()

    yield from rec(None, -1)


def _all_merges(seqs: list[tuple]) -> Iterator[tuple]:
    n = len(seqs)
    pos = [0] * n
    total = sum(len(s) for s in seqs)
    out: list[Event] = []

    def rec():
        if len(out) == total:
            yield tuple(out)
            return
        for i in range(n):
            if pos[i] < len(seqs[i]):
                out.append(seqs[i][pos[i]])
                pos[i] += 1
                yield from rec()
                pos[i] -= 1
                out.pop()

    yield from rec()


def normal_form(h: History, processes: Sequence[str]) -> tuple:
    """Comparable key of ``h`` up to process renaming and commutation."""
    best = None
    for perm in permutations(processes):
        rename = dict(zip(processes, perm))
        rank = {p: k for k, p in enumerate(processes)}
        runs: list[list] = []
        for e in h.events:
            key = (e.kind.value, rank[rename[e.process]], e.obj, e.op, tuple(map(repr, e.payload)))
            if runs and runs[-1][0][0] == key[0]:
                runs[-1].append(key)
            else:
                runs.append([key])
        form = tuple(k for run in runs for k in sorted(run))
        if best is None or form < best:
            best = form
    return best


def rename_processes(h: History, mapping: dict[str, str]) -> History:
    return History(tuple(Event(e.kind, mapping.get(e.process, e.process), e.obj, e.op, e.payload) for e in h.events))


def enumerate_histories(
    processes: Sequence[str] = ("A", "B"),
    objects: Sequence[str] = ("r",),
    max_invocations: int = 3,
    values: Sequence[int] = (0, 1),
    reduced: bool = True,
) -> Iterator[History]:
    """Every register history within the bounds.

    Each process makes up to ``max_invocations`` calls on ``objects``, with
    written values and read results from ``values``; only the last call of a
    process may be pending. With ``reduced`` one representative per class of
    histories equal up to process renaming and commutation of adjacent
    same-kind events of different processes is produced; all four
    definitions give every member of a class the same verdict.
    """
    per_process = [_process_sequences(p, objects, max_invocations, values) for p in processes]
    rank = {p: k for k, p in enumerate(processes)}
    # id(event) -> (kind, process, rest); the events outlive the loop below
    info = {}
    for seqs in per_process:
        for seq in seqs:
            for e in seq:
                info[id(e)] = (e.kind.value, e.process, (e.obj, e.op, tuple(map(repr, e.payload))))
    renamings = [
        {p: k for p, k in zip(processes, perm)} for perm in permutations(range(len(processes)))
    ][1:]
    for combo in product(*per_process):
        seqs = list(combo)
        if not reduced:
            for merged in _all_merges(seqs):
                yield History(merged)
            continue
        for merged in _normal_merges(seqs, rank):
            keys = [info[id(e)] for e in merged]
            own = tuple((k, rank[p], rest) for k, p, rest in keys)
            if any(_runs_sorted(keys, ren) < own for ren in renamings):
                continue
            yield History(merged)


def _runs_sorted(keys, ren: dict[str, int]) -> tuple:
    out: list = []
    run: list = []
    for k, p, rest in keys:
        if run and run[0][0] != k:
            out += sorted(run)
            run = []
        run.append((k, ren[p], rest))
    return tuple(out + sorted(run))


def register_env_for(objects: Sequence[str]) -> SpecEnvironment:
    return {x: spec_for("register") for x in objects}
