"""Deciding linearizability under the competing definitions.

``check`` searches for an extension, a choice of which pending invocations
take effect, and a legal sequential order. The definitions differ only in
which real-time precedence pairs that order has to respect:

* ``ORIGINAL`` respects precedence among operations completed in ``h``.
* ``AMENDED`` also respects it for pending invocations that take effect.
* ``ALT`` counts every pending invocation as an operation, so a pending
  invocation preceded by a response can never be dropped.
* ``LINPOINTS`` assigns each operation a point inside its interval; it is
  decided by :func:`linearcheck.linpoints.check_linpoints`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .history import (
    Event,
    History,
    HistoryError,
    Kind,
    OpDef,
    OperationInstance,
    PrecedencePair,
    Value,
    complete,
    equivalent,
    extend,
    is_sequential,
    is_well_formed,
    operations,
    ordinal_keys,
    pending_invocations,
    precedence,
)
from .specs import SpecEnvironment, SpecError, is_legal, validate_history

DEFAULT_MAX_OPS = 12


class SearchTooLarge(RuntimeError):
    """The history has more operations than the configured search cap."""


class Variant(enum.Enum):
    ORIGINAL = "original"
    AMENDED = "amended"
    ALT = "alt"
    LINPOINTS = "linpoints"


@dataclass(frozen=True)
class CompletionPlan:
    """Which pending invocations take effect, and with what results.

    ``chosen_responses`` is keyed by the invocation's index in the history.
    """

    linearized_pending: tuple[OperationInstance, ...] = ()
    dropped_pending: tuple[OperationInstance, ...] = ()
    chosen_responses: Mapping[int, tuple[Value, ...]] = field(default_factory=dict)

    def responses(self, h: History) -> list[Event]:
        out = []
        for op in self.linearized_pending:
            e = h.events[op.inv_index]
            out.append(Event(Kind.RES, e.process, e.obj, e.op, tuple(self.chosen_responses[op.inv_index])))
        return out

    def extension(self, h: History) -> History:
        return extend(h, self.responses(h))


@dataclass(frozen=True)
class Linearization:
    """A certificate for a positive verdict.

    ``order`` lists the invocation indices (in ``h``) of the linearized
    operations in the order they appear in ``seq_history``. ``points`` is only
    set for linearization-point witnesses: one point per entry of ``order``,
    a position on the real line where event ``i`` of ``h`` sits at ``i``.
    """

    plan: CompletionPlan
    order: tuple[int, ...]
    seq_history: History
    points: Optional[tuple[Fraction, ...]] = None


@dataclass(frozen=True)
class Verdict:
    linearizable: bool
    variant: Variant
    witness: Optional[Linearization] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.linearizable


def prepare(h: History, env: SpecEnvironment, max_ops: int) -> list[OperationInstance]:
    """Shared preconditions of every decision procedure."""
    if not is_well_formed(h):
        raise HistoryError("history is not well-formed")
    validate_history(h, env)
    ops = operations(h, OpDef.DEF5)
    if len(ops) > max_ops:
        raise SearchTooLarge(f"history has {len(ops)} operations, cap is {max_ops}")
    return ops


def build_witness(
    h: History, order: list[int], chosen: Mapping[int, tuple[Value, ...]], points=None
) -> Linearization:
    """Assemble plan and sequential history from an order of invocation indices."""
    pending = pending_invocations(h)
    partner = h._matching.partner
    placed = set(order)
    plan = CompletionPlan(
        linearized_pending=tuple(op for op in pending if op.inv_index in placed),
        dropped_pending=tuple(op for op in pending if op.inv_index not in placed),
        chosen_responses=dict(chosen),
    )
    events: list[Event] = []
    for i in order:
        call = h.events[i]
        j = partner[i]
        ret = h.events[j] if j is not None else Event(Kind.RES, call.process, call.obj, call.op, tuple(chosen[i]))
        events.append(call)
        events.append(ret)
    return Linearization(plan, tuple(order), History(tuple(events)), points)


def order_constraints(h: History, plan: CompletionPlan, variant: Variant) -> set[PrecedencePair]:
    """Precedence pairs the sequential order must contain, as operations of ``h``.

    Operations are the ``DEF5`` instances of ``h``: a pending invocation keeps
    ``res_index=None`` even when the plan completes it. Under ``ALT`` a pair
    whose later operation the plan drops cannot be satisfied.
    """
    if variant is Variant.LINPOINTS:
        raise ValueError("linearization points are not an order-constraint regime")
    if variant is Variant.ORIGINAL:
        return precedence(h, OpDef.DEF1)
    if variant is Variant.ALT:
        return precedence(h, OpDef.DEF5)
    ext = plan.extension(h)
    by_key = {k: OperationInstance(i, h._matching.partner[i]) for i, k in ordinal_keys(h).items()}
    ext_keys = ordinal_keys(ext)
    return {
        PrecedencePair(by_key[ext_keys[a.inv_index]], by_key[ext_keys[b.inv_index]])
        for a, b in precedence(ext, OpDef.DEF1)
    }


class _Search:
    """Depth-first interleaving construction with a memo of dead states."""

    def __init__(self, h: History, variant: Variant, env: SpecEnvironment, ops: list[OperationInstance]):
        self.h = h
        self.n = n = len(ops)
        events = h.events
        obj_names = list(dict.fromkeys(events[o.inv_index].obj for o in ops))
        self.specs = [env[x] for x in obj_names]
        obj_ix = {x: k for k, x in enumerate(obj_names)}
        self.inv_index = [o.inv_index for o in ops]
        self.obj = [obj_ix[events[o.inv_index].obj] for o in ops]
        self.name = [events[o.inv_index].op for o in ops]
        self.args = [events[o.inv_index].payload for o in ops]
        self.result = [events[o.res_index].payload if o.res_index is not None else None for o in ops]

        # Program order: each operation waits for its process's previous one.
        self.prev = [0] * n
        last: dict[str, int] = {}
        for k, o in enumerate(ops):
            p = events[o.inv_index].process
            if p in last:
                self.prev[k] = 1 << last[p]
            last[p] = k

        # preds[k]: operations that responded before k was invoked, i.e. the
        # earlier sides of the DEF5 precedence pairs ending at k.
        pos = {o.inv_index: k for k, o in enumerate(ops)}
        res_owner = {o.res_index: k for k, o in enumerate(ops) if o.res_index is not None}
        self.preds = [0] * n
        done = 0
        for i in range(len(events)):
            k = pos.get(i)
            if k is not None:
                self.preds[k] = done
            else:
                done |= 1 << res_owner[i]
        matched = 0
        for k, o in enumerate(ops):
            if o.res_index is not None:
                matched |= 1 << k
            elif variant is Variant.ORIGINAL:
                self.preds[k] = 0
        self.required = matched
        if variant is Variant.ALT:
            for k in range(n):
                if self.preds[k] and not matched >> k & 1:
                    self.required |= 1 << k

        self.dead: set = set()
        self.explored = 0
        self._steps: dict = {}
        self.order: list[int] = []
        self.chosen: dict[int, tuple[Value, ...]] = {}

    def outcomes(self, k: int, state):
        key = (k, state)
        hit = self._steps.get(key)
        if hit is None:
            hit = sorted(self.specs[self.obj[k]].step(state, self.name[k], self.args[k]), key=repr)
            self._steps[key] = hit
        return hit

    def run(self, placed: int, states: tuple) -> bool:
        self.explored += 1
        if placed & self.required == self.required:
            return True
        key = (placed, states)
        if key in self.dead:
            return False
        for k in range(self.n):
            bit = 1 << k
            if placed & bit or self.prev[k] & ~placed or self.preds[k] & ~placed:
                continue
            x = self.obj[k]
            want = self.result[k]
            for out, nxt in self.outcomes(k, states[x]):
                if want is not None and out != want:
                    continue
                self.order.append(k)
                if want is None:
                    self.chosen[k] = out
                if self.run(placed | bit, states[:x] + (nxt,) + states[x + 1 :]):
                    return True
                self.order.pop()
                self.chosen.pop(k, None)
        self.dead.add(key)
        return False


def check(h: History, variant: Variant, env: SpecEnvironment, max_ops: int = DEFAULT_MAX_OPS) -> Verdict:
    """Decide whether ``h`` is linearizable under ``variant``.

    Raises :class:`SearchTooLarge` beyond ``max_ops`` operations and
    :class:`~linearcheck.specs.ConfigurationError` for unmapped objects.
    """
    if variant is Variant.LINPOINTS:
        from .linpoints import check_linpoints

        return check_linpoints(h, env, max_ops=max_ops)
    ops = prepare(h, env, max_ops)
    search = _Search(h, variant, env, ops)
    initial = tuple(spec.initial_state for spec in search.specs)
    if not search.run(0, initial):
        return Verdict(False, variant, None, search.explored)
    order = [search.inv_index[k] for k in search.order]
    chosen = {search.inv_index[k]: out for k, out in search.chosen.items()}
    return Verdict(True, variant, build_witness(h, order, chosen), search.explored)


def _operation_order(s: History) -> list[tuple[str, int]]:
    """Ordinal keys of the operations of sequential ``s``, in order."""
    seen: dict[str, int] = {}
    out = []
    for e in s.events[::2]:
        k = seen.get(e.process, 0)
        seen[e.process] = k + 1
        out.append((e.process, k))
    return out


def _valid_plan(h: History, plan: CompletionPlan) -> bool:
    pending = {op.inv_index for op in pending_invocations(h)}
    t = [op.inv_index for op in plan.linearized_pending]
    d = [op.inv_index for op in plan.dropped_pending]
    if len(set(t)) != len(t) or len(set(d)) != len(d):
        return False
    if set(t) & set(d) or set(t) | set(d) != pending:
        return False
    return set(plan.chosen_responses) == set(t)


def _validate_points(h: History, env: SpecEnvironment, w: Linearization) -> bool:
    if w.points is None or len(w.points) != len(w.order) or len(set(w.points)) != len(w.points):
        return False
    partner = h._matching.partner
    t = {op.inv_index for op in w.plan.linearized_pending}
    expected = {i for i, e in enumerate(h.events) if e.kind is Kind.INV and partner[i] is not None} | t
    if set(w.order) != expected or len(w.order) != len(expected):
        return False
    for i, p in zip(w.order, w.points):
        if not p > i:
            return False
        j = partner[i]
        if j is not None and not p < j:
            return False
    # Shrink every operation onto its point.
    ranked = sorted(zip(w.points, w.order))
    events: list[Event] = []
    for _, i in ranked:
        call = h.events[i]
        j = partner[i]
        if j is not None:
            ret = h.events[j]
        else:
            ret = Event(Kind.RES, call.process, call.obj, call.op, tuple(w.plan.chosen_responses[i]))
        events += [call, ret]
    s = History(tuple(events))
    if s != w.seq_history:
        return False
    try:
        return is_legal(s, env)
    except SpecError:
        return False


def validate_witness(h: History, variant: Variant, env: SpecEnvironment, w: Linearization) -> bool:
    """Check a certificate against the definitions directly.

    Clauses: the plan partitions the pending invocations; ``seq_history`` is
    sequential and legal; it is equivalent to ``complete`` of the extension
    the plan describes; and it contains the variant's required precedence.
    Linearization-point witnesses are checked point by point instead.
    """
    try:
        if not is_well_formed(h) or not _valid_plan(h, w.plan):
            return False
        if variant is Variant.LINPOINTS:
            return _validate_points(h, env, w)
        s = w.seq_history
        if not (is_sequential(s) and is_well_formed(s)) or len(s) % 2:
            return False
        if not is_legal(s, env):
            return False
        if not equivalent(complete(w.plan.extension(h)), s):
            return False
        keys = ordinal_keys(h)
        rank = {key: r for r, key in enumerate(_operation_order(s))}
        for a, b in order_constraints(h, w.plan, variant):
            ra, rb = rank.get(keys[a.inv_index]), rank.get(keys[b.inv_index])
            if ra is None or rb is None or not ra < rb:
                return False
        return True
    except (HistoryError, SpecError, KeyError):
        return False
