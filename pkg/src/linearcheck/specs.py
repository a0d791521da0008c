"""Sequential specifications as step relations, and legality by replay.

A spec maps ``(state, op, args)`` to the finite set of ``(results, state')``
outcomes the object allows. Legal sequential histories are exactly those
that replay through the relation, so the set they form is prefix-closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping

from .history import Event, History, HistoryError, Kind, Value, is_sequential, is_well_formed, project_object

State = Hashable
Outcome = tuple[tuple[Value, ...], State]
SpecEnvironment = Mapping[str, "SeqSpec"]

OK = "ok"
EMPTY = "empty"


class SpecError(ValueError):
    """Unknown operation or wrong arity for an object's spec."""


class ConfigurationError(ValueError):
    """A history mentions an object the environment does not map."""


@dataclass(frozen=True)
class Signature:
    n_args: int
    n_results: int
    total: bool = True


@dataclass(frozen=True)
class SeqSpec:
    kind: str
    initial_state: State
    signatures: Mapping[str, Signature]
    _step: Callable[[Any, str, tuple], frozenset] = field(repr=False, compare=False)
    constants: tuple[Value, ...] = ()

    def signature(self, op: str) -> Signature:
        try:
            return self.signatures[op]
        except KeyError:
            raise SpecError(f"{self.kind} has no operation {op!r}") from None

    def step(self, state: State, op: str, args: tuple[Value, ...]) -> frozenset[Outcome]:
        sig = self.signature(op)
        if len(args) != sig.n_args:
            raise SpecError(f"{self.kind}.{op} takes {sig.n_args} argument(s), got {len(args)}")
        return self._step(state, op, args)

    def totality(self, op: str) -> bool:
        return self.signature(op).total

    def validate(self, e: Event) -> None:
        """Reject an event whose payload arity the spec does not accept."""
        sig = self.signature(e.op)
        want = sig.n_args if e.kind is Kind.INV else sig.n_results
        if len(e.payload) != want:
            what = "argument" if e.kind is Kind.INV else "result"
            raise SpecError(f"{self.kind}.{e.op} takes {want} {what}(s), got {len(e.payload)}")


def _register_step(state, op, args):
    if op == "Read":
        return frozenset({((state,), state)})
    return frozenset({((OK,), args[0])})


def _queue_step(state, op, args):
    if op == "Enq":
        return frozenset({((OK,), state + (args[0],))})
    if not state:
        return frozenset({((EMPTY,), state)})
    return frozenset({((state[0],), state[1:])})


def _stack_step(state, op, args):
    if op == "Push":
        return frozenset({((OK,), state + (args[0],))})
    if not state:
        return frozenset({((EMPTY,), state)})
    return frozenset({((state[-1],), state[:-1])})


def _blocking_stack_step(state, op, args):
    if op == "Pop" and not state:
        return frozenset()
    return _stack_step(state, op, args)


def register_spec() -> SeqSpec:
    """Read/Write register initialised to 0."""
    return SeqSpec(
        "register",
        0,
        {"Read": Signature(0, 1), "Write": Signature(1, 1)},
        _register_step,
        constants=(0, OK),
    )


def fifo_queue_spec() -> SeqSpec:
    """FIFO queue, initially empty; ``Deq`` on empty answers ``empty``."""
    return SeqSpec(
        "queue",
        (),
        {"Enq": Signature(1, 1), "Deq": Signature(0, 1)},
        _queue_step,
        constants=(OK, EMPTY),
    )


def stack_spec() -> SeqSpec:
    return SeqSpec(
        "stack",
        (),
        {"Push": Signature(1, 1), "Pop": Signature(0, 1)},
        _stack_step,
        constants=(OK, EMPTY),
    )


def blocking_stack_spec() -> SeqSpec:
    """Stack whose ``Pop`` cannot complete while the stack is empty."""
    return SeqSpec(
        "blocking-stack",
        (),
        {"Push": Signature(1, 1), "Pop": Signature(0, 1, total=False)},
        _blocking_stack_step,
        constants=(OK,),
    )


SPEC_FACTORIES: dict[str, Callable[[], SeqSpec]] = {
    "register": register_spec,
    "queue": fifo_queue_spec,
    "stack": stack_spec,
    "blocking-stack": blocking_stack_spec,
}


def spec_for(token: str) -> SeqSpec:
    try:
        return SPEC_FACTORIES[token]()
    except KeyError:
        raise SpecError(f"unknown spec {token!r}; expected one of {sorted(SPEC_FACTORIES)}") from None


def validate_history(h: History, env: SpecEnvironment) -> None:
    """Check that every object is mapped and every payload has the right arity."""
    seen = set()
    for e in h.events:
        sig = (e.obj, e.kind is Kind.INV, e.op, len(e.payload))
        if sig in seen:
            continue
        seen.add(sig)
        spec = env.get(e.obj)
        if spec is None:
            raise ConfigurationError(f"object {e.obj!r} has no sequential specification")
        spec.validate(e)


def replay_object(s: History, spec: SeqSpec) -> bool:
    """Replay a single-object sequential history through ``spec``."""
    states = {spec.initial_state}
    ev = s.events
    for i in range(0, len(ev) - 1, 2):
        call, ret = ev[i], ev[i + 1]
        states = {
            nxt
            for st in states
            for out, nxt in spec.step(st, call.op, call.payload)
            if out == ret.payload
        }
        if not states:
            return False
    return True


def is_legal(s: History, env: SpecEnvironment) -> bool:
    """Every object subhistory of the sequential history ``s`` replays.

    A trailing lone invocation is legal whenever the prefix before it is.
    """
    if not (is_sequential(s) and is_well_formed(s)):
        raise HistoryError("legality is defined for sequential histories only")
    validate_history(s, env)
    return all(replay_object(project_object(s, x), env[x]) for x in s.objects)
