"""The reference executions, as histories with their environments."""

from __future__ import annotations

from pathlib import Path

from .history import History, inv, res
from .specs import SpecEnvironment, blocking_stack_spec, fifo_queue_spec, register_spec

# register r initialised to 0
H1 = History((
    inv("A", "r", "Read"),
    res("A", "r", "Read", 1),
    inv("B", "r", "Write", 1),
))
H1_PRIME = H1 + [res("B", "r", "Write", "ok")]
S1 = History((
    inv("B", "r", "Write", 1),
    res("B", "r", "Write", "ok"),
    inv("A", "r", "Read"),
    res("A", "r", "Read", 1),
))

# FIFO queue q initially empty
H2 = History((
    inv("A", "q", "Enq", "x"),
    res("A", "q", "Enq", "ok"),
    inv("B", "q", "Enq", "y"),
    inv("A", "q", "Deq"),
    res("A", "q", "Deq", "y"),
))
H2_PRIME = H2 + [res("B", "q", "Enq", "ok")]
S2 = History((
    inv("B", "q", "Enq", "y"),
    res("B", "q", "Enq", "ok"),
    inv("A", "q", "Enq", "x"),
    res("A", "q", "Enq", "ok"),
    inv("A", "q", "Deq"),
    res("A", "q", "Deq", "y"),
))

# registers x and y initialised to 0; each object subhistory is shaped like H1
H_TWO_REGISTERS = History((
    inv("A", "x", "Read"),
    inv("B", "y", "Read"),
    res("A", "x", "Read", 1),
    res("B", "y", "Read", 1),
    inv("A", "y", "Write", 1),
    inv("B", "x", "Write", 1),
))

# sequential history over x and y that reverses B's two operations
S_REVERSED_B = History((
    inv("B", "x", "Write", 1),
    res("B", "x", "Write", "ok"),
    inv("A", "x", "Read"),
    res("A", "x", "Read", 1),
    inv("A", "y", "Write", 1),
    res("A", "y", "Write", "ok"),
    inv("B", "y", "Read"),
    res("B", "y", "Read", 1),
))

# blocking stack s initially empty
HS = History((
    inv("A", "s", "Push", 1),
    res("A", "s", "Push", "ok"),
    inv("B", "s", "Pop"),
    res("B", "s", "Pop", 1),
    inv("B", "s", "Pop"),
))


def register_env(*names: str) -> SpecEnvironment:
    return {x: register_spec() for x in names}


REGISTER_ENV = register_env("r")
QUEUE_ENV = {"q": fifo_queue_spec()}
TWO_REGISTER_ENV = register_env("x", "y")
BLOCKING_STACK_ENV = {"s": blocking_stack_spec()}

# file name -> (history, env)
REFERENCE_TRACES: dict[str, tuple[History, SpecEnvironment]] = {
    "h1.trace": (H1, REGISTER_ENV),
    "h1_prime.trace": (H1_PRIME, REGISTER_ENV),
    "s1.trace": (S1, REGISTER_ENV),
    "h2.trace": (H2, QUEUE_ENV),
    "h2_prime.trace": (H2_PRIME, QUEUE_ENV),
    "s2.trace": (S2, QUEUE_ENV),
    "h_two_registers.trace": (H_TWO_REGISTERS, TWO_REGISTER_ENV),
    "s_fig4.trace": (S_REVERSED_B, TWO_REGISTER_ENV),
    "hs.trace": (HS, BLOCKING_STACK_ENV),
}

TITLES = {
    "h1.trace": "H1, a read returning the value of a later pending write",
    "h1_prime.trace": "H1', H1 extended with a response to the write",
    "s1.trace": "S1, a linearization of H1 under the original definition",
    "h2.trace": "H2, a dequeue returning the item of a later pending enqueue",
    "h2_prime.trace": "H2', H2 extended with a response to B's enqueue",
    "s2.trace": "S2, a linearization of H2 under the original definition",
    "h_two_registers.trace": "H, two registers; each object subhistory resembles H1",
    "s_fig4.trace": "S, a sequential history with B's operations reversed",
    "hs.trace": "Hs, a second pop that cannot complete on an empty stack",
}


def emit_corpus(directory) -> list[str]:
    """Write the canonical reference traces into ``directory``; return file names."""
    from .trace import serialize_trace

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = []
    for name, (h, env) in REFERENCE_TRACES.items():
        (d / name).write_text(serialize_trace(h, env, comment=TITLES[name]), encoding="utf-8")
        names.append(name)
    return names
