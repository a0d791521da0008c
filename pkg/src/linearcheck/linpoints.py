"""Linearizability by linearization points.

Sweeps the history left to right. Between two consecutive events the
search may fire any invoked, not yet linearized operation at a fresh point;
crossing a response requires its operation to have fired already. Pending
invocations still open at the end of the history are dropped. No
precedence relation is computed anywhere on this path.
"""

from __future__ import annotations

from fractions import Fraction

from .checker import DEFAULT_MAX_OPS, Variant, Verdict, build_witness, prepare
from .history import History
from .specs import SpecEnvironment


def check_linpoints(h: History, env: SpecEnvironment, max_ops: int = DEFAULT_MAX_OPS) -> Verdict:
    ops = prepare(h, env, max_ops)
    events = h.events
    n_events = len(events)
    objs = list(dict.fromkeys(events[o.inv_index].obj for o in ops))
    specs = [env[x] for x in objs]
    slot = {x: k for k, x in enumerate(objs)}

    # Per event: ('inv', op) or ('res', op).
    role: list[tuple[str, int]] = []
    op_at = {o.inv_index: k for k, o in enumerate(ops)}
    res_of = {o.res_index: k for k, o in enumerate(ops) if o.res_index is not None}
    for i in range(n_events):
        role.append(("inv", op_at[i]) if i in op_at else ("res", res_of[i]))
    obj = [slot[events[o.inv_index].obj] for o in ops]
    name = [events[o.inv_index].op for o in ops]
    args = [events[o.inv_index].payload for o in ops]
    result = [events[o.res_index].payload if o.res_index is not None else None for o in ops]

    dead: set = set()
    steps: dict = {}
    fired: list[tuple[int, int]] = []  # (gap, op)
    chosen: dict[int, tuple] = {}
    explored = 0

    def sweep(gap: int, is_open: int, done: int, states: tuple) -> bool:
        # gap g sits between event g-1 and event g
        nonlocal explored
        explored += 1
        if gap == n_events:
            return True
        key = (gap, done, states)
        if key in dead:
            return False
        for k in range(len(ops)):
            bit = 1 << k
            if not is_open & bit:
                continue
            x = obj[k]
            outcomes = steps.get((k, states[x]))
            if outcomes is None:
                outcomes = steps[k, states[x]] = sorted(specs[x].step(states[x], name[k], args[k]), key=repr)
            for out, nxt in outcomes:
                if result[k] is not None and out != result[k]:
                    continue
                fired.append((gap, k))
                if result[k] is None:
                    chosen[k] = out
                if sweep(gap, is_open & ~bit, done | bit, states[:x] + (nxt,) + states[x + 1 :]):
                    return True
                fired.pop()
                chosen.pop(k, None)
        what, k = role[gap]
        if what == "inv":
            if sweep(gap + 1, is_open | 1 << k, done, states):
                return True
        elif done >> k & 1:
            if sweep(gap + 1, is_open, done, states):
                return True
        dead.add(key)
        return False

    initial = tuple(spec.initial_state for spec in specs)
    if not sweep(0, 0, 0, initial):
        return Verdict(False, Variant.LINPOINTS, None, explored)

    per_gap: dict[int, int] = {}
    for g, _ in fired:
        per_gap[g] = per_gap.get(g, 0) + 1
    points = []
    rank: dict[int, int] = {}
    for g, _ in fired:
        r = rank[g] = rank.get(g, 0) + 1
        points.append(Fraction(g - 1) + Fraction(r, per_gap[g] + 1))
    order = [ops[k].inv_index for _, k in fired]
    chosen_by_inv = {ops[k].inv_index: out for k, out in chosen.items()}
    witness = build_witness(h, order, chosen_by_inv, tuple(points))
    return Verdict(True, Variant.LINPOINTS, witness, explored)
