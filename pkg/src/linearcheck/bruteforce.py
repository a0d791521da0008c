"""Reference decision procedure by exhaustive enumeration.

Slow on purpose. For every completion plan (a subset of the pending
invocations plus results drawn from a finite candidate universe) it builds
the extension, takes ``complete`` of it, enumerates every sequential
history equivalent to that, and tests legality and the required precedence
with the plain history constructions. Nothing is shared with the search
engines except those constructions and the specs.
"""

from __future__ import annotations

from itertools import combinations, product

from .checker import Variant
from .history import (
    Event,
    History,
    Kind,
    OpDef,
    Value,
    complete,
    equivalent,
    extend,
    is_well_formed,
    operations,
    ordinal_keys,
    pending_invocations,
    precedence,
)
from .specs import SpecEnvironment, is_legal


def result_universe(h: History, env: SpecEnvironment) -> list[Value]:
    """Every value a built-in spec can answer with: history values plus spec constants."""
    vals: dict[Value, None] = {}
    for e in h.events:
        for v in e.payload:
            vals[v] = None
    for x in h.objects:
        for v in env[x].constants:
            vals[v] = None
    return list(vals)


def _interleavings(seqs: list[list]) -> list[list]:
    """All merges of ``seqs`` that keep each one's internal order."""
    if not any(seqs):
        return [[]]
    out = []
    for i, s in enumerate(seqs):
        if s:
            rest = seqs[:i] + [s[1:]] + seqs[i + 1 :]
            out.extend([s[0]] + tail for tail in _interleavings(rest))
    return out


def _respects(pairs, rank) -> bool:
    for a, b in pairs:
        if a not in rank or b not in rank or not rank[a] < rank[b]:
            return False
    return True


def _points_exist(order: list[tuple[str, int]], interval: dict) -> bool:
    """Distinct points in order, each inside its operation's gap range.

    Gap ``g`` lies between events ``g-1`` and ``g``; several points may share
    a gap, so a non-decreasing gap sequence is exactly what is needed.
    """
    g = 0
    for key in order:
        lo, hi = interval[key]
        g = max(g, lo)
        if g > hi:
            return False
    return True


def brute_force(h: History, env: SpecEnvironment) -> dict[Variant, bool]:
    """Verdicts for all four definitions."""
    if not is_well_formed(h):
        raise ValueError("history is not well-formed")
    keys = ordinal_keys(h)
    pending = pending_invocations(h)
    universe = result_universe(h, env)

    ops5 = operations(h, OpDef.DEF5)
    interval = {}
    for op in ops5:
        hi = op.res_index if op.res_index is not None else len(h)
        interval[keys[op.inv_index]] = (op.inv_index + 1, hi)
    original_pairs = [(keys[a.inv_index], keys[b.inv_index]) for a, b in precedence(h, OpDef.DEF1)]
    alt_pairs = [(keys[a.inv_index], keys[b.inv_index]) for a, b in precedence(h, OpDef.DEF5)]

    found = {v: False for v in Variant}
    for size in range(len(pending) + 1):
        for chosen_ops in combinations(pending, size):
            arities = [env[h.events[op.inv_index].obj].signature(h.events[op.inv_index].op).n_results for op in chosen_ops]
            for payloads in product(*(product(universe, repeat=n) for n in arities)):
                responses = []
                for op, payload in zip(chosen_ops, payloads):
                    call = h.events[op.inv_index]
                    responses.append(Event(Kind.RES, call.process, call.obj, call.op, tuple(payload)))
                ext = extend(h, responses)
                c = complete(ext)
                c_keys = ordinal_keys(c, OpDef.DEF1)
                amended_pairs = [(c_keys[a.inv_index], c_keys[b.inv_index]) for a, b in precedence(c, OpDef.DEF1)]

                per_process: dict[str, list] = {}
                for op in operations(c, OpDef.DEF1):
                    per_process.setdefault(c.events[op.inv_index].process, []).append(op)
                for seq in _interleavings(list(per_process.values())):
                    s = History(tuple(e for op in seq for e in (c.events[op.inv_index], c.events[op.res_index])))
                    if not is_legal(s, env) or not equivalent(c, s):
                        continue
                    order = [c_keys[op.inv_index] for op in seq]
                    rank = {key: r for r, key in enumerate(order)}
                    if _respects(original_pairs, rank):
                        found[Variant.ORIGINAL] = True
                    if _respects(amended_pairs, rank):
                        found[Variant.AMENDED] = True
                    if _respects(alt_pairs, rank):
                        found[Variant.ALT] = True
                    if _points_exist(order, interval):
                        found[Variant.LINPOINTS] = True
                    if all(found.values()):
                        return found
    return found
