"""Acceptance gate. Each test prints one PASS/FAIL line for its criterion.

Corpora:
  E1  every register history over processes A, B, one register, at most
      three calls per process, values {0, 1}, one representative per class
      under process renaming and commutation of adjacent same-kind events
  E2  the same over two registers x, y with at most two calls per process
  R   1200 seeded generated histories over all four spec kinds
"""

import time

import pytest

from linearcheck.bruteforce import brute_force
from linearcheck.checker import Variant, check, validate_witness
from linearcheck.corpus import (
    BLOCKING_STACK_ENV,
    H1,
    H2,
    H_TWO_REGISTERS,
    HS,
    QUEUE_ENV,
    REFERENCE_TRACES,
    REGISTER_ENV,
    TWO_REGISTER_ENV,
)
from linearcheck.history import OpDef, inv, operations, project_object
from linearcheck.linpoints import check_linpoints
from linearcheck.meta import check_locality, check_nonblocking, classify, enumerate_histories, register_env_for
from linearcheck.trace import parse_trace, serialize_trace

from conftest import ACCEPTANCE_LINES, generated

pytestmark = pytest.mark.exhaustive

R_SEEDS = range(1200)


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpora():
    e1_env = register_env_for(["r"])
    e2_env = register_env_for(["x", "y"])
    e1 = [(h, e1_env) for h in enumerate_histories()]
    e2 = [(h, e2_env) for h in enumerate_histories(objects=("x", "y"), max_invocations=2)]
    r = [(g.history, g.env) for g in map(generated, R_SEEDS)]
    return {"E1": e1, "E2": e2, "R": r}


@pytest.fixture(scope="module")
def verdicts():
    # (corpus, index) -> {variant: bool}; filled by criteria 2 and 3
    return {}


def test_criterion_1_reference_histories():
    start = time.perf_counter()
    got = {}
    for name, h, env in (("H1", H1, REGISTER_ENV), ("H2", H2, QUEUE_ENV), ("Hs", HS, BLOCKING_STACK_ENV)):
        got[name] = {v: check(h, v, env).linearizable for v in Variant}
    hx = project_object(H_TWO_REGISTERS, "x")
    hy = project_object(H_TWO_REGISTERS, "y")
    for name, h, env in (("H", H_TWO_REGISTERS, TWO_REGISTER_ENV), ("H|x", hx, {"x": TWO_REGISTER_ENV["x"]}), ("H|y", hy, {"y": TWO_REGISTER_ENV["y"]})):
        got[name] = {v: check(h, v, env).linearizable for v in (Variant.ORIGINAL, Variant.AMENDED)}
    region = classify(HS, BLOCKING_STACK_ENV).region
    elapsed = time.perf_counter() - start

    O, A, L, P = Variant.ORIGINAL, Variant.AMENDED, Variant.ALT, Variant.LINPOINTS
    expected = [
        got["H1"][O], not got["H1"][A], not got["H1"][L], not got["H1"][P],
        got["H2"][O], not got["H2"][A],
        got["H|x"][O], got["H|y"][O], not got["H"][O],
        not got["H"][A], not got["H|x"][A], not got["H|y"][A],
        got["Hs"][A], not got["Hs"][L], region == "AMENDED_ONLY",
    ]
    report(1, all(expected) and elapsed < 1.0, f"{sum(expected)}/{len(expected)} verdicts match, {elapsed:.3f}s")


def test_criterion_2_amended_equals_linpoints(corpora, verdicts):
    start = time.perf_counter()
    mismatches = []
    count = 0
    for name in ("E1", "R"):
        for k, (h, env) in enumerate(corpora[name]):
            a = check(h, Variant.AMENDED, env).linearizable
            p = check_linpoints(h, env).linearizable
            verdicts[name, k] = {Variant.AMENDED: a, Variant.LINPOINTS: p}
            if a != p:
                mismatches.append((name, k))
            count += 1
    elapsed = time.perf_counter() - start
    report(
        2,
        not mismatches and elapsed <= 300,
        f"{count} histories, {len(mismatches)} disagreements, {elapsed:.0f}s (limit 300s)",
    )


def test_criterion_3_inclusion_chain(corpora, verdicts):
    broken = []
    count = 0
    for name in ("E1", "R"):
        for k, (h, env) in enumerate(corpora[name]):
            got = verdicts.get((name, k), {})
            for v in (Variant.ORIGINAL, Variant.ALT, Variant.AMENDED, Variant.LINPOINTS):
                if v not in got:
                    got[v] = check(h, v, env).linearizable
            verdicts[name, k] = got
            if (got[Variant.ALT] and not got[Variant.AMENDED]) or (got[Variant.AMENDED] and not got[Variant.ORIGINAL]):
                broken.append((name, k))
            count += 1
    report(3, not broken, f"{count} histories, {len(broken)} exceptions to alt => amended => original")


def test_criterion_4_locality(corpora):
    violations = []
    count = 0
    for name in ("E1", "E2", "R"):
        for k, (h, env) in enumerate(corpora[name]):
            if check_locality(h, Variant.AMENDED, env).is_locality_violation:
                violations.append((name, k))
            count += 1
    flagged = check_locality(H_TWO_REGISTERS, Variant.ORIGINAL, TWO_REGISTER_ENV).is_locality_violation
    report(4, not violations and flagged, f"{count} histories, {len(violations)} amended violations; original flags H: {flagged}")


def test_criterion_5_nonblocking(corpora):
    violations = []
    count = 0
    for name in ("E1", "E2", "R"):
        for k, (h, env) in enumerate(corpora[name]):
            if check_nonblocking(h, Variant.AMENDED, env).is_nonblocking_violation:
                violations.append((name, k))
            count += 1
    r1 = check_nonblocking(H1, Variant.ORIGINAL, REGISTER_ENV)
    r2 = check_nonblocking(H2, Variant.ORIGINAL, QUEUE_ENV)
    pinned = (
        r1.is_nonblocking_violation
        and [H1[i] for i in r1.blocked] == [inv("B", "r", "Write", 1)]
        and r2.is_nonblocking_violation
        and [H2[i] for i in r2.blocked] == [inv("B", "q", "Enq", "y")]
    )
    report(5, not violations and pinned, f"{count} histories, {len(violations)} amended violations; H1 Write and H2 Enq flagged: {pinned}")


def test_criterion_6_oracle_agreement(corpora, verdicts):
    disagreements = []
    bad_witnesses = []
    compared = 0
    witnesses = 0
    for name in ("E1", "E2", "R"):
        for k, (h, env) in enumerate(corpora[name]):
            if len(operations(h, OpDef.DEF5)) > 6:
                continue
            expected = brute_force(h, env)
            for v in Variant:
                verdict = check(h, v, env)
                if verdict.linearizable != expected[v]:
                    disagreements.append((name, k, v))
                if verdict.linearizable:
                    witnesses += 1
                    if not validate_witness(h, v, env, verdict.witness):
                        bad_witnesses.append((name, k, v))
            compared += 1
    report(
        6,
        not disagreements and not bad_witnesses,
        f"{compared} histories, {len(disagreements)} oracle disagreements, {len(bad_witnesses)}/{witnesses} witnesses rejected",
    )


def test_criterion_7_round_trip(tmp_path):
    from linearcheck.corpus import TITLES, emit_corpus

    failures = 0
    names = emit_corpus(tmp_path)
    # emitted files: parse then re-serialise with the same header comment
    for name in names:
        text = (tmp_path / name).read_text(encoding="utf-8")
        h, env = parse_trace(text)
        if serialize_trace(h, env, comment=TITLES[name]) != text:
            failures += 1
    for seed in range(1000):
        g = generated(seed)
        text = serialize_trace(g.history, g.env)
        h, env = parse_trace(text)
        if (h, env) != (g.history, g.env) or serialize_trace(h, env) != text:
            failures += 1
    ok = failures == 0 and sorted(names) == sorted(REFERENCE_TRACES)
    report(7, ok, f"{len(names)} corpus files + 1000 generated traces, {failures} round-trip failures")
