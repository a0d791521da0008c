import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linearcheck.bruteforce import brute_force
from linearcheck.checker import (
    CompletionPlan,
    Linearization,
    SearchTooLarge,
    Variant,
    check,
    order_constraints,
    validate_witness,
)
from linearcheck.corpus import (
    BLOCKING_STACK_ENV,
    H1,
    H2,
    H_TWO_REGISTERS,
    HS,
    QUEUE_ENV,
    REGISTER_ENV,
    S1,
    S_REVERSED_B,
    TWO_REGISTER_ENV,
)
from linearcheck.history import History, HistoryError, OperationInstance, extend, inv, res
from linearcheck.specs import ConfigurationError, SpecError, register_spec

from conftest import generated

READ = OperationInstance(0, 1)
WRITE = OperationInstance(2, None)
COMPLETE_WRITE = CompletionPlan((WRITE,), (), {2: ("ok",)})


class TestOrderConstraints:
    def test_h1_original(self):
        assert order_constraints(H1, COMPLETE_WRITE, Variant.ORIGINAL) == set()

    def test_h1_amended(self):
        assert order_constraints(H1, COMPLETE_WRITE, Variant.AMENDED) == {(READ, WRITE)}

    def test_hs_alt_orders_the_dropped_pop(self):
        plan = CompletionPlan((), (OperationInstance(4, None),), {})
        pairs = order_constraints(HS, plan, Variant.ALT)
        assert (OperationInstance(2, 3), OperationInstance(4, None)) in pairs

    def test_amended_ignores_dropped(self):
        plan = CompletionPlan((), (WRITE,), {})
        assert order_constraints(H1, plan, Variant.AMENDED) == set()

    def test_rejects_linpoints(self):
        with pytest.raises(ValueError):
            order_constraints(H1, COMPLETE_WRITE, Variant.LINPOINTS)


class TestCheckExamples:
    def test_h1_original_with_s1(self):
        v = check(H1, Variant.ORIGINAL, REGISTER_ENV)
        assert v.linearizable
        assert v.witness.seq_history == S1
        assert v.witness.plan == COMPLETE_WRITE

    def test_h1_amended(self):
        assert not check(H1, Variant.AMENDED, REGISTER_ENV).linearizable

    def test_h2(self):
        assert check(H2, Variant.ORIGINAL, QUEUE_ENV).linearizable
        assert not check(H2, Variant.AMENDED, QUEUE_ENV).linearizable

    def test_hs(self):
        v = check(HS, Variant.AMENDED, BLOCKING_STACK_ENV)
        assert v.linearizable
        assert v.witness.plan.dropped_pending == (OperationInstance(4, None),)
        assert not check(HS, Variant.ALT, BLOCKING_STACK_ENV).linearizable

    @pytest.mark.parametrize("variant", list(Variant))
    def test_empty(self, variant):
        v = check(History(), variant, REGISTER_ENV)
        assert v.linearizable and v.witness.seq_history == History()

    def test_two_registers_original(self):
        assert not check(H_TWO_REGISTERS, Variant.ORIGINAL, TWO_REGISTER_ENV).linearizable

    def test_explored_is_reported(self):
        assert check(H1, Variant.AMENDED, REGISTER_ENV).explored > 0


class TestCheckErrors:
    def test_cap(self):
        events = []
        for k in range(13):
            events += [inv("A", "r", "Write", k), res("A", "r", "Write", "ok")]
        h = History(tuple(events))
        with pytest.raises(SearchTooLarge):
            check(h, Variant.AMENDED, REGISTER_ENV)
        assert check(h, Variant.AMENDED, REGISTER_ENV, max_ops=13).linearizable

    def test_unmapped_object(self):
        with pytest.raises(ConfigurationError):
            check(H1, Variant.ORIGINAL, {"q": register_spec()})

    def test_ill_formed(self):
        with pytest.raises(HistoryError):
            check(History((res("A", "r", "Read", 0),)), Variant.ORIGINAL, REGISTER_ENV)

    def test_arity(self):
        with pytest.raises(SpecError):
            check(History((inv("A", "r", "Write"),)), Variant.ORIGINAL, REGISTER_ENV)


class TestValidateWitness:
    def test_s1_for_h1(self):
        w = Linearization(COMPLETE_WRITE, (2, 0), S1)
        assert validate_witness(H1, Variant.ORIGINAL, REGISTER_ENV, w)
        assert not validate_witness(H1, Variant.AMENDED, REGISTER_ENV, w)

    def test_reversed_b_fails_equivalence(self):
        plan = CompletionPlan((OperationInstance(4, None), OperationInstance(5, None)), (), {4: ("ok",), 5: ("ok",)})
        w = Linearization(plan, (5, 0, 4, 1), S_REVERSED_B)
        assert not validate_witness(H_TWO_REGISTERS, Variant.ORIGINAL, TWO_REGISTER_ENV, w)

    def test_illegal_sequence(self):
        bad = History((inv("A", "r", "Read"), res("A", "r", "Read", 1), inv("B", "r", "Write", 1), res("B", "r", "Write", "ok")))
        w = Linearization(COMPLETE_WRITE, (0, 2), bad)
        for variant in (Variant.ORIGINAL, Variant.AMENDED, Variant.ALT):
            assert not validate_witness(H1, variant, REGISTER_ENV, w)

    def test_plan_must_cover_pending(self):
        w = Linearization(CompletionPlan(), (), History((inv("A", "r", "Read"), res("A", "r", "Read", 1))))
        assert not validate_witness(H1, Variant.ORIGINAL, REGISTER_ENV, w)

    def test_alt_needs_the_second_pop(self):
        w = check(HS, Variant.AMENDED, BLOCKING_STACK_ENV).witness
        assert validate_witness(HS, Variant.AMENDED, BLOCKING_STACK_ENV, w)
        assert not validate_witness(HS, Variant.ALT, BLOCKING_STACK_ENV, w)


seeds = st.integers(min_value=0, max_value=10**6)


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_witnesses_validate(seed):
    g = generated(seed)
    for variant in Variant:
        v = check(g.history, variant, g.env)
        if v.linearizable:
            assert validate_witness(g.history, variant, g.env, v.witness)


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_inclusion_chain(seed):
    g = generated(seed)
    got = {variant: check(g.history, variant, g.env).linearizable for variant in Variant}
    assert got[Variant.ALT] <= got[Variant.AMENDED] <= got[Variant.ORIGINAL]


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_agrees_with_brute_force(seed):
    g = generated(seed)
    if len(g.history) > 12:
        return
    expected = brute_force(g.history, g.env)
    for variant in Variant:
        assert check(g.history, variant, g.env).linearizable == expected[variant], variant


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_appended_response_order_is_irrelevant(seed):
    g = generated(seed)
    h = g.history
    v = check(h, Variant.ORIGINAL, g.env)
    if not v.linearizable or len(v.witness.plan.linearized_pending) < 2:
        return
    responses = v.witness.plan.responses(h)
    base = {variant: check(extend(h, responses), variant, g.env).linearizable for variant in Variant}
    for perm in itertools.permutations(responses):
        ext = extend(h, list(perm))
        assert {variant: check(ext, variant, g.env).linearizable for variant in Variant} == base


def test_uncorrupted_generated_histories_are_amended_linearizable():
    from linearcheck.meta import GenParams, generate_history

    for seed in range(300):
        g = generate_history(seed, GenParams(processes=3, objects=2, operations=8, max_corruptions=0))
        assert g.corrupted == 0
        assert check(g.history, Variant.AMENDED, g.env).linearizable
