from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_satisfiable_constraints
from order_forge.generic import (
    EmbeddingState,
    FormulaError,
    OrderConstraint,
    check_large,
    evaluate,
    extend_step,
    find_witness,
    format_formula,
    genericity_queue,
    holds,
    order_patterns,
    parse_formula,
    run_queue,
)

F = Fraction


def C(text):
    return OrderConstraint.parse(text)


def test_parse_format_round_trip():
    text = "or and lt x1 p3 not lt x2 x1 true"
    theta = parse_formula(text)
    assert theta == ("or", ("and", ("lt", ("x", 1), ("p", 3)), ("not", ("lt", ("x", 2), ("x", 1)))), ("true",))
    assert format_formula(theta) == text
    c = C("vars=4 lt x1 p0")
    assert c.var_count == 4 and OrderConstraint.parse(c.format()) == c
    assert C("lt x2 p0").var_count == 2


@pytest.mark.parametrize("bad", ["lt x1", "lt x1 y2", "and lt x1 p0", "lt x1 p0 extra", "xor x1 p0"])
def test_parse_errors(bad):
    with pytest.raises(FormulaError):
        parse_formula(bad)


def test_evaluate_three_valued():
    theta = parse_formula("or lt x1 p0 lt p0 p1")
    vals = {("p", 0): 0, ("p", 1): 1}
    assert evaluate(theta, vals.get) is True
    assert evaluate(parse_formula("and lt x1 p0 lt p0 p1"), vals.get) is None
    assert evaluate(parse_formula("and lt x1 p0 lt p1 p0"), vals.get) is False


@pytest.mark.parametrize(
    "text,f,expected",
    [
        ("lt x1 p0", {0: F(0)}, True),
        ("and lt p0 x1 lt x1 p1", {0: F(0), 1: F(1)}, True),
        ("and lt p0 x1 lt x1 p1", {0: F(1), 1: F(0)}, False),
        ("and lt x1 x2 lt x2 x1", {}, False),
        ("lt x1 x1", {}, False),
        ("not lt x1 x1", {}, True),
        ("and not lt x1 p0 not lt p0 x1", {0: F(0)}, False),
        ("or lt p1 p0 lt x1 x1", {0: F(0), 1: F(1)}, False),
        ("false", {}, False),
        ("and lt x1 x2 and lt x2 x3 lt x3 x1", {}, False),
    ],
)
def test_check_large_examples(text, f, expected):
    assert check_large(C(text), f) is expected


def test_check_large_needs_mapped_params():
    with pytest.raises(FormulaError):
        check_large(C("lt x1 p7"), {})


def test_extend_step_realizes_fresh_distinct_elements():
    state = EmbeddingState({0: F(0), 1: F(1)})
    con = C("and lt p0 x1 and lt x1 x2 lt x2 p1")
    new = extend_step(state, con, seed=3)
    assert state.f == {0: F(0), 1: F(1)} and not state.log
    ids = new.log[-1].witnesses
    assert len(ids) == 2 and not set(ids) & {0, 1}
    assert new.is_injective()
    assert holds(con, ids, new.f)


def test_extend_step_maps_unseen_params():
    new = extend_step(EmbeddingState(), C("lt p5 x1"), seed=0)
    assert 5 in new.f
    assert holds(C("lt p5 x1"), new.log[-1].witnesses, new.f)


def test_extend_step_skips_inconsistent():
    state = EmbeddingState({0: F(0)})
    new = extend_step(state, C("and lt x1 p0 lt p0 x1"), seed=0, index=4)
    assert new.f == state.f
    assert new.log[-1].status == "skipped" and new.log[-1].index == 4


def test_extend_step_deterministic():
    state = EmbeddingState({0: F(0), 1: F(5)})
    con = C("or lt x1 p0 or and lt p0 x1 lt x1 p1 lt p1 x1")
    assert extend_step(state, con, 11).f == extend_step(state, con, 11).f


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_queue_fully_realized(seed):
    cons, state = random_satisfiable_constraints(30, 8, seed)
    final, order = run_queue(cons, seed, state)
    assert all(e.status == "realized" for e in final.log)
    assert final.is_injective()
    for con, entry in zip(cons, final.log):
        assert holds(con, entry.witnesses, final.f)
    assert [final.f[e] for e in order] == sorted(final.f.values())


def test_order_patterns_count():
    # interleavings times variable orders: C(m+r, m) * m!
    assert len(order_patterns([], 3)) == 6
    assert len(order_patterns([0, 1], 2)) == 12
    assert len(order_patterns([4], 1)) == 2


def test_genericity_probe_small():
    state = EmbeddingState({0: F(0), 1: F(1), 2: F(2)})
    queue = genericity_queue(state, [0, 1, 2], max_vars=2, max_params=2)
    state, _ = run_queue(queue, 1, state)
    assert state.is_injective()
    for con in genericity_queue(state, [0, 1, 2], max_vars=2, max_params=2):
        w = find_witness(con, state.f)
        assert w is not None and holds(con, w, state.f)


def test_find_witness_none_when_no_elements():
    assert find_witness(C("lt x1 p0"), {0: F(0)}) is None
