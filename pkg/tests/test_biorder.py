from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from order_forge.biorder import (
    BiOrder,
    arithmetic_tables,
    code_of,
    decode,
    encode,
    swap_adjacent,
    verify_carrier,
    verify_roundtrip,
    with_biorder,
)


def brute_triples(k, op):
    out = set()
    for r in range(k):
        for s in range(k):
            for t in range(k):
                if op(r, s) == t:
                    out.add((r, s, t))
    return out


def test_biorder_rejects_non_permutation():
    with pytest.raises(ValueError):
        BiOrder((0, 0, 1))


def test_canonical_form_is_isomorphism_type():
    # two presentations of the same structure: second order 1 < 2 < 0
    keys = [30, 10, 20]
    assert BiOrder.from_second_keys(keys) == BiOrder((1, 2, 0))
    assert BiOrder((1, 2, 0)).rank2() == [2, 0, 1]


def test_encode_k1():
    c = encode(1)
    assert c.n == 10
    assert c.reprs == (7,)
    c.check()


def test_encode_k3_counts():
    c = encode(3)
    assert c.reprs == (21, 42, 63)
    kinds = [b.kind for b in c.blocks]
    assert kinds.count("add") == len(brute_triples(3, lambda r, s: r + s)) == 6
    assert kinds.count("mul") == len(brute_triples(3, lambda r, s: r * s)) == 8


def test_encode_rejects_zero():
    with pytest.raises(ValueError):
        encode(0)


@pytest.mark.parametrize("k", range(1, 16))
def test_encode_invariants(k):
    encode(k).check()


@pytest.mark.parametrize("l, expected", [(10, 0), (21, None), (80, None), (22, 1), (0, 0), (62, 2), (63, None)])
def test_code_of(l, expected):
    assert code_of(l, encode(3)) == expected


def test_code_of_out_of_range():
    with pytest.raises(ValueError):
        code_of(90, encode(3))


def test_decode_k2():
    c = encode(2)
    d = decode(c.biorder, c.param_ranks)
    assert d.size == 2
    assert d.add_table() == {(0, 0): 0, (0, 1): 1, (1, 0): 1}
    assert d.mul_table() == {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1}


def test_decode_k1():
    c = encode(1)
    d = decode(c.biorder, c.param_ranks)
    assert d.size == 1 and d.add_table() == {(0, 0): 0} and d.mul_table() == {(0, 0): 0}


def test_decode_without_blocks_is_empty():
    # identity bi-order: no element after a1 is <1-above it in a 4-run ending at a delimiter
    d = decode(BiOrder(tuple(reversed(range(20)))), (2, 8, 15))
    assert d.add == frozenset() and d.mul == frozenset()


@pytest.mark.parametrize("ranks", [(3, 2, 5), (0, 0, 1), (-1, 2, 3), (1, 2, 99)])
def test_decode_rejects_bad_params(ranks):
    with pytest.raises(ValueError):
        decode(encode(2).biorder, ranks)


@pytest.mark.parametrize("k", range(1, 13))
def test_roundtrip(k):
    ok, problems = verify_roundtrip(k)
    assert ok, problems


def test_roundtrip_oracle_matches_brute_force():
    for k in range(1, 8):
        add, mul = arithmetic_tables(k)
        assert add == brute_triples(k, lambda r, s: r + s)
        assert mul == brute_triples(k, lambda r, s: r * s)


def test_mutation_is_detected():
    c = encode(5)
    blk = next(b for b in c.blocks if b.kind == "add")
    # swap c_t with its delimiter: the run no longer ends above a1
    j = c.biorder.rank2()[blk.points[2]]
    ok, problems = verify_carrier(with_biorder(c, swap_adjacent(c.biorder, j)))
    assert not ok
    assert any(f"add missing {blk.triple}" == p for p in problems)


def test_decode_never_exceeds_domain():
    for k in range(1, 10):
        c = encode(k)
        d = decode(c.biorder, c.param_ranks)
        assert all(t < k for *_, t in d.add | d.mul)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.data())
def test_decode_on_random_mutations_stays_partial(k, data):
    c = encode(k)
    j = data.draw(st.integers(min_value=0, max_value=c.n - 2))
    b = swap_adjacent(c.biorder, j)
    d = decode(b, c.param_ranks)
    assert all(t < k for *_, t in d.add | d.mul)


def test_decode_is_isomorphism_invariant():
    # relabel elements by an order-preserving map into a bigger universe, then
    # re-canonicalize: the canonical form and so the decoding must not change
    c = encode(3)
    rank2 = c.biorder.rank2()
    spread = {x: 3 * x + 1 for x in range(c.n)}
    keys = {spread[x]: rank2[x] for x in range(c.n)}
    relabeled = [keys[v] for v in sorted(keys)]
    b = BiOrder.from_second_keys(relabeled)
    assert b == c.biorder
    assert decode(b, c.param_ranks) == decode(c.biorder, c.param_ranks)


def test_decode_has_no_size_specific_path():
    # the same function object handles every k; nothing but the bi-order and
    # the three ranks reaches it
    import inspect

    params = list(inspect.signature(decode).parameters)
    assert params == ["b", "param_ranks"]
    for k in range(1, 13):
        c = encode(k)
        assert decode(c.biorder, c.param_ranks).size == k


def test_small_biorders_decode_without_error():
    for perm in permutations(range(6)):
        d = decode(BiOrder(perm), (0, 1, 5))
        assert d.size == 1
