from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from order_forge.shatter import (
    AffineSubspace,
    NoMonochromaticSubspace,
    PointOrder,
    affine_subspaces,
    all_points,
    build_and_verify_witness,
    build_witness,
    color_line,
    d_point,
    eval_phi_pi,
    find_mono_subspace,
    gaussian_binomial,
    index_point,
    is_monochromatic,
    minimal_basis,
    point_index,
    subsets,
    verify_witness,
)


def _swapped_lex(p, n, i, j):
    seq = list(range(p**n))
    seq[i], seq[j] = seq[j], seq[i]
    return PointOrder.explicit(p, n, seq)


def test_point_index_round_trip():
    for p, n in [(2, 4), (3, 3), (5, 2)]:
        for idx in range(p**n):
            assert point_index(index_point(idx, p, n), p) == idx
        assert [point_index(x, p) for x in all_points(p, n)] == list(range(p**n))


def test_color_line_lex_is_identity():
    for p in (2, 3, 5):
        order = PointOrder.lex(p, 2)
        assert color_line([(1, a) for a in range(p)], order) == tuple(range(p))


def test_color_line_reverse_lex_p2():
    order = PointOrder.explicit(2, 2, list(reversed(range(4))))
    assert color_line([(0, 0), (1, 1)], order) == (1, 0)


def test_color_line_p3_by_hand():
    # order (2) < (0) < (1): the lex-sorted line d=(0),(1),(2) is listed as d2, d0, d1
    order = PointOrder.explicit(3, 1, [2, 0, 1])
    assert color_line([(0,), (1,), (2,)], order) == (2, 0, 1)
    assert color_line([(2,), (0,), (1,)], order) == (2, 0, 1)


def test_color_line_rejects_non_lines():
    order = PointOrder.lex(3, 2)
    with pytest.raises(ValueError):
        color_line([(0, 0), (0, 1), (1, 0)], order)
    with pytest.raises(ValueError):
        color_line([(0, 0), (0, 0), (0, 0)], order)


@pytest.mark.parametrize("p,n,k", [(2, 3, 1), (2, 4, 2), (3, 2, 1), (3, 3, 2), (5, 2, 1)])
def test_affine_subspace_count(p, n, k):
    flats = list(affine_subspaces(p, n, k))
    assert len(flats) == gaussian_binomial(n, k, p) * p ** (n - k)
    assert len({frozenset(W.points()) for W in flats}) == len(flats)
    assert all(len(W.points()) == p**k for W in flats)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (2, 4)])
def test_lines_of_whole_space(p, n):
    W = next(affine_subspaces(p, n, n))
    lines = list(W.lines())
    assert len(lines) == p ** (n - 1) * (p**n - 1) // (p - 1)
    assert len({tuple(L) for L in lines}) == len(lines)


def test_swapped_lex_has_no_full_flat():
    order = _swapped_lex(2, 4, 0, 1)
    assert find_mono_subspace(4, 4, order) is None
    with pytest.raises(NoMonochromaticSubspace):
        build_and_verify_witness(4, 4, order)
    W = find_mono_subspace(4, 1, order)
    assert W is not None and W.dim == 1


def test_lex_full_space_is_monochromatic():
    for p, n in [(2, 4), (3, 2), (5, 2)]:
        W = find_mono_subspace(n, n, PointOrder.lex(p, n))
        assert sorted(W.points()) == all_points(p, n)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_found_flat_rechecked_line_by_line(seed):
    order = PointOrder.random(2, 5, seed)
    W = find_mono_subspace(5, 2, order)
    if W is None:
        return
    colors = {color_line(L, order) for L in W.lines()}
    assert len(colors) == 1
    assert colors == {is_monochromatic(W, order)}


def test_find_rejects_bad_arguments():
    with pytest.raises(ValueError):
        find_mono_subspace(3, 4, PointOrder.lex(2, 3))
    with pytest.raises(ValueError):
        find_mono_subspace(4, 1, PointOrder.lex(2, 3))


def test_minimal_basis_examples():
    W = AffineSubspace((0, 0, 0), ((1, 0, 1), (0, 1, 1)), 2)
    basis, omega = minimal_basis(W)
    assert basis == [(0, 1, 1), (1, 0, 0)] or basis == [(0, 1, 1), (1, 0, 1)]
    assert basis[0] == (0, 1, 1)
    assert omega == [2, 1]
    W3 = AffineSubspace((1, 2), ((1, 2),), 3)
    assert minimal_basis(W3) == ([(1, 2)], [1])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 4, 2), (3, 3, 2), (5, 2, 1), (2, 5, 3)]), st.data())
def test_d_point_pins_omega_coordinates(pnk, data):
    p, n, k = pnk
    flats = list(affine_subspaces(p, n, k))
    W = flats[data.draw(st.integers(0, len(flats) - 1))]
    basis, omega = minimal_basis(W)
    assert len(set(omega)) == k
    pts = set(W.points())
    for s in product(range(p), repeat=k):
        x = d_point(W, basis, omega, s)
        assert x in pts
        assert [x[w - 1] for w in omega] == list(s)


def test_eval_phi_pi_zero_direction_is_false():
    order = PointOrder.lex(3, 2)
    for x in all_points(3, 2):
        assert not eval_phi_pi(x, (0, 0), (0, 1, 2), order)


def test_subsets_count():
    assert subsets(0) == [frozenset()]
    assert len(subsets(4)) == 16


def test_k0_is_vacuous():
    w, ok = build_and_verify_witness(3, 0, PointOrder.random(2, 3, 1))
    assert ok and w.k == 0 and list(w.dI) == [frozenset()]


def test_lex_witness_p2():
    w, ok = build_and_verify_witness(5, 3, PointOrder.lex(2, 5))
    assert ok
    assert w.pi == (0, 1)
    assert w.omega == [3, 2, 1]


@pytest.mark.parametrize("p,n,k", [(3, 3, 2), (5, 2, 2), (3, 2, 1)])
def test_lex_witness_odd_p(p, n, k):
    w, ok = build_and_verify_witness(n, k, PointOrder.lex(p, n))
    assert ok
    assert w.pi == tuple(range(p))


def test_corrupted_parameter_is_caught():
    order = PointOrder.lex(2, 4)
    W = find_mono_subspace(4, 2, order)
    w = build_witness(W, order)
    assert verify_witness(w, order) == []
    I = frozenset({1})
    w.dI[I] = w.dI[frozenset()]
    assert verify_witness(w, order)


def test_build_witness_requires_monochromatic():
    order = _swapped_lex(2, 4, 0, 1)
    W = next(affine_subspaces(2, 4, 4))
    with pytest.raises(ValueError):
        build_witness(W, order)


def test_tournament_is_a_tournament():
    t = PointOrder.tournament(4, 3)
    pts = all_points(2, 4)
    for x in pts:
        assert not t.less(x, x)
        for y in pts:
            if x != y:
                assert t.less(x, y) != t.less(y, x)


@pytest.mark.parametrize("seed", range(5))
def test_tournament_witnesses(seed):
    w, ok = build_and_verify_witness(6, 2, PointOrder.tournament(6, seed))
    assert ok


def test_random_order_deterministic():
    assert PointOrder.random(3, 3, 7) == PointOrder.random(3, 3, 7)
    assert PointOrder.random(3, 3, 7) != PointOrder.random(3, 3, 8)
