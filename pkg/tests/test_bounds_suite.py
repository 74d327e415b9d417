import math

import pytest

from order_forge.bounds import binom_tail_check, hoeffding_bound
from order_forge.suite import assemble_m0


def test_hoeffding_exact_value():
    assert math.isclose(hoeffding_bound(100, 0.5, 30), math.exp(-8), rel_tol=1e-12)


def test_hoeffding_at_and_above_mean():
    assert hoeffding_bound(100, 0.5, 50) == 1.0
    assert hoeffding_bound(100, 0.5, 70) == 1.0


@pytest.mark.parametrize("n,p", [(0, 0.5), (10, -0.1), (10, 1.5)])
def test_hoeffding_rejects_bad_input(n, p):
    with pytest.raises(ValueError):
        hoeffding_bound(n, p, 0)


def test_tail_at_zero_matches_closed_form():
    rep = binom_tail_check(20, 0.1, [0], 100_000, 3)
    (row,) = rep.rows
    assert abs(row.estimate - 0.9**20) < 5 * row.stderr
    assert not rep.flags


def test_tail_check_needs_many_samples():
    with pytest.raises(ValueError):
        binom_tail_check(100, 0.5, [30], 9_999, 0)


def test_tail_check_is_seeded():
    assert binom_tail_check(50, 0.4, [10, 15], 10_000, 5).lines() == binom_tail_check(50, 0.4, [10, 15], 10_000, 5).lines()


def test_m0_family():
    fam = assemble_m0(4, 2)
    assert [c.index for c in fam.classes] == [3, 4]
    assert [c.graph.n for c in fam.classes] == [360, 640]
    assert all(c.verdict for c in fam.classes)
    assert fam.size == 1000
    assert fam.same_class(0, 359) and not fam.same_class(359, 360)
    edges = list(fam.edges())
    assert len(edges) == 1000 * 3 // 2
    assert all(fam.same_class(u, v) for u, v, _ in edges)
    with pytest.raises(ValueError):
        fam.class_of(1000)
    with pytest.raises(ValueError):
        assemble_m0(2, 0)
