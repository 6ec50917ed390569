from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pathlab.errors import ParamRange
from pathlab.lp import LinearProgram, check_certificate, solve_lp


def test_textbook_lp():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    lp = LinearProgram.build(2, [3, 5], [([1, 0], 4), ([0, 2], 12), ([3, 2], 18)])
    res = solve_lp(lp)
    assert res.status == "optimal"
    assert res.value == 36
    assert res.primal == [2, 6]
    assert check_certificate(lp, res.primal, res.dual, res.value)


def test_unbounded():
    lp = LinearProgram.build(2, [1, 1], [([1, -1], 1)])
    assert solve_lp(lp).status == "unbounded"


def test_infinite_bounds_are_dropped():
    lp = LinearProgram.build(1, [1], [([1], "inf"), ([2], 3)], labels=["a", "b"])
    assert lp.labels == ("b",)
    assert solve_lp(lp).value == F(3, 2)


def test_negative_bound_rejected():
    with pytest.raises(ParamRange):
        LinearProgram.build(1, [1], [([1], -1)])


def test_certificate_rejects_wrong_dual():
    lp = LinearProgram.build(2, [1, 1], [([1, 0], 1), ([0, 1], 1)])
    res = solve_lp(lp)
    assert check_certificate(lp, res.primal, res.dual, 2)
    assert not check_certificate(lp, res.primal, [F(1), F(0)], 2)


def test_degenerate_lp_terminates():
    # many redundant constraints through the optimum
    rows = [([1, 1, 1], 1)] * 6 + [([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1), ([1, 1, 0], 1)]
    lp = LinearProgram.build(3, [1, 1, 1], rows)
    res = solve_lp(lp)
    assert res.value == 1
    assert check_certificate(lp, res.primal, res.dual, res.value)


small = st.integers(0, 5)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(small, min_size=n, max_size=n),
    st.lists(st.tuples(st.lists(small, min_size=n, max_size=n), small), min_size=1, max_size=6))))
def test_random_lps_certified(case):
    n, obj, rows = case
    lp = LinearProgram.build(n, obj, rows)
    res = solve_lp(lp)
    if res.status == "optimal":
        assert check_certificate(lp, res.primal, res.dual, res.value)
    else:
        # unbounded: some positive-objective variable appears in no row with a positive coefficient
        assert any(c > 0 and all(r[0][j] <= 0 for r in lp.constraints) for j, c in enumerate(lp.objective))
