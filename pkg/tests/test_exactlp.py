from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivres.exactlp import linprog

scipy_optimize = pytest.importorskip("scipy.optimize")


def test_small_known_optimum():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (8/5, 6/5)
    res = linprog([-1, -1], [[1, 2], [3, 1]], [4, 6])
    assert res.ok
    assert res.x == (Fraction(8, 5), Fraction(6, 5))
    assert res.fun == Fraction(-14, 5)


def test_infeasible_and_unbounded():
    assert linprog([0], [[1]], [-1]).status == "infeasible"
    assert linprog([-1], [[-1]], [0]).status == "unbounded"
    assert linprog([0, 0], A_eq=[[1, 1]], b_eq=[1], bounds=[(0, 0), (0, 0)]).status == "infeasible"


def test_free_and_upper_bounded_variables():
    res = linprog([1, 0], A_eq=[[1, 1]], b_eq=[0], bounds=[(None, None), (None, 3)])
    assert res.ok and res.x == (-3, 3)


def test_degenerate_problem_terminates():
    # a classic cycling example for the textbook rule; Bland's rule must finish
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    res = linprog(c, A, [0, 0, 1])
    assert res.ok and res.fun == Fraction(-1, 20)


@settings(max_examples=120, deadline=None)
@given(
    st.integers(1, 4).flatmap(lambda n: st.tuples(
        st.lists(st.integers(-5, 5), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=4),
        st.lists(st.integers(-3, 6), min_size=4, max_size=4),
        st.booleans(),
    ))
)
def test_agrees_with_floating_point_solver(data):
    c, A, b, boxed = data
    b = b[:len(A)]
    n = len(c)
    bounds = [(-2, 3)] * n if boxed else [(0, None)] * n
    ours = linprog(c, A, b, bounds=bounds)
    ref = scipy_optimize.linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if ref.status == 0:
        assert ours.ok
        assert float(ours.fun) == pytest.approx(ref.fun, abs=1e-7)
        x = np.array([float(v) for v in ours.x])
        assert np.all(np.array(A) @ x <= np.array(b) + 1e-9)
    elif ref.status == 2:
        assert ours.status == "infeasible"
    elif ref.status == 3:
        assert ours.status == "unbounded"
