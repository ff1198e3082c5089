from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from attainable.simplex import simplex_from_basis, solve_standard_lp


def test_small_lp_by_hand():
    # min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6  (slacks added)
    A = [[1, 2, 1, 0], [3, 1, 0, 1]]
    res = solve_standard_lp(A, [4, 6], [-1, -1, 0, 0])
    assert res.status == "optimal"
    assert res.x[:2] == pytest.approx([8 / 5, 6 / 5])
    assert res.objective == pytest.approx(-14 / 5)


def test_infeasible_reports_phase_one_gap():
    res = solve_standard_lp([[1, 1]], [-1], [0, 0])
    assert res.infeasibility == pytest.approx(1.0)


def test_unbounded():
    res = solve_standard_lp([[1, -1]], [1], [-1, 0])
    assert res.status == "unbounded"


def test_degenerate_problem_terminates():
    # a classic cycling example for naive largest-coefficient pricing
    A = np.array(
        [
            [0.25, -8, -1, 9, 1, 0, 0],
            [0.5, -12, -0.5, 3, 0, 1, 0],
            [0, 0, 1, 0, 0, 0, 1],
        ]
    )
    c = np.array([-0.75, 20, -0.5, 6, 0, 0, 0])
    for rule in ("dantzig", "bland"):
        res = simplex_from_basis(A, np.array([0.0, 0.0, 1.0]), c, [4, 5, 6], 1000, rule=rule)
        assert res.status == "optimal"
        assert res.objective == pytest.approx(-1.25)


@given(st.integers(1, 5), st.integers(1, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_agrees_with_scipy(m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    x_feas = rng.uniform(0, 2, size=n)
    b = A @ x_feas  # feasible by construction
    c = rng.integers(0, 5, size=n).astype(float)  # non-negative cost keeps it bounded
    ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
    ours = solve_standard_lp(A, b, c)
    assert ref.status == 0
    assert ours.status == "optimal"
    assert ours.objective == pytest.approx(ref.fun, abs=1e-7)
    assert np.allclose(A @ ours.x, b, atol=1e-8)
    assert np.all(ours.x >= 0)
