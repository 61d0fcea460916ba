import numpy as np
import pytest
from scipy.optimize import linprog

from nngo.simplex import INFEASIBLE, OPTIMAL, solve_box_lp


def test_single_variable_cut():
    res = solve_box_lp([1.0], [[-1.0]], [-0.5], [0.0], [1.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(0.5)
    assert res.x[0] == pytest.approx(0.5)


def test_unconstrained_box_minimum():
    res = solve_box_lp([2.0, -3.0], [], [], [0.0, 0.0], [1.0, 1.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-3.0)
    assert np.allclose(res.x, [0.0, 1.0])


def test_negative_lower_bounds():
    res = solve_box_lp([1.0], [[-1.0]], [0.3], [-1.0], [2.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-0.3)


def test_infeasible_cut():
    res = solve_box_lp([1.0], [[1.0]], [-1.0], [0.0], [1.0])
    assert res.status == INFEASIBLE


def test_degenerate_ties_terminate():
    # several redundant rows through the optimum exercise Bland's rule
    a = [[1.0, 1.0], [1.0, 1.0], [2.0, 2.0], [-1.0, 0.0]]
    b = [1.0, 1.0, 2.0, 0.0]
    res = solve_box_lp([-1.0, -1.0], a, b, [0.0, 0.0], [5.0, 5.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-1.0)


def test_random_lps_match_reference():
    rng = np.random.default_rng(100)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(0, 6))
        c = rng.normal(size=n)
        a = rng.normal(size=(m, n))
        b = rng.normal(size=m)
        lo = rng.uniform(-3, 0, size=n)
        hi = lo + rng.uniform(0.05, 4, size=n)
        mine = solve_box_lp(c, a, b, lo, hi)
        ref = linprog(c, A_ub=a if m else None, b_ub=b if m else None,
                      bounds=list(zip(lo, hi)), method="highs")
        if ref.status == 2:
            assert mine.status == INFEASIBLE
        else:
            assert ref.status == 0
            assert mine.status == OPTIMAL
            assert mine.objective == pytest.approx(ref.fun, rel=1e-7, abs=1e-7)
            assert np.all(mine.x >= lo - 1e-9)
            assert np.all(mine.x <= hi + 1e-9)
            if m:
                assert np.all(a @ mine.x <= b + 1e-7)
