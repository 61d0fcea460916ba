"""Dense two-phase simplex for the small node relaxation subproblems.

The branch-and-bound linearizations produce tiny linear programs: a handful
of box-bounded variables and one row per constraint cut. A textbook tableau
implementation with Bland's rule is entirely adequate at this scale and
keeps the solver dependency-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    x: Optional[np.ndarray]
    objective: Optional[float]


def solve_box_lp(c, a_ub, b_ub, lower, upper) -> LpResult:
    """Minimize c.x subject to a_ub @ x <= b_ub and lower <= x <= upper.

    All bounds must be finite. Upper bounds enter as explicit rows after the
    shift to non-negative variables.
    """
    c = np.asarray(c, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = c.size
    a_ub = np.asarray(a_ub, dtype=float).reshape(-1, n) if len(a_ub) else np.zeros((0, n))
    b_ub = np.asarray(b_ub, dtype=float)

    # shift x = lower + y, y >= 0, y <= width
    width = upper - lower
    shift_obj = float(c @ lower)
    rows = np.vstack([a_ub, np.eye(n)])
    rhs = np.concatenate([b_ub - a_ub @ lower if a_ub.size else b_ub, width])

    res = _two_phase(c, rows, rhs)
    if res.status != OPTIMAL:
        return res
    return LpResult(OPTIMAL, res.x + lower, res.objective + shift_obj)


def _two_phase(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> LpResult:
    """min c.y  s.t.  a y <= b, y >= 0 (b may be negative)."""
    m, n = a.shape
    # slack per row; rows with negative rhs are negated and get an artificial
    neg = b < 0.0
    a = a.copy()
    b = b.copy()
    a[neg] *= -1.0
    b[neg] *= -1.0
    slack_sign = np.where(neg, -1.0, 1.0)

    n_art = int(neg.sum())
    total = n + m + n_art
    tableau = np.zeros((m, total + 1))
    tableau[:, :n] = a
    tableau[:, n:n + m] = np.diag(slack_sign)
    basis = np.empty(m, dtype=int)
    art_col = n + m
    for i in range(m):
        if neg[i]:
            tableau[i, art_col] = 1.0
            basis[i] = art_col
            art_col += 1
        else:
            basis[i] = n + i
    tableau[:, -1] = b

    if n_art:
        phase1 = np.zeros(total)
        phase1[n + m:] = 1.0
        status = _iterate(tableau, basis, phase1)
        if status != OPTIMAL:
            return LpResult(status, None, None)
        art_value = sum(tableau[i, -1] for i in range(m) if basis[i] >= n + m)
        if art_value > FEAS_TOL:
            return LpResult(INFEASIBLE, None, None)
        _drive_out_artificials(tableau, basis, n + m)
        # freeze artificial columns for phase 2
        tableau[:, n + m:total] = 0.0

    cost = np.zeros(total)
    cost[:n] = c
    status = _iterate(tableau, basis, cost, forbidden_from=n + m)
    if status != OPTIMAL:
        return LpResult(status, None, None)
    y = np.zeros(n)
    for i, bi in enumerate(basis):
        if bi < n:
            y[bi] = tableau[i, -1]
    return LpResult(OPTIMAL, y, float(cost[:n] @ y))


def _reduced_costs(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray) -> np.ndarray:
    cb = cost[basis]
    return cost - cb @ tableau[:, :-1]


def _iterate(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray,
             forbidden_from: Optional[int] = None) -> str:
    m, w = tableau.shape
    total = w - 1
    limit = total if forbidden_from is None else forbidden_from
    for _ in range(20000):
        reduced = _reduced_costs(tableau, basis, cost)
        entering = -1
        for j in range(limit):  # Bland: smallest eligible index
            if reduced[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        col = tableau[:, entering]
        best_ratio = None
        leaving = -1
        for i in range(m):
            if col[i] > PIVOT_TOL:
                ratio = tableau[i, -1] / col[i]
                if (best_ratio is None or ratio < best_ratio - 1e-12
                        or (abs(ratio - best_ratio) <= 1e-12
                            and basis[i] < basis[leaving])):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            return UNBOUNDED
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
    raise RuntimeError("simplex iteration limit reached")


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * tableau[row]


def _drive_out_artificials(tableau: np.ndarray, basis: np.ndarray, n_real: int) -> None:
    for i in range(tableau.shape[0]):
        if basis[i] >= n_real and tableau[i, -1] <= FEAS_TOL:
            for j in range(n_real):
                if abs(tableau[i, j]) > PIVOT_TOL:
                    _pivot(tableau, i, j)
                    basis[i] = j
                    break
