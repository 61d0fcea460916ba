"""Local search for upper bounding: projected gradient descent with an
exterior penalty on the inequality constraints.

Any feasible point with a low objective keeps branch-and-bound correct, so a
first-order method with exact forward-mode gradients is sufficient here. The
penalty weight escalates geometrically until the iterate is feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import Problem, evaluate_all, gradients_at
from .contexts import RealContext

ARMIJO_C = 1e-4
GRAD_TOL = 1e-8
FEAS_TOL = 1e-6
PENALTY_TARGET = 1e-8
PENALTY_MAX = 1e8
MAX_ITERS = 500
STALL_STEPS = 10

_REAL = RealContext()


@dataclass
class LocalResult:
    x: np.ndarray
    objective: float
    max_violation: float
    converged: bool


def _value(problem: Problem, x: np.ndarray, rho: float):
    """(penalized value, objective value, violation) at x."""
    obj, cons = evaluate_all(problem, _REAL, [float(v) for v in x])
    val = obj
    viol = 0.0
    for g in cons:
        viol = max(viol, g)
        if g > 0.0:
            val += rho * g * g
    return val, obj, max(0.0, viol)


def _value_grad(problem: Problem, x: np.ndarray, rho: float):
    obj, cons = gradients_at(problem, x)
    val = obj.val
    grad = np.array(obj.grad, dtype=float)
    viol = 0.0
    for g in cons:
        viol = max(viol, g.val)
        if g.val > 0.0:
            val += rho * g.val * g.val
            grad += (2.0 * rho * g.val) * np.array(g.grad, dtype=float)
    return val, grad, obj.val, max(0.0, viol)


def _descend(problem: Problem, x, lo, hi, rho: float, max_iters: int):
    """Projected gradient descent on the penalized objective at fixed rho.

    The backtracking line search halves the step until the Armijo condition
    holds; the accepted step size carries over (doubled) into the next
    iteration. Stops at stationarity of the projected gradient, on a long
    stall, or at the iteration budget.
    """
    val, grad, _, _ = _value_grad(problem, x, rho)
    t = 1.0
    stall = 0
    for _ in range(max_iters):
        step = np.clip(x - grad, lo, hi) - x
        if float(np.linalg.norm(step)) <= GRAD_TOL:
            break
        t = min(2.0 * t, 1.0)
        accepted = False
        while t >= 1e-16:
            x_new = np.clip(x - t * grad, lo, hi)
            move = x_new - x
            val_new, _, _ = _value(problem, x_new, rho)
            if val_new <= val + ARMIJO_C * float(grad @ move):
                stall = stall + 1 if val - val_new <= 1e-12 * (1.0 + abs(val)) else 0
                x = x_new
                val, grad, _, _ = _value_grad(problem, x, rho)
                accepted = True
                break
            t *= 0.5
        if not accepted or stall >= STALL_STEPS:
            break
    return x


def local_solve(problem: Problem, x0, box=None, max_iters: int = MAX_ITERS) -> LocalResult:
    """Descend from x0 inside the box (defaults to the problem box).

    Each penalty stage runs its own descent; the weight grows tenfold while
    the iterate stays infeasible. A converged result is feasible and no
    worse than the start.
    """
    if box is None:
        box = problem.box
    lo = np.array([b.lo for b in box])
    hi = np.array([b.hi for b in box])
    x = np.clip(np.asarray(x0, dtype=float), lo, hi)

    _, f_start, viol_start = _value(problem, x, 0.0)
    rho = 10.0
    while True:
        x = _descend(problem, x, lo, hi, rho, max_iters)
        _, _, viol = _value(problem, x, 0.0)
        if viol <= PENALTY_TARGET or rho >= PENALTY_MAX:
            break
        rho *= 10.0

    _, f_final, viol_final = _value(problem, x, 0.0)
    converged = bool(viol_final <= FEAS_TOL and f_final <= f_start + 1e-12)
    if not converged and viol_start <= FEAS_TOL and f_final > f_start:
        # descent went nowhere useful; report the start point honestly
        x = np.clip(np.asarray(x0, dtype=float), lo, hi)
        f_final, viol_final = f_start, viol_start
    return LocalResult(x, float(f_final), float(viol_final), converged)
