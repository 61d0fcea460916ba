"""Bracketed scalar root finding: Newton iterations with a bisection fallback."""

from __future__ import annotations

from typing import Callable

from .errors import ConvergenceFailureError

NEWTON_TOL = 1e-12
ACCEPT_TOL = 1e-10
MAX_NEWTON = 50
MAX_BISECT = 200


def newton_bracketed(
    f: Callable[[float], float],
    df: Callable[[float], float],
    x0: float,
    lo: float,
    hi: float,
) -> float:
    """Root of f on [lo, hi], where f(lo) and f(hi) have opposite signs.

    Newton from x0 with the analytic derivative; falls back to bisection on
    the original bracket when an iterate escapes it or after MAX_NEWTON steps.
    """
    x = x0
    for _ in range(MAX_NEWTON):
        r = f(x)
        if abs(r) <= NEWTON_TOL:
            return x
        d = df(x)
        if d == 0.0:
            break
        x = x - r / d
        if not (lo <= x <= hi):
            break
    return _bisect(f, lo, hi)


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    f_lo = f(lo)
    if abs(f_lo) <= NEWTON_TOL:
        return lo
    f_hi = f(hi)
    if abs(f_hi) <= NEWTON_TOL:
        return hi
    neg_at_lo = f_lo < 0.0
    if neg_at_lo == (f_hi < 0.0):
        raise ConvergenceFailureError(
            f"no sign change on bracket [{lo}, {hi}] ({f_lo} vs {f_hi})"
        )
    a, b = lo, hi
    x = 0.5 * (a + b)
    for _ in range(MAX_BISECT):
        x = 0.5 * (a + b)
        r = f(x)
        if abs(r) <= NEWTON_TOL:
            return x
        if (r < 0.0) == neg_at_lo:
            a = x
        else:
            b = x
        if a == b:
            break
    if abs(f(x)) > ACCEPT_TOL:
        raise ConvergenceFailureError(
            f"residual {f(x)} above {ACCEPT_TOL} after bisection on [{lo}, {hi}]"
        )
    return x
