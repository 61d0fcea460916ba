"""Closed-interval arithmetic with natural extensions for every expression primitive.

Endpoints are plain doubles; outward rounding is deliberately not performed.
Tightness tests elsewhere allow a documented 1e-12 slack, which is orders of
magnitude below the solver tolerances this library is used with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# exp raises above this instead of overflowing silently (double exp limit ~709)
EXP_ARG_LIMIT = 700.0


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError(f"interval endpoints must be numbers, got [{self.lo}, {self.hi}]")
        if math.isinf(self.lo) or math.isinf(self.hi):
            # domains are compact, so an infinite endpoint is always the
            # footprint of a floating-point overflow further down the chain
            raise OverflowError(
                f"interval endpoint overflowed, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"interval lower end {self.lo} exceeds upper end {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def iv_add(a: Interval, b: Interval) -> Interval:
    return Interval(a.lo + b.lo, a.hi + b.hi)


def iv_sub(a: Interval, b: Interval) -> Interval:
    return Interval(a.lo - b.hi, a.hi - b.lo)


def iv_neg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo)


def iv_scale(a: Interval, c: float) -> Interval:
    if c >= 0.0:
        return Interval(c * a.lo, c * a.hi)
    return Interval(c * a.hi, c * a.lo)


def iv_mul(a: Interval, b: Interval) -> Interval:
    p1 = a.lo * b.lo
    p2 = a.lo * b.hi
    p3 = a.hi * b.lo
    p4 = a.hi * b.hi
    return Interval(min(p1, p2, p3, p4), max(p1, p2, p3, p4))


def iv_recip(a: Interval) -> Interval:
    if a.lo <= 0.0 <= a.hi:
        raise DomainError(f"reciprocal of interval {a} containing zero")
    return Interval(1.0 / a.hi, 1.0 / a.lo)


def iv_exp(a: Interval) -> Interval:
    if a.hi > EXP_ARG_LIMIT:
        raise OverflowError(
            f"exp endpoint {a.hi} exceeds the overflow guard {EXP_ARG_LIMIT}"
        )
    return Interval(math.exp(a.lo), math.exp(a.hi))


def iv_tanh(a: Interval) -> Interval:
    return Interval(math.tanh(a.lo), math.tanh(a.hi))


def iv_powint(a: Interval, n: int) -> Interval:
    if n < 0:
        raise ValueError(f"integer power must be non-negative, got {n}")
    if n == 0:
        return Interval(1.0, 1.0)
    if n == 1:
        return a
    lo_p = a.lo ** n
    hi_p = a.hi ** n
    if n % 2 == 1:
        return Interval(lo_p, hi_p)
    if a.lo <= 0.0 <= a.hi:
        return Interval(0.0, max(lo_p, hi_p))
    return Interval(min(lo_p, hi_p), max(lo_p, hi_p))
