"""Convex/concave hulls of the activation functions and exp-based rewrites.

On a box [lo, hi], tanh is convex left of zero and concave right of zero, so
its hull is tanh itself on one side and a chord on the other. On mixed-sign
boxes the underestimator follows tanh up to a tangency point t_cv <= 0 and
then the chord from (t_cv, tanh t_cv) to (hi, tanh hi); the overestimator is
the mirror image with a tangency point t_cc >= 0. Both tangency points are
roots of a slope-matching condition and are solved per box by a safeguarded
Newton iteration. The resulting hulls are C1 and strictly increasing, which
lets relaxations compose through them by plugging the inner estimator values
straight into the hull.

The sigmoid hull reuses the tanh hull through sig(x) = (1 + tanh(x/2)) / 2.

Four algebraically equivalent rewrites of tanh in terms of exp are also
provided; they produce much weaker relaxations and exist so that their
behavior (including overflow on wide boxes) can be compared against the hull.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import interval as iv
from . import mccormick as mc
from .interval import Interval
from .mccormick import McCormickValue
from .rootfind import newton_bracketed

# below this width a box is treated as a point and the hull collapses to tanh
THIN_BOX_WIDTH = 1e-12


class ActivationMode(str, enum.Enum):
    """How tanh and sigmoid are relaxed during bound propagation."""

    ENVELOPE = "envelope"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"


REFORMULATION_MODES = (ActivationMode.F1, ActivationMode.F2,
                       ActivationMode.F3, ActivationMode.F4)


@dataclass(frozen=True, slots=True)
class TangentPoints:
    """Arguments where the mixed-sign tanh hull switches between curve and chord,
    clamped into the box."""

    x_cu: float
    x_co: float


def _sech2(x: float) -> float:
    t = math.tanh(x)
    return 1.0 - t * t


def tangent_lower_unclamped(lo: float, hi: float) -> float | None:
    """Root x <= 0 of sech^2(x) = (tanh(hi) - tanh(x)) / (hi - x) inside [lo, 0].

    None when the root lies left of lo (the chord from lo is already below
    the curve everywhere, so the hull clamps to lo).
    """
    th_hi = math.tanh(hi)

    def r(x):
        t = math.tanh(x)
        return (1.0 - t * t) - (th_hi - t) / (hi - x)

    def dr(x):
        t = math.tanh(x)
        s = 1.0 - t * t
        span = hi - x
        return -2.0 * t * s - (-s * span + (th_hi - t)) / (span * span)

    if r(lo) >= 0.0:
        return None
    return newton_bracketed(r, dr, min(0.5 * lo, -0.1), lo, 0.0)


def tangent_upper_unclamped(lo: float, hi: float) -> float | None:
    """Root x >= 0 of sech^2(x) = (tanh(x) - tanh(lo)) / (x - lo) inside [0, hi]."""
    th_lo = math.tanh(lo)

    def r(x):
        t = math.tanh(x)
        return (1.0 - t * t) - (t - th_lo) / (x - lo)

    def dr(x):
        t = math.tanh(x)
        s = 1.0 - t * t
        span = x - lo
        return -2.0 * t * s - (s * span - (t - th_lo)) / (span * span)

    if r(hi) >= 0.0:
        return None
    return newton_bracketed(r, dr, max(0.5 * hi, 0.1), 0.0, hi)


def solve_tangent_points(box: Interval) -> TangentPoints:
    """Both hull switch points for a mixed-sign box, clamped into it."""
    if not box.lo < 0.0 < box.hi:
        raise ValueError(f"tangent points need a mixed-sign box, got {box}")
    x_cu = tangent_lower_unclamped(box.lo, box.hi)
    x_co = tangent_upper_unclamped(box.lo, box.hi)
    return TangentPoints(box.lo if x_cu is None else x_cu,
                         box.hi if x_co is None else x_co)


class TanhHull:
    """Pointwise-evaluable hull of tanh on one box.

    cv(x) and cc(x) return (value, derivative); the derivative is continuous
    across an interior tangency point because the chord slope there equals
    sech^2. When a tangency point clamps to a box edge the chord is the hull
    on the whole box and the curve branch is disabled, so the reported slope
    stays a valid sub/supergradient at the edge itself.
    """

    __slots__ = ("lo", "hi", "thin", "x_cu", "x_co",
                 "_cv_curve_until", "_cv_slope", "_cv_anchor_x", "_cv_anchor_f",
                 "_cc_curve_from", "_cc_slope", "_cc_anchor_x", "_cc_anchor_f")

    def __init__(self, box: Interval):
        lo, hi = box.lo, box.hi
        self.lo = lo
        self.hi = hi
        self.thin = (hi - lo) <= THIN_BOX_WIDTH
        self.x_cu = None
        self.x_co = None
        self._cv_curve_until = None
        self._cc_curve_from = None
        if self.thin:
            return
        th_lo = math.tanh(lo)
        th_hi = math.tanh(hi)
        secant = (th_hi - th_lo) / (hi - lo)
        if hi <= 0.0:
            # convex region: curve below, chord above
            self._cv_curve_until = hi
            self._cv_slope = None
            self._cv_anchor_x = self._cv_anchor_f = 0.0
            self._cc_slope = secant
            self._cc_anchor_x, self._cc_anchor_f = lo, th_lo
        elif lo >= 0.0:
            # concave region: chord below, curve above
            self._cv_slope = secant
            self._cv_anchor_x, self._cv_anchor_f = lo, th_lo
            self._cc_curve_from = lo
            self._cc_slope = None
            self._cc_anchor_x = self._cc_anchor_f = 0.0
        else:
            cu = tangent_lower_unclamped(lo, hi)
            co = tangent_upper_unclamped(lo, hi)
            self.x_cu = lo if cu is None else cu
            self.x_co = hi if co is None else co
            if cu is None:
                self._cv_slope = secant
                self._cv_anchor_x, self._cv_anchor_f = lo, th_lo
            else:
                self._cv_curve_until = cu
                th_cu = math.tanh(cu)
                self._cv_slope = (th_hi - th_cu) / (hi - cu)
                self._cv_anchor_x, self._cv_anchor_f = cu, th_cu
            if co is None:
                self._cc_slope = secant
                self._cc_anchor_x, self._cc_anchor_f = lo, th_lo
            else:
                self._cc_curve_from = co
                th_co = math.tanh(co)
                self._cc_slope = (th_co - th_lo) / (co - lo)
                self._cc_anchor_x, self._cc_anchor_f = co, th_co

    def cv(self, x: float):
        if self.thin:
            return math.tanh(x), _sech2(x)
        if self._cv_curve_until is not None and x <= self._cv_curve_until:
            return math.tanh(x), _sech2(x)
        return (self._cv_anchor_f + self._cv_slope * (x - self._cv_anchor_x),
                self._cv_slope)

    def cc(self, x: float):
        if self.thin:
            return math.tanh(x), _sech2(x)
        if self._cc_curve_from is not None and x >= self._cc_curve_from:
            return math.tanh(x), _sech2(x)
        return (self._cc_anchor_f + self._cc_slope * (x - self._cc_anchor_x),
                self._cc_slope)


def tanh_envelope(a: McCormickValue) -> McCormickValue:
    """Hull-based relaxation of tanh.

    Both hull sides increase monotonically, so composition plugs the inner
    cv into the underestimator and the inner cc into the overestimator; the
    subgradients scale by the hull derivative at those arguments.
    """
    hull = TanhHull(a.box)
    out_box = iv.iv_tanh(a.box)
    val_cv, der_cv = hull.cv(a.cv)
    val_cc, der_cc = hull.cc(a.cc)
    return McCormickValue(out_box, val_cv, val_cc,
                          tuple(der_cv * s for s in a.sub_cv),
                          tuple(der_cc * s for s in a.sub_cc))


def sigmoid_envelope(a: McCormickValue) -> McCormickValue:
    """Hull of the logistic function via sig(x) = (1 + tanh(x/2)) / 2."""
    half = mc.mc_scale(a, 0.5)
    t = tanh_envelope(half)
    return mc.mc_scale(t, 0.5, 0.5)


def tanh_reformulated(a: McCormickValue, variant: ActivationMode) -> McCormickValue:
    """Relaxation of tanh through one of its exp-based rewrites.

    Division is realized as multiplication with a reciprocal; wide boxes
    raise OverflowError from the exp step, mirroring how these rewrites fail
    in practice.
    """
    if variant == ActivationMode.F1:
        # (e^x - e^-x) / (e^x + e^-x)
        ep = mc.mc_exp(a)
        en = mc.mc_exp(mc.mc_neg(a))
        num = mc.mc_sub(ep, en)
        den = mc.mc_add(ep, en)
        return mc.mc_mul(num, mc.mc_recip(den))
    if variant == ActivationMode.F2:
        # (e^2x - 1) / (e^2x + 1)
        t = mc.mc_exp(mc.mc_scale(a, 2.0))
        num = mc.mc_scale(t, 1.0, -1.0)
        den = mc.mc_scale(t, 1.0, 1.0)
        return mc.mc_mul(num, mc.mc_recip(den))
    if variant == ActivationMode.F3:
        # 1 - 2 / (e^2x + 1)
        t = mc.mc_exp(mc.mc_scale(a, 2.0))
        den = mc.mc_scale(t, 1.0, 1.0)
        return mc.mc_scale(mc.mc_recip(den), -2.0, 1.0)
    if variant == ActivationMode.F4:
        # (1 - e^-2x) / (1 + e^-2x)
        t = mc.mc_exp(mc.mc_scale(a, -2.0))
        num = mc.mc_scale(t, -1.0, 1.0)
        den = mc.mc_scale(t, 1.0, 1.0)
        return mc.mc_mul(num, mc.mc_recip(den))
    raise ValueError(f"not a reformulation variant: {variant}")


def mc_tanh(a: McCormickValue, mode: ActivationMode) -> McCormickValue:
    if mode == ActivationMode.ENVELOPE:
        return tanh_envelope(a)
    return tanh_reformulated(a, mode)


def mc_sigmoid(a: McCormickValue, mode: ActivationMode) -> McCormickValue:
    if mode == ActivationMode.ENVELOPE:
        return sigmoid_envelope(a)
    half = mc.mc_scale(a, 0.5)
    t = tanh_reformulated(half, mode)
    return mc.mc_scale(t, 0.5, 0.5)


def iv_tanh_mode(a: Interval, mode: ActivationMode) -> Interval:
    """Interval bound of tanh under a relaxation mode.

    The rewrites are evaluated with interval algebra, so they inherit the
    dependency blowup and the overflow behavior of their exp terms.
    """
    if mode == ActivationMode.ENVELOPE:
        return iv.iv_tanh(a)
    if mode == ActivationMode.F1:
        ep = iv.iv_exp(a)
        en = iv.iv_exp(iv.iv_neg(a))
        return iv.iv_mul(iv.iv_sub(ep, en), iv.iv_recip(iv.iv_add(ep, en)))
    if mode == ActivationMode.F2:
        t = iv.iv_exp(iv.iv_scale(a, 2.0))
        one = Interval(1.0, 1.0)
        return iv.iv_mul(iv.iv_sub(t, one), iv.iv_recip(iv.iv_add(t, one)))
    if mode == ActivationMode.F3:
        t = iv.iv_exp(iv.iv_scale(a, 2.0))
        den = iv.iv_add(t, Interval(1.0, 1.0))
        return iv.iv_sub(Interval(1.0, 1.0), iv.iv_scale(iv.iv_recip(den), 2.0))
    if mode == ActivationMode.F4:
        t = iv.iv_exp(iv.iv_scale(a, -2.0))
        one = Interval(1.0, 1.0)
        return iv.iv_mul(iv.iv_sub(one, t), iv.iv_recip(iv.iv_add(one, t)))
    raise ValueError(f"unknown mode: {mode}")


def iv_sigmoid_mode(a: Interval, mode: ActivationMode) -> Interval:
    t = iv_tanh_mode(iv.iv_scale(a, 0.5), mode)
    return iv.iv_scale(iv.iv_add(t, Interval(1.0, 1.0)), 0.5)
