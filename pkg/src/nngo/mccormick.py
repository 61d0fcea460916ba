"""McCormick relaxation values and their propagation rules.

A relaxation value tracks, for one factor of an expression over a fixed
variable box, its natural interval bounds together with the values of a
convex underestimator and a concave overestimator at a single evaluation
point, plus subgradients of both estimators with respect to the n
optimization variables. Composing factors with the rules below yields valid
relaxations of whole expressions that a branch-and-bound solver can
linearize at the node centerpoint.
"""

from __future__ import annotations

import math

from . import interval as iv
from .errors import MixedContextError, PointOutsideBoxError
from .interval import Interval
from .rootfind import newton_bracketed

# tags for the argument selected by the median rule
_FROM_CV = 0
_FROM_CC = 1
_FROM_CONST = 2


class McCormickValue:
    """Interval bounds plus convex/concave estimator values and subgradients.

    Construction cuts the estimator values against the interval bounds; a
    binding cut zeroes the corresponding subgradient (a constant bound is a
    valid estimator with zero slope).
    """

    __slots__ = ("box", "cv", "cc", "sub_cv", "sub_cc")

    def __init__(self, box: Interval, cv: float, cc: float,
                 sub_cv: tuple, sub_cc: tuple):
        if cv < box.lo:
            cv = box.lo
            sub_cv = (0.0,) * len(sub_cv)
        if cc > box.hi:
            cc = box.hi
            sub_cc = (0.0,) * len(sub_cc)
        self.box = box
        self.cv = cv
        self.cc = cc
        self.sub_cv = sub_cv
        self.sub_cc = sub_cc

    @property
    def n(self) -> int:
        return len(self.sub_cv)

    def __repr__(self) -> str:
        return (f"McCormickValue(box={self.box}, cv={self.cv}, cc={self.cc}, "
                f"sub_cv={self.sub_cv}, sub_cc={self.sub_cc})")


def mc_constant(value: float, n: int) -> McCormickValue:
    zeros = (0.0,) * n
    return McCormickValue(Interval(value, value), value, value, zeros, zeros)


def mc_variable(i: int, box: Interval, point: float, n: int) -> McCormickValue:
    if not box.contains(point):
        raise PointOutsideBoxError(f"point {point} outside box {box}")
    if not 0 <= i < n:
        raise MixedContextError(f"variable index {i} out of range for n={n}")
    unit = tuple(1.0 if j == i else 0.0 for j in range(n))
    return McCormickValue(box, point, point, unit, unit)


def _check_same_n(values) -> int:
    n = values[0].n
    for v in values[1:]:
        if v.n != n:
            raise MixedContextError(
                f"subgradient lengths disagree ({v.n} vs {n})"
            )
    return n


def mc_affine(terms, constant: float = 0.0, n: int | None = None) -> McCormickValue:
    """Exact relaxation of sum(coeff * value) + constant.

    Positive coefficients pair cv with cv and cc with cc; negative ones swap.
    """
    values = [v for _, v in terms]
    if not values:
        return mc_constant(constant, 0 if n is None else n)
    dim = _check_same_n(values)
    if n is not None and n != dim:
        raise MixedContextError(f"expected subgradient length {n}, got {dim}")
    lo = hi = cv = cc = constant
    sub_cv = [0.0] * dim
    sub_cc = [0.0] * dim
    for c, v in terms:
        if c >= 0.0:
            lo += c * v.box.lo
            hi += c * v.box.hi
            cv += c * v.cv
            cc += c * v.cc
            vcv, vcc = v.sub_cv, v.sub_cc
        else:
            lo += c * v.box.hi
            hi += c * v.box.lo
            cv += c * v.cc
            cc += c * v.cv
            vcv, vcc = v.sub_cc, v.sub_cv
        for j in range(dim):
            sub_cv[j] += c * vcv[j]
            sub_cc[j] += c * vcc[j]
    return McCormickValue(Interval(lo, hi), cv, cc, tuple(sub_cv), tuple(sub_cc))


def mc_add(a: McCormickValue, b: McCormickValue) -> McCormickValue:
    return mc_affine(((1.0, a), (1.0, b)))


def mc_sub(a: McCormickValue, b: McCormickValue) -> McCormickValue:
    return mc_affine(((1.0, a), (-1.0, b)))


def mc_neg(a: McCormickValue) -> McCormickValue:
    return mc_affine(((-1.0, a),))


def mc_scale(a: McCormickValue, c: float, constant: float = 0.0) -> McCormickValue:
    return mc_affine(((c, a),), constant)


def _under(c: float, v: McCormickValue):
    """Underestimate c*v: value and the subgradient source vector."""
    if c >= 0.0:
        return c * v.cv, v.sub_cv
    return c * v.cc, v.sub_cc


def _over(c: float, v: McCormickValue):
    if c >= 0.0:
        return c * v.cc, v.sub_cc
    return c * v.cv, v.sub_cv


def mc_mul(a: McCormickValue, b: McCormickValue) -> McCormickValue:
    """Bilinear product relaxation from the four-plane envelope of x*y."""
    n = _check_same_n((a, b))
    xl, xu = a.box.lo, a.box.hi
    yl, yu = b.box.lo, b.box.hi

    # underestimators: xy >= yl*x + xl*y - xl*yl and xy >= yu*x + xu*y - xu*yu
    va1, sa1 = _under(yl, a)
    vb1, sb1 = _under(xl, b)
    cv1 = va1 + vb1 - xl * yl
    va2, sa2 = _under(yu, a)
    vb2, sb2 = _under(xu, b)
    cv2 = va2 + vb2 - xu * yu
    if cv1 >= cv2:
        cv = cv1
        sub_cv = tuple(yl * sa1[j] + xl * sb1[j] for j in range(n))
    else:
        cv = cv2
        sub_cv = tuple(yu * sa2[j] + xu * sb2[j] for j in range(n))

    # overestimators: xy <= yu*x + xl*y - xl*yu and xy <= yl*x + xu*y - xu*yl
    wa1, ta1 = _over(yu, a)
    wb1, tb1 = _over(xl, b)
    cc1 = wa1 + wb1 - xl * yu
    wa2, ta2 = _over(yl, a)
    wb2, tb2 = _over(xu, b)
    cc2 = wa2 + wb2 - xu * yl
    if cc1 <= cc2:
        cc = cc1
        sub_cc = tuple(yu * ta1[j] + xl * tb1[j] for j in range(n))
    else:
        cc = cc2
        sub_cc = tuple(yl * ta2[j] + xu * tb2[j] for j in range(n))

    return McCormickValue(iv.iv_mul(a.box, b.box), cv, cc, sub_cv, sub_cc)


def _mid(cv: float, cc: float, arg: float):
    """Median of (cv, cc, arg) with the source of the selected value.

    Relies on cv <= cc, which construction guarantees.
    """
    if arg <= cv:
        return cv, _FROM_CV
    if arg >= cc:
        return cc, _FROM_CC
    return arg, _FROM_CONST


def _chain(source: int, der: float, a: McCormickValue) -> tuple:
    if source == _FROM_CONST or der == 0.0:
        return (0.0,) * a.n
    sub = a.sub_cv if source == _FROM_CV else a.sub_cc
    return tuple(der * s for s in sub)


def mc_univariate(a: McCormickValue, out_box: Interval,
                  cv_fn, cv_argmin: float,
                  cc_fn, cc_argmax: float) -> McCormickValue:
    """General univariate composition by the median rule.

    cv_fn / cc_fn map an argument in a.box to (value, derivative) of the
    outer convex underestimator / concave overestimator; cv_argmin and
    cc_argmax are their extremal arguments over a.box.
    """
    z_cv, src_cv = _mid(a.cv, a.cc, cv_argmin)
    val_cv, der_cv = cv_fn(z_cv)
    z_cc, src_cc = _mid(a.cv, a.cc, cc_argmax)
    val_cc, der_cc = cc_fn(z_cc)
    return McCormickValue(out_box, val_cv, val_cc,
                          _chain(src_cv, der_cv, a),
                          _chain(src_cc, der_cc, a))


def _secant_fn(x0: float, f0: float, x1: float, f1: float):
    if x1 == x0:
        return lambda z: (f0, 0.0)
    slope = (f1 - f0) / (x1 - x0)
    return lambda z: (f0 + slope * (z - x0), slope)


def mc_exp(a: McCormickValue) -> McCormickValue:
    out_box = iv.iv_exp(a.box)
    lo, hi = a.box.lo, a.box.hi
    if hi - lo == 0.0:
        v = math.exp(lo)
        return mc_univariate(a, out_box, lambda z: (v, v), lo, lambda z: (v, v), lo)
    cv_fn = lambda z: (math.exp(z), math.exp(z))
    cc_fn = _secant_fn(lo, out_box.lo, hi, out_box.hi)
    return mc_univariate(a, out_box, cv_fn, lo, cc_fn, hi)


def mc_recip(a: McCormickValue) -> McCormickValue:
    out_box = iv.iv_recip(a.box)  # raises DomainError through zero
    lo, hi = a.box.lo, a.box.hi
    if hi - lo == 0.0:
        v = 1.0 / lo
        return mc_univariate(a, out_box, lambda z: (v, 0.0), lo, lambda z: (v, 0.0), lo)
    fn = lambda z: (1.0 / z, -1.0 / (z * z))
    secant = _secant_fn(lo, 1.0 / lo, hi, 1.0 / hi)
    if lo > 0.0:
        # convex decreasing: function below, secant above
        return mc_univariate(a, out_box, fn, hi, secant, lo)
    # hi < 0: concave decreasing: secant below, function above
    return mc_univariate(a, out_box, secant, hi, fn, lo)


def mc_powint(a: McCormickValue, k: int) -> McCormickValue:
    if k < 0:
        raise ValueError(f"integer power must be non-negative, got {k}")
    if k == 0:
        return mc_constant(1.0, a.n)
    if k == 1:
        return a
    out_box = iv.iv_powint(a.box, k)
    lo, hi = a.box.lo, a.box.hi
    if hi - lo == 0.0:
        v = lo ** k
        return mc_univariate(a, out_box, lambda z: (v, 0.0), lo, lambda z: (v, 0.0), lo)

    fn = lambda z: (z ** k, k * z ** (k - 1))
    secant = _secant_fn(lo, lo ** k, hi, hi ** k)
    sec_slope = (hi ** k - lo ** k) / (hi - lo)

    if k % 2 == 0:
        # convex: function below with minimum where |z| is smallest
        argmin = 0.0 if lo <= 0.0 <= hi else (lo if lo > 0.0 else hi)
        argmax = hi if sec_slope >= 0.0 else lo
        return mc_univariate(a, out_box, fn, argmin, secant, argmax)

    if lo >= 0.0:
        # odd power on the non-negative side: convex increasing
        return mc_univariate(a, out_box, fn, lo, secant, hi)
    if hi <= 0.0:
        # odd power on the non-positive side: concave increasing
        return mc_univariate(a, out_box, secant, lo, fn, hi)

    # mixed sign: concave-then-convex, hull via a tangent from each endpoint
    cv_fn = _odd_power_under(lo, hi, k)
    cc_fn = _odd_power_over(lo, hi, k)
    return mc_univariate(a, out_box, cv_fn, lo, cc_fn, hi)


def _odd_power_tangent(lo: float, hi: float, k: int) -> float:
    """Tangency point t in (0, hi] of the line through (lo, lo**k) touching
    z**k from below; hi is returned when the true tangency lies beyond it."""
    f_lo = lo ** k

    def r(t):
        return k * t ** (k - 1) * (t - lo) - (t ** k - f_lo)

    def dr(t):
        return k * (k - 1) * t ** (k - 2) * (t - lo)

    # r(0) = lo**k < 0; no sign change means the hull is the plain secant
    if r(hi) <= 0.0:
        return hi
    return newton_bracketed(r, dr, 0.5 * hi, 0.0, hi)


def _odd_power_under(lo: float, hi: float, k: int):
    t = _odd_power_tangent(lo, hi, k)
    f_lo = lo ** k
    slope = k * t ** (k - 1) if t < hi else (hi ** k - f_lo) / (hi - lo)

    def cv_fn(z):
        if z >= t:
            return z ** k, k * z ** (k - 1)
        return f_lo + slope * (z - lo), slope

    return cv_fn


def _odd_power_over(lo: float, hi: float, k: int):
    # mirror of the underestimator: odd symmetry of z**k
    t = _odd_power_tangent(-hi, -lo, k)
    f_hi = hi ** k
    slope = k * t ** (k - 1) if t < -lo else (f_hi - lo ** k) / (hi - lo)

    def cc_fn(z):
        if z <= -t:
            return z ** k, k * z ** (k - 1)
        return f_hi + slope * (z - hi), slope

    return cc_fn


def validate(v: McCormickValue, slack: float = 1e-9) -> None:
    """Consistency check used by tests: ordering and box containment."""
    if not (v.box.lo - slack <= v.cv <= v.cc + slack <= v.box.hi + 2 * slack):
        raise AssertionError(f"estimators out of order or outside box: {v}")
    if len(v.sub_cv) != len(v.sub_cc):
        raise AssertionError(f"subgradient lengths disagree: {v}")
