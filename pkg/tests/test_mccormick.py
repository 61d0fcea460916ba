import math

import numpy as np
import pytest

from nngo.errors import DomainError, MixedContextError, PointOutsideBoxError
from nngo.interval import Interval
from nngo.mccormick import (McCormickValue, mc_affine, mc_constant, mc_exp,
                            mc_mul, mc_powint, mc_recip, mc_scale,
                            mc_variable, validate)


def var(i, lo, hi, point, n):
    return mc_variable(i, Interval(lo, hi), point, n)


def test_variable_examples():
    v = var(0, -1, 1, 0.0, 2)
    assert v.cv == v.cc == 0.0
    assert v.sub_cv == (1.0, 0.0)
    b = var(1, -3, 3, 3.0, 2)
    assert b.cv == b.cc == 3.0
    assert b.sub_cv == (0.0, 1.0)
    with pytest.raises(PointOutsideBoxError):
        var(0, -1, 1, 2.0, 1)


def test_affine_examples():
    x = var(0, 0, 1, 0.5, 1)
    y = mc_affine([(2.0, x)], 1.0)
    assert y.box == Interval(1, 3)
    assert y.cv == y.cc == 2.0
    assert y.sub_cv == (2.0,)

    # a - a: the box widens but the estimators stay exact
    a = var(0, -1, 1, 0.25, 1)
    d = mc_affine([(1.0, a), (-1.0, a)])
    assert d.box == Interval(-2, 2)
    assert d.cv == d.cc == 0.0

    c = mc_affine([], 5.0, n=3)
    assert c.box == Interval(5, 5)
    assert c.cv == c.cc == 5.0
    assert c.sub_cv == (0.0, 0.0, 0.0)


def test_affine_mixed_dimensions_rejected():
    a = var(0, 0, 1, 0.5, 1)
    b = var(0, 0, 1, 0.5, 2)
    with pytest.raises(MixedContextError):
        mc_affine([(1.0, a), (1.0, b)])


def test_mul_bilinear_at_origin():
    x = var(0, -1, 1, 0.0, 2)
    y = var(1, -1, 1, 0.0, 2)
    p = mc_mul(x, y)
    assert p.cv == pytest.approx(-1.0)
    assert p.cc == pytest.approx(1.0)
    assert p.box == Interval(-1, 1)


def test_mul_with_constant_matches_affine():
    x = var(0, -2, 3, 1.0, 1)
    c = mc_constant(2.0, 1)
    p = mc_mul(x, c)
    s = mc_scale(x, 2.0)
    assert p.cv == pytest.approx(s.cv)
    assert p.cc == pytest.approx(s.cc)
    assert p.box.lo == pytest.approx(s.box.lo)
    assert p.box.hi == pytest.approx(s.box.hi)


def test_mul_square_shape():
    x = var(0, 0, 2, 1.0, 1)
    p = mc_mul(x, x)
    assert p.cv >= 0.0
    assert p.cc <= 2.0 + 1e-12  # secant of z^2 on [0,2] at 1


def test_exp_example():
    x = var(0, 0, 1, 0.5, 1)
    e = mc_exp(x)
    assert e.cv == pytest.approx(math.exp(0.5), abs=1e-9)
    assert e.cc == pytest.approx(1 + (math.e - 1) * 0.5, abs=1e-9)


def test_recip_example():
    x = var(0, 1, 2, 1.5, 1)
    r = mc_recip(x)
    assert r.cv == pytest.approx(1 / 1.5, abs=1e-9)
    assert r.cc == pytest.approx(0.75, abs=1e-9)
    with pytest.raises(DomainError):
        mc_recip(var(0, -1, 1, 0.0, 1))


def test_recip_negative_box():
    x = var(0, -2, -1, -1.5, 1)
    r = mc_recip(x)
    # concave side is the function, convex side the secant
    assert r.cc == pytest.approx(-1 / 1.5, abs=1e-9)
    assert r.cv == pytest.approx(-0.75, abs=1e-9)


def test_powint_identity_and_constant():
    x = var(0, -1, 2, 0.5, 1)
    assert mc_powint(x, 1) is x
    one = mc_powint(x, 0)
    assert one.cv == one.cc == 1.0


def test_powint_even():
    x = var(0, -2, 1, 0.0, 1)
    p = mc_powint(x, 2)
    assert p.box == Interval(0, 4)
    assert p.cv == pytest.approx(0.0, abs=1e-12)
    # secant of z^2 from (-2,4) to (1,1) evaluated at 0
    assert p.cc == pytest.approx(4 + (1 - 4) / 3 * 2, abs=1e-9)


def test_powint_odd_mixed_tangent():
    # tangency of the line through (-1, -1) on z^3 sits exactly at 0.5
    from nngo.mccormick import _odd_power_tangent
    assert _odd_power_tangent(-1.0, 2.0, 3) == pytest.approx(0.5, abs=1e-10)


def _sample_value(rng, box, point, n=1, i=0):
    return mc_variable(i, box, point, n)


def _check_relaxation(op, ref, box, rng, samples=40, slack=1e-9):
    """op: McCormickValue -> McCormickValue on one variable; ref: float -> float.

    Checks the sandwich at the evaluation point, convexity/concavity by
    midpoints, and the subgradient inequality against sampled points.
    """
    points = rng.uniform(box.lo, box.hi, size=samples)
    values = {}
    for p in points:
        out = op(_sample_value(rng, box, float(p)))
        validate(out)
        v = ref(float(p))
        assert out.cv <= v + slack
        assert out.cc >= v - slack
        values[float(p)] = out
    pts = sorted(values)
    for a, b in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (a + b)
        out_mid = op(_sample_value(rng, box, mid))
        assert out_mid.cv <= 0.5 * (values[a].cv + values[b].cv) + slack
        assert out_mid.cc >= 0.5 * (values[a].cc + values[b].cc) - slack
    for p in pts[:10]:
        out = values[p]
        for q in pts:
            assert (values[q].cv >= out.cv + out.sub_cv[0] * (q - p) - slack)
            assert (values[q].cc <= out.cc + out.sub_cc[0] * (q - p) + slack)


def test_exp_relaxation_properties():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = np.sort(rng.uniform(-4, 4, size=2))
        _check_relaxation(mc_exp, math.exp, Interval(a, b), rng)


def test_recip_relaxation_properties():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.uniform(0.1, 3)
        b = a + rng.uniform(0.1, 3)
        _check_relaxation(mc_recip, lambda z: 1 / z, Interval(a, b), rng)
        _check_relaxation(mc_recip, lambda z: 1 / z, Interval(-b, -a), rng)


def test_powint_relaxation_properties():
    rng = np.random.default_rng(2)
    for k in (2, 3, 4, 5):
        for _ in range(15):
            a, b = np.sort(rng.uniform(-3, 3, size=2))
            if b - a < 1e-6:
                continue
            _check_relaxation(lambda v, k=k: mc_powint(v, k),
                              lambda z, k=k: z ** k, Interval(a, b), rng)


def test_mul_relaxation_sandwich():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a1, a2 = np.sort(rng.uniform(-3, 3, size=2))
        b1, b2 = np.sort(rng.uniform(-3, 3, size=2))
        A, B = Interval(a1, a2), Interval(b1, b2)
        for _ in range(20):
            px = float(rng.uniform(a1, a2))
            py = float(rng.uniform(b1, b2))
            x = mc_variable(0, A, px, 2)
            y = mc_variable(1, B, py, 2)
            out = mc_mul(x, y)
            validate(out)
            assert out.cv <= px * py + 1e-9
            assert out.cc >= px * py - 1e-9


def test_mul_subgradient_inequality():
    rng = np.random.default_rng(4)
    A, B = Interval(-2, 3), Interval(-1, 4)
    base = (1.0, 2.0)
    x = mc_variable(0, A, base[0], 2)
    y = mc_variable(1, B, base[1], 2)
    out = mc_mul(x, y)
    for _ in range(200):
        qx = float(rng.uniform(A.lo, A.hi))
        qy = float(rng.uniform(B.lo, B.hi))
        out_q = mc_mul(mc_variable(0, A, qx, 2), mc_variable(1, B, qy, 2))
        lin = (out.cv + out.sub_cv[0] * (qx - base[0])
               + out.sub_cv[1] * (qy - base[1]))
        assert out_q.cv >= lin - 1e-9
        lin_cc = (out.cc + out.sub_cc[0] * (qx - base[0])
                  + out.sub_cc[1] * (qy - base[1]))
        assert out_q.cc <= lin_cc + 1e-9


def test_cut_binds_to_interval_bounds():
    # a loose estimator is clipped to the interval bound with a zero subgradient
    v = McCormickValue(Interval(0, 1), -5.0, 7.0, (3.0,), (4.0,))
    assert v.cv == 0.0 and v.sub_cv == (0.0,)
    assert v.cc == 1.0 and v.sub_cc == (0.0,)
