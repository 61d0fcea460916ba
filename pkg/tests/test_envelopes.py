import math

import numpy as np
import pytest

from nngo.envelopes import (ActivationMode, REFORMULATION_MODES, TanhHull,
                            sigmoid_envelope, solve_tangent_points,
                            tanh_envelope, tanh_reformulated,
                            tangent_lower_unclamped, tangent_upper_unclamped)
from nngo.interval import Interval
from nngo.mccormick import mc_constant, mc_variable, validate

from oracles import bisect_tangent_lower, bisect_tangent_upper, central_difference


def seed(box, point):
    return mc_variable(0, box, point, 1)


def _residual_lower(x, lo, hi):
    t = math.tanh(x)
    return (1 - t * t) - (math.tanh(hi) - t) / (hi - x)


def test_tangent_points_symmetric_box():
    pts = solve_tangent_points(Interval(-2, 2))
    assert abs(_residual_lower(pts.x_cu, -2, 2)) <= 1e-12
    assert pts.x_co == pytest.approx(-pts.x_cu, abs=1e-10)
    oracle = bisect_tangent_lower(-2, 2)
    assert pts.x_cu == pytest.approx(oracle, abs=1e-10)


def test_tangent_points_asymmetric_box():
    pts = solve_tangent_points(Interval(-10, 0.1))
    assert -10 <= pts.x_cu <= 0
    assert abs(_residual_lower(pts.x_cu, -10, 0.1)) <= 1e-10
    assert 0 <= pts.x_co <= 0.1


def test_tangent_point_clamps_to_box_edge():
    # on [-0.5, 3] the true lower tangency lies left of the box
    assert _residual_lower(-0.5, -0.5, 3.0) > 0.0
    pts = solve_tangent_points(Interval(-0.5, 3.0))
    assert pts.x_cu == -0.5
    assert tangent_lower_unclamped(-0.5, 3.0) is None


def test_tangent_newton_matches_bisection_oracle():
    rng = np.random.default_rng(5)
    for _ in range(100):
        lo = float(rng.uniform(-8, -0.05))
        hi = float(rng.uniform(0.05, 8))
        mine = tangent_lower_unclamped(lo, hi)
        ref = bisect_tangent_lower(lo, hi)
        assert (mine is None) == (ref is None)
        if mine is not None:
            assert mine == pytest.approx(ref, abs=1e-9)
        mine_up = tangent_upper_unclamped(lo, hi)
        ref_up = bisect_tangent_upper(lo, hi)
        assert (mine_up is None) == (ref_up is None)
        if mine_up is not None:
            assert mine_up == pytest.approx(ref_up, abs=1e-9)


def test_envelope_negative_box_example():
    out = tanh_envelope(seed(Interval(-2, 0), -1.0))
    assert out.cv == pytest.approx(math.tanh(-1), abs=1e-9)
    assert out.cc == pytest.approx(math.tanh(-2) / 2, abs=1e-5)


def test_envelope_positive_box_example():
    out = tanh_envelope(seed(Interval(0, 2), 1.0))
    assert out.cc == pytest.approx(math.tanh(1), abs=1e-9)
    assert out.cv == pytest.approx(math.tanh(2) / 2, abs=1e-5)


def test_envelope_symmetric_box_at_zero():
    out = tanh_envelope(seed(Interval(-1, 1), 0.0))
    assert out.cv <= 0.0 <= out.cc
    assert out.cc == pytest.approx(-out.cv, abs=1e-10)


def test_envelope_properties_random_boxes():
    rng = np.random.default_rng(6)
    for _ in range(60):
        lo, hi = np.sort(rng.uniform(-6, 6, size=2))
        if hi - lo < 1e-3:
            continue
        box = Interval(lo, hi)
        hull = TanhHull(box)
        xs = np.linspace(lo, hi, 41)
        cv = np.array([hull.cv(float(x))[0] for x in xs])
        cc = np.array([hull.cc(float(x))[0] for x in xs])
        th = np.tanh(xs)
        # sandwich
        assert np.all(cv <= th + 1e-9)
        assert np.all(cc >= th - 1e-9)
        # touches at the box ends
        assert cv[0] == pytest.approx(th[0], abs=1e-9)
        assert cv[-1] == pytest.approx(th[-1], abs=1e-9)
        assert cc[0] == pytest.approx(th[0], abs=1e-9)
        assert cc[-1] == pytest.approx(th[-1], abs=1e-9)
        # midpoint convexity/concavity
        assert np.all(cv[1:-1] <= 0.5 * (cv[:-2] + cv[2:]) + 1e-9)
        assert np.all(cc[1:-1] >= 0.5 * (cc[:-2] + cc[2:]) - 1e-9)
        # strict monotonicity
        assert np.all(np.diff(cv) > 0)
        assert np.all(np.diff(cc) > 0)


def test_envelope_c1_across_tangent_point():
    box = Interval(-2, 2)
    pts = solve_tangent_points(box)
    hull = TanhHull(box)
    for x in (pts.x_cu - 1e-3, pts.x_cu, pts.x_cu + 1e-3):
        analytic = hull.cv(x)[1]
        fd = central_difference(lambda z: hull.cv(z)[0], x)
        assert fd == pytest.approx(analytic, abs=1e-4)
    for x in (pts.x_co - 1e-3, pts.x_co, pts.x_co + 1e-3):
        analytic = hull.cc(x)[1]
        fd = central_difference(lambda z: hull.cc(z)[0], x)
        assert fd == pytest.approx(analytic, abs=1e-4)


def test_envelope_subgradient_scaling():
    # composition with a loose inner factor keeps the subgradient chain valid
    box = Interval(-1.5, 2.0)
    p0 = 0.3
    out0 = tanh_envelope(seed(box, p0))
    rng = np.random.default_rng(7)
    for _ in range(100):
        q = float(rng.uniform(box.lo, box.hi))
        out = tanh_envelope(seed(box, q))
        assert out.cv >= out0.cv + out0.sub_cv[0] * (q - p0) - 1e-9
        assert out.cc <= out0.cc + out0.sub_cc[0] * (q - p0) + 1e-9


def test_sigmoid_degenerate_and_symmetry():
    out = sigmoid_envelope(mc_constant(0.0, 1))
    assert out.cv == pytest.approx(0.5, abs=1e-12)
    assert out.cc == pytest.approx(0.5, abs=1e-12)
    sym = sigmoid_envelope(seed(Interval(-2, 2), 0.0))
    assert sym.cv + sym.cc == pytest.approx(1.0, abs=1e-10)


def test_sigmoid_matches_halved_tanh_envelope():
    out = sigmoid_envelope(seed(Interval(0, 4), 2.0))
    inner = tanh_envelope(seed(Interval(0, 2), 1.0))
    assert out.cv == pytest.approx(0.5 * (1 + inner.cv), abs=1e-12)
    assert out.cc == pytest.approx(0.5 * (1 + inner.cc), abs=1e-12)


def test_reformulations_degenerate_point():
    rng = np.random.default_rng(8)
    for _ in range(20):
        c = float(rng.uniform(-3, 3))
        a = mc_constant(c, 1)
        for mode in REFORMULATION_MODES:
            out = tanh_reformulated(a, mode)
            assert out.cv == pytest.approx(math.tanh(c), abs=1e-12)
            assert out.cc == pytest.approx(math.tanh(c), abs=1e-12)


def test_envelope_dominates_reformulations():
    out_env = tanh_envelope(seed(Interval(-1, 1), 0.0))
    f3 = tanh_reformulated(seed(Interval(-1, 1), 0.0), ActivationMode.F3)
    assert f3.cv <= out_env.cv + 1e-9
    assert f3.cc >= out_env.cc - 1e-9
    f1 = tanh_reformulated(seed(Interval(-1, 1), 0.0), ActivationMode.F1)
    assert f1.cv <= f3.cv + 1e-9


def test_reformulations_sandwich_tanh():
    rng = np.random.default_rng(9)
    for _ in range(40):
        lo, hi = np.sort(rng.uniform(-4, 4, size=2))
        if hi - lo < 1e-3:
            continue
        box = Interval(lo, hi)
        for p in rng.uniform(lo, hi, size=10):
            a = seed(box, float(p))
            for mode in REFORMULATION_MODES:
                out = tanh_reformulated(a, mode)
                validate(out)
                assert out.cv <= math.tanh(p) + 1e-9
                assert out.cc >= math.tanh(p) - 1e-9


def test_reformulations_overflow_is_typed():
    a = seed(Interval(-400, 400), 0.0)
    for mode in REFORMULATION_MODES:
        with pytest.raises(OverflowError):
            tanh_reformulated(a, mode)
    # the hull has no exp and handles the same box fine
    out = tanh_envelope(a)
    assert -1 <= out.cv <= out.cc <= 1
