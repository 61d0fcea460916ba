"""Evaluation contexts: one arithmetic protocol, four value domains.

Every context exposes the same operation set (const, affine, add, sub, mul,
div, neg, recip, powint, exp, tanh, sigmoid), so the network forward pass
and the expression interpreter are written once and run over plain reals,
intervals, McCormick relaxation values, or dual numbers. The real context
accepts numpy arrays as well, which gives vectorized evaluation for free.
"""

from __future__ import annotations

import math

import numpy as np

from . import dual as du
from . import envelopes as env
from . import interval as iv
from . import mccormick as mc
from .envelopes import ActivationMode
from .errors import DomainError
from .interval import Interval


class RealContext:
    """Plain evaluation on floats or numpy arrays."""

    def const(self, c):
        return c

    def affine(self, terms, constant=0.0):
        total = constant
        for c, v in terms:
            total = total + c * v
        return total

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def recip(self, a):
        return 1.0 / a

    def powint(self, a, k):
        return a ** k

    # math.* on plain floats is much faster than the numpy ufunc round trip
    def exp(self, a):
        if type(a) is float:
            return math.exp(a)
        return np.exp(a)

    def tanh(self, a):
        if type(a) is float:
            return math.tanh(a)
        return np.tanh(a)

    def sigmoid(self, a):
        if type(a) is float:
            return 1.0 / (1.0 + math.exp(-a))
        return 1.0 / (1.0 + np.exp(-a))


class IntervalContext:
    """Natural interval extension; tanh/sigmoid honor the relaxation mode."""

    def __init__(self, mode: ActivationMode = ActivationMode.ENVELOPE):
        self.mode = mode

    def const(self, c):
        return Interval(c, c)

    def affine(self, terms, constant=0.0):
        lo = hi = constant
        for c, v in terms:
            if c >= 0.0:
                lo += c * v.lo
                hi += c * v.hi
            else:
                lo += c * v.hi
                hi += c * v.lo
        return Interval(lo, hi)

    def add(self, a, b):
        return iv.iv_add(a, b)

    def sub(self, a, b):
        return iv.iv_sub(a, b)

    def mul(self, a, b):
        return iv.iv_mul(a, b)

    def div(self, a, b):
        return iv.iv_mul(a, iv.iv_recip(b))

    def neg(self, a):
        return iv.iv_neg(a)

    def recip(self, a):
        return iv.iv_recip(a)

    def powint(self, a, k):
        return iv.iv_powint(a, k)

    def exp(self, a):
        return iv.iv_exp(a)

    def tanh(self, a):
        return env.iv_tanh_mode(a, self.mode)

    def sigmoid(self, a):
        return env.iv_sigmoid_mode(a, self.mode)


class McCormickContext:
    """Relaxation propagation over n variables at one evaluation point."""

    def __init__(self, n: int, mode: ActivationMode = ActivationMode.ENVELOPE):
        self.n = n
        self.mode = mode

    def variable(self, i: int, box: Interval, point: float):
        return mc.mc_variable(i, box, point, self.n)

    def const(self, c):
        return mc.mc_constant(c, self.n)

    def affine(self, terms, constant=0.0):
        return mc.mc_affine(terms, constant, n=self.n)

    def add(self, a, b):
        return mc.mc_add(a, b)

    def sub(self, a, b):
        return mc.mc_sub(a, b)

    def mul(self, a, b):
        return mc.mc_mul(a, b)

    def div(self, a, b):
        return mc.mc_mul(a, mc.mc_recip(b))

    def neg(self, a):
        return mc.mc_neg(a)

    def recip(self, a):
        return mc.mc_recip(a)

    def powint(self, a, k):
        return mc.mc_powint(a, k)

    def exp(self, a):
        return mc.mc_exp(a)

    def tanh(self, a):
        return env.mc_tanh(a, self.mode)

    def sigmoid(self, a):
        return env.mc_sigmoid(a, self.mode)


class DualContext:
    """First-order forward-mode derivatives over n variables."""

    def __init__(self, n: int):
        self.n = n

    def variable(self, i: int, value: float):
        return du.d_variable(i, value, self.n)

    def const(self, c):
        return du.d_const(c, self.n)

    def affine(self, terms, constant=0.0):
        return du.d_affine(terms, constant, n=self.n)

    def add(self, a, b):
        return du.d_add(a, b)

    def sub(self, a, b):
        return du.d_sub(a, b)

    def mul(self, a, b):
        return du.d_mul(a, b)

    def div(self, a, b):
        if a.val == 0.0 and b.val == 0.0:
            raise DomainError("0/0 in dual evaluation")
        return du.d_mul(a, du.d_recip(b))

    def neg(self, a):
        return du.d_neg(a)

    def recip(self, a):
        return du.d_recip(a)

    def powint(self, a, k):
        return du.d_powint(a, k)

    def exp(self, a):
        return du.d_exp(a)

    def tanh(self, a):
        return du.d_tanh(a)

    def sigmoid(self, a):
        return du.d_sigmoid(a)
