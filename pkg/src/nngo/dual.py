"""Forward-mode derivatives via dual numbers carrying a gradient vector.

One evaluation with n-component gradients yields the full gradient of a
scalar expression with respect to all n variables, which is all the local
search and the Jacobian of a small network need.
"""

from __future__ import annotations

import math


class Dual:
    __slots__ = ("val", "grad")

    def __init__(self, val: float, grad: tuple):
        self.val = val
        self.grad = grad

    def __repr__(self) -> str:
        return f"Dual({self.val}, {self.grad})"


def d_const(value: float, n: int) -> Dual:
    return Dual(value, (0.0,) * n)


def d_variable(i: int, value: float, n: int) -> Dual:
    return Dual(value, tuple(1.0 if j == i else 0.0 for j in range(n)))


def d_add(a: Dual, b: Dual) -> Dual:
    return Dual(a.val + b.val, tuple(x + y for x, y in zip(a.grad, b.grad)))


def d_sub(a: Dual, b: Dual) -> Dual:
    return Dual(a.val - b.val, tuple(x - y for x, y in zip(a.grad, b.grad)))


def d_neg(a: Dual) -> Dual:
    return Dual(-a.val, tuple(-x for x in a.grad))


def d_mul(a: Dual, b: Dual) -> Dual:
    return Dual(a.val * b.val,
                tuple(a.val * y + b.val * x for x, y in zip(a.grad, b.grad)))


def d_recip(a: Dual) -> Dual:
    inv = 1.0 / a.val
    scale = -inv * inv
    return Dual(inv, tuple(scale * x for x in a.grad))


def d_powint(a: Dual, k: int) -> Dual:
    if k < 0:
        raise ValueError(f"integer power must be non-negative, got {k}")
    if k == 0:
        return Dual(1.0, (0.0,) * len(a.grad))
    scale = k * a.val ** (k - 1)
    return Dual(a.val ** k, tuple(scale * x for x in a.grad))


def d_exp(a: Dual) -> Dual:
    v = math.exp(a.val)
    return Dual(v, tuple(v * x for x in a.grad))


def d_tanh(a: Dual) -> Dual:
    t = math.tanh(a.val)
    scale = 1.0 - t * t
    return Dual(t, tuple(scale * x for x in a.grad))


def d_sigmoid(a: Dual) -> Dual:
    s = 1.0 / (1.0 + math.exp(-a.val))
    scale = s * (1.0 - s)
    return Dual(s, tuple(scale * x for x in a.grad))


def d_affine(terms, constant: float = 0.0, n: int = 0) -> Dual:
    if not terms:
        return d_const(constant, n)
    dim = len(terms[0][1].grad)
    val = constant
    grad = [0.0] * dim
    for c, v in terms:
        val += c * v.val
        for j in range(dim):
            grad[j] += c * v.grad[j]
    return Dual(val, tuple(grad))
