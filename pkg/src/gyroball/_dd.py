"""Vectorised double-double arithmetic.

A value is a pair ``(hi, lo)`` of float64 arrays with ``|lo| <= ulp(hi)/2``,
giving roughly 32 significant digits. Only what the gyrator route needs is
here: sums, products, quotients and Möbius addition.
"""

from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def from_float(a):
    a = np.asarray(a, dtype=np.float64)
    return a, np.zeros_like(a)


def add(x, y):
    s, e = _two_sum(x[0], y[0])
    t, f = _two_sum(x[1], y[1])
    s, e = _quick_two_sum(s, e + t)
    return _quick_two_sum(s, e + f)


def neg(x):
    return -x[0], -x[1]


def mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _quick_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def div(x, y):
    q1 = x[0] / y[0]
    r = add(x, neg(mul(y, from_float(q1))))
    q2 = r[0] / y[0]
    r = add(r, neg(mul(y, from_float(q2))))
    q3 = r[0] / y[0]
    q1, q2 = _quick_two_sum(q1, q2)
    return add((q1, q2), from_float(q3))


def dot(x, y):
    """Inner product over the last axis."""
    p = mul(x, y)
    acc = (p[0][..., 0], p[1][..., 0])
    for i in range(1, p[0].shape[-1]):
        acc = add(acc, (p[0][..., i], p[1][..., i]))
    return acc


def _expand(x):
    return x[0][..., None], x[1][..., None]


def mobius_add(u, v):
    """Möbius sum of double-double vector stacks ``(..., n)``."""
    one = (1.0, 0.0)
    uv2 = mul(dot(u, v), (2.0, 0.0))
    uu = dot(u, u)
    vv = dot(v, v)
    a = add(add(one, uv2), vv)
    b = add(one, neg(uu))
    d = add(add(one, uv2), mul(uu, vv))
    num = add(mul(_expand(a), u), mul(_expand(b), v))
    return div(num, _expand(d))
