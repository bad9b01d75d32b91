"""Möbius gyrogroup on the open unit ball.

All operations take points as arrays of shape ``(..., n)`` and broadcast over
leading axes, so a single call can process a whole sample of points.
Addition has two backends: the closed-form vector formula (``"direct"``, the
default) and the Clifford compact formula ``(u + v)(1 - uv)^{-1}``
(``"clifford"``). Gyrations likewise: the gyrator identity (``"gyrator"``) or
the rotor sandwich ``q w q^{-1}`` (``"rotor"``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _dd as dd
from . import clifford as cl
from ._validation import (
    TAU_BALL,
    as_float_array,
    check_ball,
    check_same_dim,
    sqnorm,
)
from .exceptions import NumericalEscape

__all__ = [
    "ADD_BACKENDS",
    "GYR_BACKENDS",
    "Gyration",
    "mobius_add",
    "mobius_add_direct",
    "mobius_add_clifford",
    "mobius_neg",
    "mobius_sub",
    "gyration",
    "gyration_rotor",
    "gyration_matrix",
    "project_into_ball",
    "ball_from_uniforms",
    "random_ball",
]

ADD_BACKENDS = ("direct", "clifford")
GYR_BACKENDS = ("gyrator", "rotor")


def _escape_check(r):
    gap = 1.0 - np.sqrt(sqnorm(r))
    if np.any(~(gap >= TAU_BALL)):
        raise NumericalEscape(
            f"result left the ball: 1 - |r| = {float(np.min(gap))!r} < {TAU_BALL:g}"
        )
    return r


def _pair(u, v, check):
    if check:
        u = check_ball(u, "u")
        v = check_ball(v, "v")
    else:
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
    check_same_dim(u, v)
    return u, v


def mobius_add_direct(u, v, check=True):
    """Möbius sum from the closed vector formula.

    Parameters
    ----------
    u, v : array-like, shape (..., n)
        Points of the ball; leading axes broadcast.
    check : bool, default=True
        Validate inputs and raise :class:`NumericalEscape` if rounding pushes
        the result onto the boundary. Pass ``False`` to get raw values.
    """
    u, v = _pair(u, v, check)
    # Same rational function, regrouped around s = u + v: the numerator is
    # |s|^2 u + (1 - |u|^2) s and the denominator |s|^2 + (1 - |u|^2)(1 - |v|^2),
    # a sum of non-negative terms, so nothing cancels and (-x) ⊕ x is exactly 0.
    s = u + v
    ss = sqnorm(s)
    cu = 1.0 - sqnorm(u)
    cv = 1.0 - sqnorm(v)
    r = (ss[..., None] * u + cu[..., None] * s) / (ss + cu * cv)[..., None]
    return _escape_check(r) if check else r


def mobius_add_clifford(u, v, check=True):
    """Möbius sum computed in the Clifford algebra as ``(u + v)(1 - uv)^{-1}``."""
    u, v = _pair(u, v, check)
    u, v = np.broadcast_arrays(u, v)
    inv = cl.one_minus_uv_inverse_array(u, v)
    r = cl.extract(cl.gp(cl.embed(u) + cl.embed(v), inv), check=check)
    return _escape_check(r) if check else r


def mobius_add(u, v, backend="direct", check=True):
    if backend == "direct":
        return mobius_add_direct(u, v, check=check)
    if backend == "clifford":
        return mobius_add_clifford(u, v, check=check)
    raise ValueError(f"unknown addition backend {backend!r}; choose from {ADD_BACKENDS}")


def mobius_neg(v):
    """Gyrogroup inverse, which on the ball is plain negation."""
    return -as_float_array(v, "v")


def mobius_sub(u, v, backend="direct", check=True):
    """``u ⊕ (⊖v)``."""
    return mobius_add(u, -np.asarray(v, dtype=np.float64), backend=backend, check=check)


def _rotor_array(u, v):
    # q = (1 - uv) / |1 - uv| for stacks of generators
    dim = u.shape[-1]
    one = cl.scalar_like(1.0, dim)
    q = one - cl.gp(cl.embed(u), cl.embed(v))
    e = cl.eta_array(q)
    return q / np.sqrt(e)[..., None]


def gyration(u, v, w, backend="gyrator", check=True):
    """Apply ``gyr[u, v]`` to ``w``.

    ``"gyrator"`` evaluates ``⊖(u ⊕ v) ⊕ (u ⊕ (v ⊕ w))``; ``"rotor"`` evaluates
    the sandwich ``q w q^{-1}`` with ``q = (1 - uv)/|1 - uv|``. Both preserve
    ``|w|``.
    """
    u, v = _pair(u, v, check)
    w = check_ball(w, "w") if check else np.asarray(w, dtype=np.float64)
    check_same_dim(u, w)
    if backend == "gyrator":
        # Near the boundary the outer sum cancels almost completely, so the
        # identity is evaluated in double-double and rounded once at the end.
        u, v, w = np.broadcast_arrays(u, v, w)
        U, V, W = dd.from_float(u), dd.from_float(v), dd.from_float(w)
        r = dd.mobius_add(dd.neg(dd.mobius_add(U, V)), dd.mobius_add(U, dd.mobius_add(V, W)))
        r = r[0] + r[1]
        return _escape_check(r) if check else r
    if backend == "rotor":
        q = _rotor_array(u, v)
        qinv = cl.versor_inverse(q, check=check)
        if not check:
            return np.einsum("...ij,...j->...i", cl.sandwich_matrix(q, qinv), w)
        r = cl.extract(cl.gp(cl.gp(q, cl.embed(w)), qinv))
        return _escape_check(r)
    raise ValueError(f"unknown gyration backend {backend!r}; choose from {GYR_BACKENDS}")


def gyration_rotor(u, v) -> cl.Rotor:
    """Unit rotor ``(1 - uv)/|1 - uv|`` representing ``gyr[u, v]``."""
    u = check_ball(u, "u")
    v = check_ball(v, "v")
    check_same_dim(u, v)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("gyration_rotor takes single vectors; use gyration_matrix for stacks")
    n = u.shape[0]
    mv = cl.Multivector(n, cl.scalar_like(1.0, n) - cl.gp(cl.embed(u), cl.embed(v)))
    return cl.Rotor.from_multivector(mv)


def gyration_matrix(u, v, check=True):
    """Orthogonal matrix of ``gyr[u, v]``, shape ``(..., n, n)``.

    Column ``j`` is the rotor sandwich of the basis vector ``e_j``.
    """
    u, v = _pair(u, v, check)
    u, v = np.broadcast_arrays(u, v)
    q = _rotor_array(u, v)
    qinv = cl.versor_inverse(q, check=check)
    return cl.sandwich_matrix(q, qinv)


@dataclass(frozen=True)
class Gyration:
    """The gyroautomorphism generated by ``u`` and ``v``."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = check_ball(self.u, "u")
        v = check_ball(self.v, "v")
        check_same_dim(u, v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __call__(self, w, backend="gyrator"):
        return gyration(self.u, self.v, w, backend=backend)

    def rotor(self) -> cl.Rotor:
        return gyration_rotor(self.u, self.v)

    def matrix(self) -> np.ndarray:
        return gyration_matrix(self.u, self.v)


def project_into_ball(x, margin=TAU_BALL):
    """Scale points with ``|x| >= 1 - margin`` back to radius ``1 - margin``.

    Opt-in repair; the arithmetic functions never clamp on their own.
    """
    x = as_float_array(x, "x")
    norms = np.sqrt(sqnorm(x))
    limit = 1.0 - margin
    scale = np.where(norms >= limit, limit / np.where(norms > 0, norms, 1.0), 1.0)
    # rounding can land exactly on the limit; nudge one ulp inward
    out = x * scale[..., None]
    over = np.sqrt(sqnorm(out)) >= limit
    if np.any(over):
        out = np.where(over[..., None], out * np.nextafter(1.0, 0.0), out)
    return out


def ball_from_uniforms(u_dir, u_rad, r_max=0.95):
    """Map uniforms to points of the ball.

    Parameters
    ----------
    u_dir : ndarray, shape (..., n)
        Uniforms in ``[0, 1)``, turned into a direction through the normal
        quantile function.
    u_rad : ndarray, shape (...)
        Uniforms in ``[0, 1)`` for the radius ``r_max * s**(1/n)``.
    """
    from scipy.special import ndtri

    n = u_dir.shape[-1]
    # shift off 0 so the quantile stays finite
    g = ndtri(u_dir + 2.0**-54)
    norms = np.sqrt(sqnorm(g))
    norms = np.where(norms > 0, norms, 1.0)
    radius = r_max * (u_rad + 2.0**-54) ** (1.0 / n)
    return g / norms[..., None] * radius[..., None]


def random_ball(rng, size, dim, r_max=0.95):
    """Draw ``size`` points with uniform direction and radius ``r_max * s**(1/dim)``."""
    if not 0 < r_max < 1:
        raise ValueError(f"r_max must lie in (0, 1), got {r_max}")
    shape = (size,) if np.isscalar(size) else tuple(size)
    return ball_from_uniforms(rng.random(shape + (dim,)), rng.random(shape), r_max)
