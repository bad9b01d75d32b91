"""Distances on the ball built from Möbius addition.

Every function accepts raw coordinate arrays of shape ``(..., n)``, validates
that they lie in the ball, and broadcasts over leading axes.
"""

from __future__ import annotations

import enum

import numpy as np

from ._validation import TAU_BALL, check_ball, check_same_dim, sqnorm
from .exceptions import NonPositiveEps, NumericalEscape
from .gyro import mobius_add

__all__ = [
    "MetricKind",
    "gyrometric",
    "rapidity_metric",
    "poincare_metric",
    "norm_T",
    "metric_T",
    "norm_bounds",
    "dT_radius_for_dM",
    "distance",
]


class MetricKind(str, enum.Enum):
    GYROMETRIC = "gyrometric"
    RAPIDITY = "rapidity"
    POINCARE = "poincare"
    ARCTAN = "arctan"


def _norm(x):
    return np.sqrt(sqnorm(x))


def _artanh(r):
    # 0.5 * ln((1 + r)/(1 - r)), written with log1p so small r keeps full precision
    r = np.asarray(r, dtype=np.float64)
    if np.any(~(r < 1.0 - TAU_BALL)):
        raise NumericalEscape(f"artanh argument {float(np.max(r))!r} too close to 1")
    return 0.5 * np.log1p(2.0 * r / (1.0 - r))


def _float(x):
    return float(x) if np.ndim(x) == 0 else x


def gyrometric(x, y, backend="direct"):
    """``|(-x) ⊕ y|``, a value in ``[0, 1)``."""
    x = check_ball(x, "x")
    y = check_ball(y, "y")
    check_same_dim(x, y)
    return _float(_norm(mobius_add(-x, y, backend=backend)))


def rapidity_metric(x, y, backend="direct"):
    """``artanh`` of the gyrometric; unbounded as points approach the boundary."""
    return _float(_artanh(gyrometric(x, y, backend=backend)))


def poincare_metric(x, y, mode="closed_form"):
    """Hyperbolic distance of curvature -1.

    Parameters
    ----------
    mode : {"closed_form", "via_addition"}
        ``"closed_form"`` uses ``arccosh(1 + 2|x-y|^2/((1-|x|^2)(1-|y|^2)))``,
        evaluated as ``log1p(d + sqrt(d (d + 2)))`` to stay accurate for near
        points. ``"via_addition"`` uses twice the rapidity metric.
    """
    x = check_ball(x, "x")
    y = check_ball(y, "y")
    check_same_dim(x, y)
    if mode == "closed_form":
        d = 2.0 * sqnorm(x - y) / ((1.0 - sqnorm(x)) * (1.0 - sqnorm(y)))
        return _float(np.log1p(d + np.sqrt(d * (d + 2.0))))
    if mode == "via_addition":
        return _float(2.0 * _artanh(_norm(mobius_add(-x, y))))
    raise ValueError(f"unknown mode {mode!r}; use 'closed_form' or 'via_addition'")


def norm_T(v):
    """``arctan |v|``, with values in ``[0, pi/4)`` on the ball."""
    v = check_ball(v, "v")
    return _float(np.arctan(_norm(v)))


def metric_T(x, y, backend="direct"):
    """Bounded metric ``arctan |(-x) ⊕ y|``; always below ``pi/2``."""
    return _float(np.arctan(gyrometric(x, y, backend=backend)))


def norm_bounds(u, v):
    """Lower and upper bounds on ``|u ⊕ v|`` from the norms of ``u`` and ``v``.

    Returns the raw expressions ``(|u|-|v|)/(1+|u||v|)`` and
    ``(|u|+|v|)/(1-|u||v|)``, unclamped: the lower one may be negative and the
    upper one may exceed 1.
    """
    u = check_ball(u, "u")
    v = check_ball(v, "v")
    check_same_dim(u, v)
    a, b = _norm(u), _norm(v)
    return _float((a - b) / (1.0 + a * b)), _float((a + b) / (1.0 - a * b))


def dT_radius_for_dM(eps):
    """Radius ``arctan(tanh eps)`` of a ``d_T`` ball inside the ``d_M`` ball of radius ``eps``.

    The reverse containment needs no radius change: ``d_T <= d_M`` pointwise.
    """
    eps = np.asarray(eps, dtype=np.float64)
    if np.any(~(eps > 0)):
        raise NonPositiveEps(f"eps must be > 0, got {eps.tolist()!r}")
    return _float(np.arctan(np.tanh(eps)))


def distance(x, y, metric=MetricKind.ARCTAN, backend="direct"):
    """Dispatch to one of the four distances by :class:`MetricKind`."""
    kind = MetricKind(metric)
    if kind is MetricKind.GYROMETRIC:
        return gyrometric(x, y, backend=backend)
    if kind is MetricKind.RAPIDITY:
        return rapidity_metric(x, y, backend=backend)
    if kind is MetricKind.POINCARE:
        return poincare_metric(x, y)
    return metric_T(x, y, backend=backend)
