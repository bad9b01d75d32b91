"""Tolerances and input-validation helpers shared by every module."""

import numpy as np

from .exceptions import DimensionMismatch, NotInBall, NotOrthogonal

DIM_MAX = 12

TAU_ALG = 1e-12
TAU_SCALAR = 1e-10
TAU_GRADE = 1e-10
TAU_SING = 1e-9
TAU_BALL = 1e-12
TAU_ORTH = 1e-10
TAU_EQ = 1e-10


def as_float_array(x, name="x"):
    """Convert ``x`` to a float64 array with at least one axis."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        raise DimensionMismatch(f"{name} must be a vector, got a scalar")
    if arr.shape[-1] == 0:
        raise DimensionMismatch(f"{name} has zero length")
    if not np.all(np.isfinite(arr)):
        raise NotInBall(f"{name} contains non-finite entries: {arr.tolist()}")
    return arr


def dot(x, y):
    return np.einsum("...i,...i->...", x, y)


def sqnorm(x):
    return dot(x, x)


def check_ball(x, name="x"):
    """Validate that every row of ``x`` lies strictly inside the unit ball.

    Parameters
    ----------
    x : array-like, shape (..., n)
        One point or a stack of points.
    name : str
        Used in the error message.

    Returns
    -------
    ndarray
        ``x`` as a float64 array.

    Raises
    ------
    NotInBall
        If some point has norm ``>= 1 - TAU_BALL``.
    """
    arr = as_float_array(x, name)
    norms = np.sqrt(sqnorm(arr))
    bad = norms >= 1.0 - TAU_BALL
    if np.any(bad):
        worst = float(np.max(norms))
        raise NotInBall(f"{name} must have norm < 1, got norm {worst!r}")
    return arr


def check_same_dim(*arrays):
    dims = {a.shape[-1] for a in arrays}
    if len(dims) > 1:
        raise DimensionMismatch(f"operand dimensions differ: {sorted(dims)}")
    return dims.pop()


def check_orthogonal(m, name="tau", tol=TAU_ORTH):
    """Validate a square matrix (or stack) with ``M^T M = I`` within ``tol``."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NotOrthogonal(f"{name} contains non-finite entries")
    gram = np.swapaxes(arr, -1, -2) @ arr
    err = np.max(np.abs(gram - np.eye(arr.shape[-1])))
    if err > tol:
        raise NotOrthogonal(f"{name} is not orthogonal: max |M^T M - I| = {err:.3e}")
    return arr


def rel_abs_error(a, b, axis=-1):
    """Max componentwise error, relative where ``|b| > 1`` and absolute below."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    err = np.abs(a - b) / np.maximum(1.0, np.abs(b))
    if axis is None or err.ndim == 0:
        return err
    return np.max(err, axis=axis)
