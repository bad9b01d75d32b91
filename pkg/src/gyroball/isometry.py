"""Isometries of the ball as canonical pairs ``(u, tau)``.

The pair stands for the map ``x -> u ⊕ tau(x)`` with ``tau`` orthogonal. The
decomposition is unique, so equality, inversion and serialisation act on the
pair directly and never on a black-box callable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._validation import (
    TAU_EQ,
    TAU_ORTH,
    check_ball,
    check_orthogonal,
    check_same_dim,
)
from .exceptions import DimensionMismatch
from .gyro import gyration_matrix, mobius_add

__all__ = [
    "Isometry",
    "apply",
    "compose",
    "inverse",
    "symmetry_at",
    "transport",
    "isometry_equal",
    "gyrosemidirect_product",
    "reorthonormalize",
    "random_orthogonal",
]


def _matvec(m, x):
    return np.einsum("...ij,...j->...i", m, x)


def gyrosemidirect_product(a, b, check=True):
    """Group law ``(u, A)(v, B) = (u ⊕ A v, Gyr[u, A v] A B)`` on raw pairs.

    ``a`` and ``b`` are ``(vector, matrix)`` tuples; stacks of pairs broadcast
    over leading axes.
    """
    u, alpha = a
    v, beta = b
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    n = check_same_dim(u, v)
    if alpha.shape[-2:] != (n, n) or beta.shape[-2:] != (n, n):
        raise DimensionMismatch(
            f"orthogonal parts must be {n}x{n}, got {alpha.shape[-2:]} and {beta.shape[-2:]}"
        )
    av = _matvec(alpha, v)
    w = mobius_add(u, av, check=check)
    g = gyration_matrix(u, av, check=check)
    return w, g @ alpha @ beta


@dataclass(frozen=True, eq=False)
class Isometry:
    """The isometry ``x -> u ⊕ tau(x)``.

    Parameters
    ----------
    u : array-like, shape (n,)
        Translation part, a point of the ball (the image of the origin).
    tau : array-like, shape (n, n)
        Orthogonal part; rejected unless ``tau.T @ tau`` is the identity
        within ``TAU_ORTH``.
    """

    u: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        u = check_ball(self.u, "u")
        if u.ndim != 1:
            raise DimensionMismatch(f"u must be a single vector, got shape {u.shape}")
        tau = check_orthogonal(self.tau)
        if tau.shape != (u.shape[0], u.shape[0]):
            raise DimensionMismatch(f"tau has shape {tau.shape}, u has length {u.shape[0]}")
        u = u.copy()
        tau = tau.copy()
        u.setflags(write=False)
        tau.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "tau", tau)

    @classmethod
    def identity(cls, dim: int) -> Isometry:
        return cls(np.zeros(dim), np.eye(dim))

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def __call__(self, x):
        return apply(self, x)

    def __matmul__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return compose(self, other)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "u": self.u.tolist(), "tau": self.tau.tolist()}

    def to_json(self) -> str:
        # json writes floats with repr, the shortest round-trip form
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> Isometry:
        iso = cls(np.asarray(d["u"], dtype=np.float64), np.asarray(d["tau"], dtype=np.float64))
        if "dim" in d and int(d["dim"]) != iso.dim:
            raise DimensionMismatch(f"declared dim {d['dim']} but u has length {iso.dim}")
        return iso

    @classmethod
    def from_json(cls, text: str) -> Isometry:
        return cls.from_dict(json.loads(text))


def apply(T: Isometry, x):
    """``u ⊕ tau(x)`` for a point or a stack of points."""
    x = check_ball(x, "x")
    if x.shape[-1] != T.dim:
        raise DimensionMismatch(f"isometry has dim {T.dim}, x has length {x.shape[-1]}")
    return mobius_add(T.u, _matvec(T.tau, x))


def compose(S: Isometry, T: Isometry) -> Isometry:
    """Canonical pair of ``S ∘ T``."""
    if S.dim != T.dim:
        raise DimensionMismatch(f"dims differ: {S.dim} vs {T.dim}")
    u, tau = gyrosemidirect_product((S.u, S.tau), (T.u, T.tau))
    return Isometry(u, tau)


def inverse(T: Isometry) -> Isometry:
    """``(-tau^T u, tau^T)``; exact because ``gyr[u, -u]`` is the identity."""
    t = T.tau.T
    return Isometry(-(t @ T.u), t)


def symmetry_at(x) -> Isometry:
    """Point reflection ``L_x ∘ (-I) ∘ L_{-x}``, an involution fixing only ``x``."""
    x = check_ball(x, "x")
    n = x.shape[-1]
    eye = np.eye(n)
    inner = gyrosemidirect_product((np.zeros(n), -eye), (-x, eye))
    return Isometry(*gyrosemidirect_product((x, eye), inner))


def transport(x, y) -> Isometry:
    """``L_y ∘ L_{-x}``, an isometry carrying ``x`` to ``y``."""
    x = check_ball(x, "x")
    y = check_ball(y, "y")
    n = check_same_dim(x, y)
    eye = np.eye(n)
    return Isometry(*gyrosemidirect_product((y, eye), (-x, eye)))


def isometry_equal(S: Isometry, T: Isometry, tol: float = TAU_EQ) -> bool:
    """Compare canonical pairs: translation parts and orthogonal parts within ``tol``."""
    if S.dim != T.dim:
        return False
    du = float(np.linalg.norm(S.u - T.u))
    dm = float(np.max(np.abs(S.tau - T.tau)))
    return du <= tol and dm <= tol


def reorthonormalize(m, tol=1e-15, max_iter=50):
    """Nearest orthogonal matrix by Newton iteration on the polar factor.

    Opt-in repair for matrices that drifted off the orthogonal group, e.g.
    after long products; constructors never call it.
    """
    x = np.array(m, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {x.shape}")
    for _ in range(max_iter):
        nxt = 0.5 * (x + np.linalg.inv(x).T)
        done = np.max(np.abs(nxt - x)) <= tol
        x = nxt
        if done:
            break
    return check_orthogonal(x, tol=TAU_ORTH)


def random_orthogonal(normals):
    """Haar-distributed orthogonal matrices from standard normals ``(..., n, n)``."""
    q, r = np.linalg.qr(normals)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    return q * d[..., None, :]
