"""Dense Clifford algebra of the negative Euclidean space.

Generators satisfy ``e_i * e_i = -1`` and anticommute pairwise. A multivector
is stored as ``2**dim`` real coefficients; index ``k`` holds the coefficient of
the blade whose generators are the set bits of ``k`` (bit ``i`` is ``e_{i+1}``).

Two layers live here. The array layer (``gp``, ``conj``, ``embed`` ...) works
on coefficient arrays of shape ``(..., 2**dim)`` and is what the gyrogroup
backend calls in bulk. :class:`Multivector` and :class:`Rotor` wrap a single
element with validation and operator sugar.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import (
    DIM_MAX,
    TAU_GRADE,
    TAU_SCALAR,
    TAU_SING,
    as_float_array,
    sqnorm,
)
from .exceptions import (
    DimensionMismatch,
    DimensionTooLarge,
    NegativeEta,
    NonScalarEta,
    NotAVector,
    SingularDenominator,
)

__all__ = [
    "Multivector",
    "Rotor",
    "blade_product",
    "geometric_product",
    "reversion",
    "grade_involution",
    "conjugation",
    "eta",
    "modulus",
    "embed_vector",
    "extract_vector",
    "one_minus_uv_inverse",
    "clifford_group_membership",
    "sandwich",
]


def blade_product(mask_a: int, mask_b: int) -> tuple[int, int]:
    """Multiply two basis blades.

    Returns ``(sign, mask)`` with ``e_A * e_B = sign * e_{A xor B}``. The sign
    collects one factor -1 per transposition needed to sort the concatenated
    generator list and one per annihilated pair ``e_i e_i = -1``.

    >>> blade_product(0b01, 0b01)
    (-1, 0)
    >>> blade_product(0b10, 0b01)
    (-1, 3)
    """
    if mask_a < 0 or mask_b < 0:
        raise ValueError("blade masks must be non-negative")
    swaps = 0
    a = mask_a >> 1
    while a:
        swaps += (a & mask_b).bit_count()
        a >>= 1
    swaps += (mask_a & mask_b).bit_count()
    return (-1 if swaps & 1 else 1), mask_a ^ mask_b


def _check_dim(dim):
    if dim < 1:
        raise DimensionMismatch(f"dimension must be >= 1, got {dim}")
    if dim > DIM_MAX:
        raise DimensionTooLarge(
            f"dense Clifford algebra is capped at dim {DIM_MAX}, got {dim}"
        )


@lru_cache(maxsize=None)
def _sign_table(dim):
    # Same rule as blade_product, evaluated for all mask pairs at once.
    n = 1 << dim
    masks = np.arange(n, dtype=np.uint16)
    a = masks[:, None]
    b = masks[None, :]
    parity = np.bitwise_count(a & b).astype(np.uint8)
    shifted = a >> np.uint16(1)
    while np.any(shifted):
        parity += np.bitwise_count(shifted & b).astype(np.uint8)
        shifted = shifted >> np.uint16(1)
    table = np.where(parity & 1, -1.0, 1.0)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _grades(dim):
    g = np.bitwise_count(np.arange(1 << dim, dtype=np.uint16)).astype(np.int64)
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def _involution_signs(dim):
    k = _grades(dim)
    rev = np.where((k * (k - 1) // 2) % 2, -1.0, 1.0)
    inv = np.where(k % 2, -1.0, 1.0)
    con = np.where((k * (k + 1) // 2) % 2, -1.0, 1.0)
    for arr in (rev, inv, con):
        arr.setflags(write=False)
    return rev, inv, con


def _vector_indices(dim):
    return np.array([1 << i for i in range(dim)], dtype=np.int64)


def _dim_of(coeffs):
    n = coeffs.shape[-1]
    dim = n.bit_length() - 1
    if n != 1 << dim:
        raise DimensionMismatch(f"coefficient length {n} is not a power of two")
    return dim


# ---------------------------------------------------------------------------
# array layer: coefficient arrays of shape (..., 2**dim)
# ---------------------------------------------------------------------------


def gp(a, b, grades=None):
    """Geometric product of coefficient arrays, broadcasting over leading axes.

    ``grades`` optionally restricts the computation to output blades of the
    listed grades; the remaining coefficients are left at zero.
    """
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatch(
            f"multivector sizes differ: {a.shape[-1]} vs {b.shape[-1]}"
        )
    dim = _dim_of(a)
    n = 1 << dim
    sign = _sign_table(dim)
    batch = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    # Blade-major layout keeps every update below on contiguous rows.
    at = np.ascontiguousarray(np.moveaxis(np.broadcast_to(a, batch + (n,)), -1, 0))
    bt = np.ascontiguousarray(np.moveaxis(np.broadcast_to(b, batch + (n,)), -1, 0))
    at = at.reshape(n, -1)
    bt = bt.reshape(n, -1)
    out = np.zeros_like(at)
    # Only blades that are nonzero somewhere in the batch contribute.
    act_a = np.flatnonzero(np.any(at != 0, axis=1))
    act_b = np.flatnonzero(np.any(bt != 0, axis=1))
    keep = None if grades is None else np.isin(_grades(dim), list(grades))
    for i in act_a:
        js = act_b if keep is None else act_b[keep[act_b ^ i]]
        if js.size:
            out[js ^ i] += at[i] * (sign[i, js][:, None] * bt[js])
    return np.moveaxis(out.reshape((n,) + batch), 0, -1)


def sandwich_matrix(q, qinv):
    """Matrix of the linear map ``x -> q x qinv`` restricted to vectors.

    Entry ``(i, j)`` is the ``e_i`` coefficient of ``q e_j qinv``, gathered
    blade by blade instead of forming the two products. Only meaningful when
    the map sends vectors to vectors.
    """
    dim = _dim_of(q)
    sign = _sign_table(dim)
    n = 1 << dim
    act = np.flatnonzero(np.any(q.reshape(-1, n) != 0, axis=0))
    vec = _vector_indices(dim)
    a = act[:, None, None]
    i = vec[None, :, None]
    j = vec[None, None, :]
    aj = a ^ j
    b = aj ^ i
    coef = sign[a, j] * sign[aj, b]
    return np.einsum("...aij,aij->...ij", q[..., a] * qinv[..., b], coef)


def rev(a):
    return a * _involution_signs(_dim_of(a))[0]


def involute(a):
    return a * _involution_signs(_dim_of(a))[1]


def conj(a):
    return a * _involution_signs(_dim_of(a))[2]


def scalar_like(value, dim, batch=()):
    out = np.zeros(tuple(batch) + (1 << dim,))
    out[..., 0] = value
    return out


def embed(v):
    """Grade-1 embedding of vectors ``(..., n)`` into ``(..., 2**n)``."""
    dim = v.shape[-1]
    _check_dim(dim)
    out = np.zeros(v.shape[:-1] + (1 << dim,))
    out[..., _vector_indices(dim)] = v
    return out


def extract(a, tol=TAU_GRADE, check=True):
    """Grade-1 part of ``a``; raises :class:`NotAVector` on other mass if ``check``."""
    dim = _dim_of(a)
    idx = _vector_indices(dim)
    vec = a[..., idx]
    if check:
        rest = a.copy()
        rest[..., idx] = 0.0
        scale = np.maximum(1.0, np.max(np.abs(vec), axis=-1, keepdims=True))
        bad = np.max(np.abs(rest) / scale, axis=-1)
        if np.any(bad > tol):
            raise NotAVector(
                f"multivector has non-vector mass {float(np.max(bad)):.3e} > {tol:g}"
            )
    return vec


def eta_array(a, tol=TAU_SCALAR, check=True):
    """Scalar part of ``a * conj(a)``; raises :class:`NonScalarEta` if impure."""
    prod = gp(a, conj(a))
    s = prod[..., 0]
    if check:
        rest = np.abs(prod[..., 1:])
        if rest.size:
            bad = np.max(rest, axis=-1) / np.maximum(1.0, np.abs(s))
            if np.any(bad > tol):
                raise NonScalarEta(
                    f"a * conj(a) has non-scalar mass {float(np.max(bad)):.3e} > {tol:g}"
                )
    return s


def versor_inverse(a, check=True):
    e = eta_array(a, check=check)
    if np.any(np.abs(e) < TAU_SING**2):
        raise SingularDenominator(f"norm form {float(np.min(np.abs(e)))!r} is ~0")
    return conj(a) / e[..., None]


def one_minus_uv_inverse_array(u, v, strict=False):
    """``(1 - uv)^{-1} = (1 - vu) / eta(1 - uv)`` for vector stacks ``u, v``.

    With ``strict`` the hypothesis ``|u||v| != 1`` is enforced with margin
    ``TAU_SING`` in addition to the norm-form guard.
    """
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(f"vector dimensions differ: {u.shape[-1]} vs {v.shape[-1]}")
    if strict:
        prod = np.sqrt(sqnorm(u) * sqnorm(v))
        if np.any(np.abs(1.0 - prod) <= TAU_SING):
            raise SingularDenominator("|u||v| = 1: 1 - uv is excluded from the formula")
    U, V = embed(u), embed(v)
    one = scalar_like(1.0, u.shape[-1])
    a = one - gp(U, V)
    e = eta_array(a)
    if np.any(e < TAU_SING**2):
        raise SingularDenominator(
            f"eta(1 - uv) = {float(np.min(e))!r} is below {TAU_SING**2:g}"
        )
    return (one - gp(V, U)) / e[..., None]


# ---------------------------------------------------------------------------
# element layer
# ---------------------------------------------------------------------------


def _fmt(c):
    if float(c).is_integer() and abs(c) < 1e16:
        return str(int(c))
    return repr(float(c))


class Multivector:
    """An immutable element of the algebra with ``dim`` generators.

    Parameters
    ----------
    dim : int
        Number of generators, ``1 <= dim <= DIM_MAX``.
    coeffs : array-like of length ``2**dim``, optional
        Blade coefficients in bitmask order; zero if omitted.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs=None):
        _check_dim(dim)
        if coeffs is None:
            arr = np.zeros(1 << dim)
        else:
            arr = np.array(coeffs, dtype=np.float64)
            if arr.shape != (1 << dim,):
                raise DimensionMismatch(
                    f"expected {1 << dim} coefficients for dim {dim}, got shape {arr.shape}"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @classmethod
    def scalar(cls, dim: int, value: float = 1.0) -> Multivector:
        return cls(dim, scalar_like(value, dim))

    @classmethod
    def blade(cls, dim: int, mask: int, value: float = 1.0) -> Multivector:
        if not 0 <= mask < (1 << dim):
            raise ValueError(f"blade mask {mask} out of range for dim {dim}")
        c = np.zeros(1 << dim)
        c[mask] = value
        return cls(dim, c)

    @classmethod
    def _wrap(cls, arr):
        return cls(_dim_of(arr), arr)

    def _coerce(self, other):
        if isinstance(other, Multivector):
            if other.dim != self.dim:
                raise DimensionMismatch(f"dims differ: {self.dim} vs {other.dim}")
            return other.coeffs
        if np.isscalar(other):
            return scalar_like(float(other), self.dim)
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return Multivector(self.dim, self.coeffs + c)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return Multivector(self.dim, self.coeffs - c)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return Multivector(self.dim, c - self.coeffs)

    def __neg__(self):
        return Multivector(self.dim, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.dim, self.coeffs * float(other))
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.dim, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.dim, self.coeffs / float(other))
        return NotImplemented

    def __eq__(self, other):
        return NotImplemented if not isinstance(other, Multivector) else self.allclose(other)

    __hash__ = None

    def allclose(self, other: Multivector, tol: float = 1e-12) -> bool:
        """Tolerance-based equality, relative above magnitude 1, absolute below."""
        if other.dim != self.dim:
            return False
        scale = np.maximum(1.0, np.maximum(np.abs(self.coeffs), np.abs(other.coeffs)))
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= tol * scale))

    def grade(self, k: int) -> Multivector:
        return Multivector(self.dim, np.where(_grades(self.dim) == k, self.coeffs, 0.0))

    def grades(self, tol: float = 0.0) -> set[int]:
        g = _grades(self.dim)
        return {int(x) for x in np.unique(g[np.abs(self.coeffs) > tol])}

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def reverse(self) -> Multivector:
        return reversion(self)

    def involute(self) -> Multivector:
        return grade_involution(self)

    def conjugate(self) -> Multivector:
        return conjugation(self)

    def inverse(self) -> Multivector:
        """Inverse ``conj(a) / eta(a)``, valid for Clifford-group elements."""
        return Multivector(self.dim, versor_inverse(self.coeffs))

    def __str__(self):
        terms = []
        for mask in np.flatnonzero(self.coeffs):
            c = float(self.coeffs[mask])
            if mask == 0:
                body = _fmt(abs(c))
            else:
                bits = [str(i + 1) for i in range(self.dim) if mask >> i & 1]
                name = "e" + ("_".join(bits) if self.dim >= 10 else "".join(bits))
                body = name if abs(c) == 1.0 else f"{_fmt(abs(c))}*{name}"
            if not terms:
                terms.append(body if c > 0 else "-" + body)
            else:
                terms.append(("+ " if c > 0 else "- ") + body)
        return " ".join(terms) if terms else "0"

    def __repr__(self):
        return f"Multivector({self.dim}, {str(self)!r})"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims differ: {a.dim} vs {b.dim}")
    return Multivector(a.dim, gp(a.coeffs, b.coeffs))


def reversion(a: Multivector) -> Multivector:
    return Multivector(a.dim, rev(a.coeffs))


def grade_involution(a: Multivector) -> Multivector:
    return Multivector(a.dim, involute(a.coeffs))


def conjugation(a: Multivector) -> Multivector:
    return Multivector(a.dim, conj(a.coeffs))


def eta(a: Multivector, tol: float = TAU_SCALAR) -> float:
    """Norm form ``a * conj(a)``, which must be a scalar.

    Raises
    ------
    NonScalarEta
        If any non-scalar coefficient of ``a * conj(a)`` exceeds ``tol``
        (relative to the scalar part once that exceeds 1).
    """
    return float(eta_array(a.coeffs, tol=tol))


def modulus(a: Multivector) -> float:
    e = eta(a)
    if e < -TAU_SCALAR:
        raise NegativeEta(f"eta = {e!r} < 0 has no real square root")
    return float(np.sqrt(max(e, 0.0)))


def embed_vector(v) -> Multivector:
    arr = as_float_array(v, "v")
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a single vector, got shape {arr.shape}")
    return Multivector(arr.shape[0], embed(arr))


def extract_vector(a: Multivector, tol: float = TAU_GRADE) -> np.ndarray:
    return extract(a.coeffs, tol=tol).copy()


def one_minus_uv_inverse(u, v) -> Multivector:
    """``(1 - uv)^{-1}`` via ``(1 - vu) / eta(1 - uv)``.

    Raises :class:`SingularDenominator` when ``|u||v|`` is within ``TAU_SING``
    of 1 or the norm form is below ``TAU_SING**2``.
    """
    u = as_float_array(u, "u")
    v = as_float_array(v, "v")
    return Multivector._wrap(one_minus_uv_inverse_array(u, v, strict=True))


def clifford_group_membership(g: Multivector, tol: float = TAU_GRADE) -> bool:
    """True iff ``g`` is invertible and ``involute(g) e_i g^{-1}`` is a vector for every ``i``."""
    try:
        e = eta(g)
    except NonScalarEta:
        return False
    if abs(e) < TAU_SING**2:
        return False
    ginv = conj(g.coeffs) / e
    ghat = involute(g.coeffs)
    basis = embed(np.eye(g.dim))
    images = gp(gp(ghat[None, :], basis), ginv[None, :])
    try:
        extract(images, tol=tol)
    except NotAVector:
        return False
    return True


def sandwich(q: Multivector, w) -> np.ndarray:
    """Apply ``w -> q w q^{-1}`` and return the resulting vector."""
    w = as_float_array(w, "w")
    if w.shape[-1] != q.dim:
        raise DimensionMismatch(f"q has dim {q.dim}, w has length {w.shape[-1]}")
    qinv = versor_inverse(q.coeffs)
    return extract(gp(gp(q.coeffs, embed(w)), qinv))


@dataclass(frozen=True)
class Rotor:
    """Unit-norm even versor; ``eta`` caches the norm form of ``mv``."""

    mv: Multivector
    eta: float

    def __post_init__(self):
        odd = _grades(self.mv.dim) % 2 == 1
        if np.any(np.abs(self.mv.coeffs[odd]) > TAU_GRADE):
            raise NotAVector("rotor must be even-graded")
        if not np.isfinite(self.eta) or self.eta <= 0:
            raise SingularDenominator(f"rotor norm form must be positive, got {self.eta!r}")

    @classmethod
    def from_multivector(cls, mv: Multivector) -> Rotor:
        """Normalise ``mv`` to unit norm form."""
        e = eta(mv)
        if e < TAU_SING**2:
            raise SingularDenominator(f"cannot normalise: eta = {e!r}")
        unit = mv / np.sqrt(e)
        return cls(unit, eta(unit))

    @property
    def dim(self) -> int:
        return self.mv.dim

    def apply(self, w) -> np.ndarray:
        return sandwich(self.mv, w)

    def matrix(self) -> np.ndarray:
        """Matrix whose column ``i`` is the rotor applied to ``e_i``."""
        return self.apply(np.eye(self.dim)).T
