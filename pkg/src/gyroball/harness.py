"""Seeded, dimension-parametric property verification.

A suite declares the random inputs one sample needs (its *layout*) and a
vectorised check function mapping a batch of inputs to per-check residual
arrays. Samples are generated in fixed blocks of ``BLOCK`` from a Philox
stream keyed by ``(seed, suite, dim)`` with the block number as counter, so
sample ``i`` sees the same numbers whatever the block scheduling or worker
count.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.special import ndtri

from . import clifford as cl
from ._validation import DIM_MAX, dot, rel_abs_error, sqnorm
from .exceptions import UnknownSuite
from .gyro import ball_from_uniforms, gyration, gyration_matrix, mobius_add
from .isometry import gyrosemidirect_product, random_orthogonal

__all__ = [
    "BLOCK",
    "NEAR_BOUNDARY_R_MAX",
    "SUITES",
    "VerifyConfig",
    "VerifyReport",
    "run_suite",
    "run_all",
    "replay_witness",
    "bench_backends",
    "format_table",
]

BLOCK = 1024
N_PROBES = 8
NEAR_BOUNDARY_R_MAX = 1.0 - 1e-6
NEAR_BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class VerifyConfig:
    dims: tuple[int, ...] = (2, 3, 5, 8)
    samples: int = 10_000
    seed: int = 42
    r_max: float = 0.95
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("dims must not be empty")
        for d in dims:
            if not 1 <= d <= DIM_MAX:
                raise ValueError(f"dimension {d} outside [1, {DIM_MAX}]")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 < self.r_max < 1:
            raise ValueError(f"r_max must lie in (0, 1), got {self.r_max}")
        object.__setattr__(self, "tolerances", dict(self.tolerances))

    @property
    def near_boundary(self) -> bool:
        return self.r_max > 0.95


@dataclass
class VerifyReport:
    suite: str
    dim: int
    samples: int
    failures: int
    max_residual: float
    first_failure_witness: dict | None
    checks: dict
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> str:
        return json.dumps(asdict(self))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _layout_width(layout, dim):
    width = 0
    for _, kind, count in layout:
        if kind == "ball":
            width += count * (dim + 1)
        elif kind == "vec":
            width += count * dim
        elif kind == "orth":
            width += count * dim * dim
        elif kind == "mv":
            width += count * len(_mv_support(dim))
        elif kind == "unif":
            width += count
        else:
            raise ValueError(kind)
    return width


def _mv_support(dim):
    # full multivectors stay cheap up to dim 6; above that keep grades <= 2
    g = cl._grades(dim)
    return np.flatnonzero(g <= (dim if dim <= 6 else 2))


def _materialize(U, layout, dim, r_max):
    """Turn a block of uniforms ``(nb, width)`` into named input arrays."""
    nb = U.shape[0]
    out = {}
    pos = 0
    for name, kind, count in layout:
        if kind == "ball":
            w = count * (dim + 1)
            chunk = U[:, pos : pos + w].reshape(nb, count, dim + 1)
            val = ball_from_uniforms(chunk[..., :dim], chunk[..., dim], r_max)
        elif kind == "vec":
            w = count * dim
            val = ndtri(U[:, pos : pos + w] + 2.0**-54).reshape(nb, count, dim)
        elif kind == "orth":
            w = count * dim * dim
            g = ndtri(U[:, pos : pos + w] + 2.0**-54).reshape(nb, count, dim, dim)
            val = random_orthogonal(g)
        elif kind == "mv":
            sup = _mv_support(dim)
            w = count * len(sup)
            val = np.zeros((nb, count, 1 << dim))
            val[..., sup] = ndtri(U[:, pos : pos + w] + 2.0**-54).reshape(nb, count, len(sup))
        else:
            w = count
            val = U[:, pos : pos + w].reshape(nb, count)
        pos += w
        out[name] = val[:, 0] if count == 1 else val
    return out


def _key(seed, suite, dim):
    ss = np.random.SeedSequence([seed, zlib.crc32(suite.encode()), dim])
    return ss.generate_state(2, np.uint64)


def _block_uniforms(seed, suite, dim, block, nb, width):
    bg = np.random.Philox(key=_key(seed, suite, dim), counter=[0, 0, block, 0])
    return np.random.Generator(bg).random((nb, width))


# ---------------------------------------------------------------------------
# helpers shared by the suites
# ---------------------------------------------------------------------------


def _add(a, b):
    return mobius_add(a, b, check=False)


def _gyr(u, v, w, backend):
    return gyration(u, v, w, backend=backend, check=False)


def _norm(x):
    return np.sqrt(sqnorm(x))


def _err(a, b):
    # vectors (N, n) -> (N,)
    return rel_abs_error(a, b)


def _err1(a, b):
    # scalars (N,) -> (N,)
    return rel_abs_error(a, b, axis=None)


def _err_probes(a, b):
    # (N, probes, n) -> (N,)
    return np.max(rel_abs_error(a, b), axis=-1)


def _gyr_probes(u, v, P, backend):
    """Gyration of a probe stack ``P (N, k, n)`` by generators ``u, v (N, n)``."""
    if backend == "rotor":
        return np.einsum("nij,nkj->nki", gyration_matrix(u, v, check=False), P)
    return _gyr(u[:, None, :], v[:, None, :], P, "gyrator")


def _both_backends(fn):
    return np.maximum(fn("gyrator"), fn("rotor"))


def _violation(flag):
    return np.where(flag, 1.0, 0.0)


def _artanh(r):
    return 0.5 * np.log1p(2.0 * r / (1.0 - r))


def _d_T(x, y):
    return np.arctan(_norm(_add(-x, y)))


def _matvec(m, x):
    return np.einsum("...ij,...j->...i", m, x)


def _pair_residual(p, q):
    (u1, m1), (u2, m2) = p, q
    du = np.max(np.abs(u1 - u2), axis=-1)
    dm = np.max(np.abs(m1 - m2), axis=(-2, -1))
    return np.maximum(du, dm)


def _apply(u, m, x):
    # x may carry a probe axis after the batch axis
    if x.ndim == u.ndim + 1:
        return _add(u[:, None, :], np.einsum("nij,npj->npi", m, x))
    return _add(u, _matvec(m, x))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    name: str
    layout: tuple
    checks: Callable
    tolerances: Callable
    description: str = ""


def _axioms(x, dim):
    u, v, w, P = x["u"], x["v"], x["w"], x["P"]
    zero = np.zeros_like(u)
    uv = _add(u, v)
    return {
        "identity_left": _err(_add(zero, u), u),
        "identity_right": _err(_add(u, zero), u),
        "inverse_left": _norm(_add(-u, u)),
        "inverse_right": _norm(_add(u, -u)),
        "gyroassoc_left": _both_backends(
            lambda b: _err(_add(u, _add(v, w)), _add(uv, _gyr(u, v, w, b)))
        ),
        "gyroassoc_right": _both_backends(
            lambda b: _err(_add(uv, w), _add(u, _add(v, _gyr(v, u, w, b))))
        ),
        "gyr_automorphism": _both_backends(
            lambda b: _err(
                _gyr(u, v, _add(w, P[:, 0]), b),
                _add(_gyr(u, v, w, b), _gyr(u, v, P[:, 0], b)),
            )
        ),
        "loop_left": _both_backends(
            lambda b: _err_probes(_gyr_probes(uv, v, P, b), _gyr_probes(u, v, P, b))
        ),
        "loop_right": _both_backends(
            lambda b: _err_probes(_gyr_probes(u, _add(v, u), P, b), _gyr_probes(u, v, P, b))
        ),
        "gyrocommutative": _both_backends(lambda b: _err(uv, _gyr(u, v, _add(v, u), b))),
        "gyrator_identity": _err(_gyr(u, v, w, "gyrator"), _gyr(u, v, w, "rotor")),
    }


def _table1(x, dim):
    u, v, w, P = x["u"], x["v"], x["w"], x["P"]
    return {
        "gyrotranslation_inverse": np.maximum(
            _err(_add(-u, _add(u, v)), v), _err(_add(u, _add(-u, v)), v)
        ),
        "left_cancellation": _err(_add(-u, _add(u, v)), v),
        "inverse_of_sum": _both_backends(
            lambda b: _err(-_add(u, v), _gyr(u, v, _add(-v, -u), b))
        ),
        "gluing": _both_backends(
            lambda b: _err(
                _add(_add(-u, v), _gyr(-u, v, _add(-v, w), b)), _add(-u, w)
            )
        ),
        "even_property": _both_backends(
            lambda b: _err_probes(_gyr_probes(-u, -v, P, b), _gyr_probes(u, v, P, b))
        ),
        "inversive_symmetry": _both_backends(
            lambda b: _err_probes(_gyr_probes(v, u, _gyr_probes(u, v, P, b), b), P)
        ),
    }


def _inequality(x, dim):
    u, v = x["u"], x["v"]
    a, b = _norm(u), _norm(v)
    lower = (a - b) / (1.0 + a * b)
    upper = (a + b) / (1.0 - a * b)
    s = _norm(_add(u, v))
    below = np.maximum(lower, 0.0) - s
    above = s - upper
    return {
        "lower_bound": np.maximum(below, 0.0),
        "upper_bound": np.maximum(above, 0.0),
    }


def _gyronorm(x, dim):
    p, q, u, v = x["x"], x["y"], x["u"], x["v"]
    nT = lambda z: np.arctan(_norm(z))  # noqa: E731
    s = nT(_add(p, q))
    return {
        "nonnegative": np.maximum(-nT(p), 0.0),
        "zero_at_origin": np.abs(nT(np.zeros_like(p))),
        "inverse_invariance": np.abs(nT(-p) - nT(p)),
        "subadditive_lower": np.maximum(nT(p) - nT(q) - s, 0.0),
        "subadditive_upper": np.maximum(s - nT(p) - nT(q), 0.0),
        "gyration_invariance": _both_backends(lambda b: np.abs(nT(_gyr(u, v, p, b)) - nT(p))),
    }


def _dT_metric(x, dim):
    p, q, r = x["x"], x["y"], x["z"]
    zero = np.zeros_like(p)
    dxy = _d_T(p, q)
    rho = _norm(_add(-p, q))
    dM = _artanh(rho)
    sq = 2.0 * sqnorm(p - q) / ((1.0 - sqnorm(p)) * (1.0 - sqnorm(q)))
    dP_closed = np.log1p(sq + np.sqrt(sq * (sq + 2.0)))
    d0 = _d_T(zero, p)
    return {
        "identity": _d_T(p, p),
        "positivity": _violation((dxy <= 0) & (_norm(p - q) > 0)),
        "symmetry": np.abs(dxy - _d_T(q, p)),
        "triangle": np.maximum(_d_T(p, r) - dxy - _d_T(q, r), 0.0),
        "bounded": _violation(~(dxy < math.pi / 2)),
        "origin_bound": _violation(~(d0 < math.pi / 4)),
        "origin_arctan": np.abs(d0 - np.arctan(_norm(p))),
        "poincare_consistency": _err1(dP_closed, 2.0 * dM),
        "dT_le_dM": np.maximum(dxy - dM, 0.0),
    }


TOPOLOGY_EPS = (0.1, 0.5, 1.0, 2.0)


def _topology(x, dim):
    u, direction, s = x["u"], x["d"], x["s"]
    unit = direction / np.maximum(_norm(direction), 1e-300)[:, None]
    out = {}
    for eps in TOPOLOGY_EPS:
        delta = math.atan(math.tanh(eps))
        # |w| < tan(delta) puts u ⊕ w inside the d_T ball of radius delta about u
        w = unit * (math.tan(delta) * s)[:, None]
        v = _add(u, w)
        dT = _d_T(u, v)
        dM = _artanh(_norm(_add(-u, v)))
        inside = dT < delta
        out[f"containment_eps{eps:g}"] = _violation(inside & ~(dM < eps))
        out[f"dT_le_dM_eps{eps:g}"] = np.maximum(dT - dM, 0.0)
    return out


def _backend_equiv(x, dim):
    u, v, w = x["u"], x["v"], x["w"]
    g_gen = _gyr(u, v, w, "gyrator")
    g_rot = _gyr(u, v, w, "rotor")
    nw = _norm(w)
    return {
        "add": _err(mobius_add(u, v, "direct", check=False), mobius_add(u, v, "clifford", check=False)),
        "gyration": _err(g_gen, g_rot),
        "gyration_norm": np.maximum(np.abs(_norm(g_gen) - nw), np.abs(_norm(g_rot) - nw)),
    }


def _isometry_group(x, dim):
    u1, A1, u2, A2, u3, A3 = x["u1"], x["A1"], x["u2"], x["A2"], x["u3"], x["A3"]
    p, q, P = x["x"], x["y"], x["P"]
    n = u1.shape[-1]
    nb = u1.shape[0]
    eye = np.broadcast_to(np.eye(n), (nb, n, n))
    zero = np.zeros_like(u1)
    S, T, R = (u1, A1), (u2, A2), (u3, A3)
    law = lambda a, b: gyrosemidirect_product(a, b, check=False)  # noqa: E731
    ident = (zero, eye)

    ST = law(S, T)
    compose_pointwise = _err_probes(_apply(*ST, P), _apply(*S, _apply(*T, P)))

    S_inv = (-_matvec(np.swapaxes(A1, -1, -2), u1), np.swapaxes(A1, -1, -2))
    inverse = np.maximum(_pair_residual(law(S, S_inv), ident), _pair_residual(law(S_inv, S), ident))
    assoc = _pair_residual(law(law(R, S), T), law(R, law(S, T)))
    unit = np.maximum(_pair_residual(law(ident, T), T), _pair_residual(law(T, ident), T))

    # point reflection S_p = (p, I)(0, -I)(-p, I)
    Sp = law((p, eye), law((zero, -eye), (-p, eye)))
    fixed = _err(_apply(*Sp, p), p)
    involution = _pair_residual(law(Sp, Sp), ident)
    far = _norm(q - p) > 1e-6
    second_fixed = _violation(far & (_norm(_apply(*Sp, q) - q) <= 1e-12))

    Tr = law((q, eye), (-p, eye))
    transport = _err(_apply(*Tr, p), q)

    Sx, Sy = _apply(*S, p), _apply(*S, q)
    rho0, rho1 = _norm(_add(-p, q)), _norm(_add(-Sx, Sy))
    sq = lambda a, b: 2.0 * sqnorm(a - b) / ((1.0 - sqnorm(a)) * (1.0 - sqnorm(b)))  # noqa: E731
    dP = lambda a, b: np.log1p(sq(a, b) + np.sqrt(sq(a, b) * (sq(a, b) + 2.0)))  # noqa: E731
    metric_preservation = np.max(
        np.stack(
            [
                _err1(rho1, rho0),
                _err1(_artanh(rho1), _artanh(rho0)),
                _err1(dP(Sx, Sy), dP(p, q)),
                _err1(np.arctan(rho1), np.arctan(rho0)),
            ]
        ),
        axis=0,
    )
    automorphism = _err(_matvec(A1, _add(p, q)), _add(_matvec(A1, p), _matvec(A1, q)))

    G = gyration_matrix(u1, u2, check=False)
    Gp, Gq = _matvec(G, p), _matvec(G, q)
    gyr_isometry = np.maximum(
        _err1(_norm(Gp), _norm(p)), _err1(_d_T(Gp, Gq), _d_T(p, q))
    )
    gyr_automorphism = _err(_matvec(G, _add(p, q)), _add(Gp, Gq))

    distinct = _pair_residual(S, T) > 1e-10
    agree = _err_probes(_apply(*S, P), _apply(*T, P)) <= 1e-10
    uniqueness = _violation(distinct & agree)

    return {
        "compose_pointwise": compose_pointwise,
        "inverse": inverse,
        "associativity": assoc,
        "identity_element": unit,
        "symmetry_fixed_point": fixed,
        "symmetry_involution": involution,
        "symmetry_unique_fixed_point": second_fixed,
        "transport": transport,
        "metric_preservation": metric_preservation,
        "orthogonal_automorphism": automorphism,
        "gyration_isometry": gyr_isometry,
        "gyration_automorphism": gyr_automorphism,
        "uniqueness": uniqueness,
    }


def _isometry_notes(x, dim):
    G = gyration_matrix(x["u1"], _matvec(x["A1"], x["u2"]), check=False)
    det = np.linalg.det(G)
    return {"gyration_det_min": det, "gyration_det_max": det}


def _clifford_core(x, dim):
    u, v, w, p = x["u"], x["v"], x["w"], x["x"]
    a, b, c = x["a"], x["b"], x["c"]
    g1, g2, g3, g4 = (x["g"][:, k] for k in range(4))
    n = u.shape[-1]
    U, V, W = cl.embed(u), cl.embed(v), cl.embed(w)
    one = cl.scalar_like(1.0, n)

    def mv_err(lhs, rhs):
        return _err(lhs, rhs)

    anti = mv_err(cl.gp(U, V) + cl.gp(V, U), -2.0 * dot(u, v)[:, None] * one)
    square = mv_err(cl.gp(V, V), -sqnorm(v)[:, None] * one)

    m = one - cl.gp(U, V)
    eta_m = cl.eta_array(m, check=False)
    m_inv = (one - cl.gp(V, U)) / eta_m[:, None]
    inverse_formula = np.maximum(mv_err(cl.gp(m, m_inv), one), mv_err(cl.gp(m_inv, m), one))

    # 1 - uv lies in the Clifford group: involute(m) e_i m^{-1} is a vector
    basis = cl.embed(np.eye(n))
    twisted = cl.gp(cl.gp(cl.involute(m)[:, None, :], basis), m_inv[:, None, :])
    vec_idx = [1 << i for i in range(n)]
    rest = twisted.copy()
    rest[..., vec_idx] = 0.0
    membership = np.max(np.abs(rest), axis=(-2, -1))

    eta_quot = _err1(cl.eta_array(cl.gp(W, m_inv), check=False), sqnorm(w) / eta_m)

    G = cl.gp(cl.embed(g1), cl.embed(g2))
    H = cl.gp(cl.embed(g3), cl.embed(g4))
    eG, eH = cl.eta_array(G, check=False), cl.eta_array(H, check=False)
    eGH = cl.eta_array(cl.gp(G, H), check=False)
    eta_mult = np.abs(eGH - eG * eH) / np.maximum(1.0, np.abs(eG * eH))

    ab = cl.gp(a, b)
    involutions = np.max(
        np.stack(
            [
                np.max(np.abs(cl.rev(cl.rev(a)) - a), axis=-1),
                np.max(np.abs(cl.involute(cl.involute(a)) - a), axis=-1),
                np.max(np.abs(cl.conj(cl.conj(a)) - a), axis=-1),
                np.max(np.abs(cl.conj(a) - cl.rev(cl.involute(a))), axis=-1),
            ]
        ),
        axis=0,
    )
    scale = lambda z: np.maximum(1.0, np.max(np.abs(z), axis=-1))  # noqa: E731
    morphisms = np.max(
        np.stack(
            [
                np.max(np.abs(cl.rev(ab) - cl.gp(cl.rev(b), cl.rev(a))), axis=-1) / scale(ab),
                np.max(np.abs(cl.conj(ab) - cl.gp(cl.conj(b), cl.conj(a))), axis=-1) / scale(ab),
                np.max(np.abs(cl.involute(ab) - cl.gp(cl.involute(a), cl.involute(b))), axis=-1)
                / scale(ab),
            ]
        ),
        axis=0,
    )
    abc = cl.gp(ab, c)
    assoc = np.max(np.abs(abc - cl.gp(a, cl.gp(b, c))), axis=-1) / scale(abc)

    M = gyration_matrix(u, v, check=False)
    orth = np.max(np.abs(np.swapaxes(M, -1, -2) @ M - np.eye(n)), axis=(-2, -1))

    q = cl.gp(G, cl.embed(g3))  # an odd versor, also in the Clifford group
    qinv = cl.versor_inverse(q, check=False)
    sw = lambda z: cl.extract(cl.gp(cl.gp(q, cl.embed(z)), qinv), check=False)  # noqa: E731
    sw_w, sw_p = sw(w), sw(p)
    sandwich_norm = _err1(_norm(sw_w), _norm(w))
    sandwich_inner = _err1(dot(sw_w, sw_p), dot(w, p))

    return {
        "anticommutator": anti,
        "vector_square": square,
        "inverse_formula": inverse_formula,
        "group_membership": membership,
        "eta_quotient": eta_quot,
        "eta_multiplicative": eta_mult,
        "involutions_exact": involutions,
        "anti_automorphisms": morphisms,
        "associativity": assoc,
        "gyration_orthogonal": orth,
        "sandwich_norm": sandwich_norm,
        "sandwich_inner_product": sandwich_inner,
    }


def _fixed(tol_map, default):
    def tolerances(cfg):
        return dict(tol_map), default

    return tolerances


def _backend_tols(cfg):
    t = NEAR_BOUNDARY_TOL if cfg.near_boundary else 1e-12
    return {"gyration_norm": 1e-10}, t


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite(
            "axioms",
            (("u", "ball", 1), ("v", "ball", 1), ("w", "ball", 1), ("P", "ball", N_PROBES)),
            _axioms,
            _fixed({}, 1e-9),
            "gyrogroup axioms, loop property, gyrator identity",
        ),
        Suite(
            "table1",
            (("u", "ball", 1), ("v", "ball", 1), ("w", "ball", 1), ("P", "ball", N_PROBES)),
            _table1,
            _fixed({}, 1e-9),
            "cancellation, inverse of sum, gluing, even property, inversive symmetry",
        ),
        Suite(
            "inequality",
            (("u", "ball", 1), ("v", "ball", 1)),
            _inequality,
            _fixed({}, 1e-12),
            "norm bounds on u ⊕ v",
        ),
        Suite(
            "gyronorm",
            (("x", "ball", 1), ("y", "ball", 1), ("u", "ball", 1), ("v", "ball", 1)),
            _gyronorm,
            _fixed({"gyration_invariance": 1e-10}, 1e-12),
            "arctan norm: positivity, symmetry, subadditivity, gyration invariance",
        ),
        Suite(
            "dT_metric",
            (("x", "ball", 1), ("y", "ball", 1), ("z", "ball", 1)),
            _dT_metric,
            _fixed(
                {
                    "origin_arctan": np.finfo(float).eps,
                    "poincare_consistency": 1e-9,
                    "positivity": 0.5,
                    "bounded": 0.5,
                    "origin_bound": 0.5,
                },
                1e-12,
            ),
            "d_T metric axioms and bounds, Poincaré cross-formula",
        ),
        Suite(
            "topology",
            (("u", "ball", 1), ("d", "vec", 1), ("s", "unif", 1)),
            _topology,
            _fixed({f"containment_eps{e:g}": 0.5 for e in TOPOLOGY_EPS}, 1e-12),
            "d_T ball of radius arctan(tanh eps) sits inside the d_M ball of radius eps",
        ),
        Suite(
            "backend_equiv",
            (("u", "ball", 1), ("v", "ball", 1), ("w", "ball", 1)),
            _backend_equiv,
            _backend_tols,
            "direct vs Clifford addition, gyrator vs rotor gyration",
        ),
        Suite(
            "isometry_group",
            (
                ("u1", "ball", 1),
                ("A1", "orth", 1),
                ("u2", "ball", 1),
                ("A2", "orth", 1),
                ("u3", "ball", 1),
                ("A3", "orth", 1),
                ("x", "ball", 1),
                ("y", "ball", 1),
                ("P", "ball", N_PROBES),
            ),
            _isometry_group,
            _fixed(
                {
                    "compose_pointwise": 1e-10,
                    "inverse": 1e-10,
                    "associativity": 1e-9,
                    "identity_element": 1e-10,
                    "symmetry_fixed_point": 1e-12,
                    "symmetry_involution": 1e-10,
                    "symmetry_unique_fixed_point": 0.5,
                    "transport": 1e-12,
                    "metric_preservation": 1e-9,
                    "orthogonal_automorphism": 1e-10,
                    "gyration_isometry": 1e-9,
                    "gyration_automorphism": 1e-10,
                    "uniqueness": 0.5,
                },
                1e-10,
            ),
            "gyrosemidirect group law, inverses, symmetries, transports",
        ),
        Suite(
            "clifford_core",
            (
                ("u", "ball", 1),
                ("v", "ball", 1),
                ("w", "ball", 1),
                ("x", "ball", 1),
                ("g", "vec", 4),
                ("a", "mv", 1),
                ("b", "mv", 1),
                ("c", "mv", 1),
            ),
            _clifford_core,
            _fixed(
                {
                    "involutions_exact": 0.0,
                    "gyration_orthogonal": 1e-10,
                    "sandwich_norm": 1e-10,
                    "sandwich_inner_product": 1e-10,
                },
                1e-12,
            ),
            "defining relations, norm form, involutions, sandwich orthogonality",
        ),
    )
}

_NOTES = {"isometry_group": _isometry_notes}


def _resolve_tolerances(suite, cfg, names):
    specific, default = suite.tolerances(cfg)
    tols = {k: specific.get(k, default) for k in names}
    if suite.name in cfg.tolerances:
        tols = {k: float(cfg.tolerances[suite.name]) for k in names}
    for k in names:
        key = f"{suite.name}.{k}"
        if key in cfg.tolerances:
            tols[k] = float(cfg.tolerances[key])
    return tols


def _run_block(suite, cfg, dim, block):
    start = block * BLOCK
    nb = min(BLOCK, cfg.samples - start)
    width = _layout_width(suite.layout, dim)
    U = _block_uniforms(cfg.seed, suite.name, dim, block, nb, width)
    inputs = _materialize(U, suite.layout, dim, cfg.r_max)
    with np.errstate(all="ignore"):
        residuals = suite.checks(inputs, dim)
        notes = _NOTES[suite.name](inputs, dim) if suite.name in _NOTES else {}
    return start, inputs, residuals, notes


def _as_finite(r):
    return np.where(np.isnan(r), np.inf, r)


def _run_dim(suite, cfg, dim, workers):
    n_blocks = -(-cfg.samples // BLOCK)
    job = lambda b: _run_block(suite, cfg, dim, b)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(n_blocks)))
    else:
        results = [job(b) for b in range(n_blocks)]

    names = list(results[0][2])
    tols = _resolve_tolerances(suite, cfg, names)
    checks = {k: {"tolerance": tols[k], "max_residual": 0.0, "failures": 0} for k in names}
    failures = 0
    witness = None
    note_acc: dict = {}
    for start, inputs, residuals, notes in results:
        bad_by_check = {}
        for k in names:
            r = _as_finite(np.asarray(residuals[k], dtype=np.float64))
            bad = ~(r <= tols[k])
            bad_by_check[k] = (r, bad)
            checks[k]["max_residual"] = max(checks[k]["max_residual"], float(np.max(r)))
            checks[k]["failures"] += int(np.count_nonzero(bad))
        fail_any = np.logical_or.reduce([b for _, b in bad_by_check.values()])
        failures += int(np.count_nonzero(fail_any))
        # blocks arrive in index order, so the first failing block holds the earliest sample
        if witness is None and np.any(fail_any):
            i = int(np.flatnonzero(fail_any)[0])
            k = next(k for k in names if bad_by_check[k][1][i])
            witness = {
                "index": start + i,
                "check": k,
                "residual": float(bad_by_check[k][0][i]),
                "inputs": {n: v[i].tolist() for n, v in inputs.items()},
            }
        for key, vals in notes.items():
            f = min if key.endswith("_min") else max
            v = float(f(vals))
            note_acc[key] = v if key not in note_acc else f(note_acc[key], v)
    return VerifyReport(
        suite=suite.name,
        dim=dim,
        samples=cfg.samples,
        failures=failures,
        max_residual=max(c["max_residual"] for c in checks.values()),
        first_failure_witness=witness,
        checks=checks,
        notes=note_acc,
    )


def run_suite(name: str, cfg: VerifyConfig | None = None, workers: int = 1) -> list[VerifyReport]:
    """Run one registered suite for every dimension in ``cfg``.

    Returns one :class:`VerifyReport` per dimension, in ``cfg.dims`` order.
    ``workers`` changes only the execution schedule, never the report.
    """
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; registered: {', '.join(SUITES)}")
    cfg = cfg or VerifyConfig()
    return [_run_dim(SUITES[name], cfg, d, workers) for d in cfg.dims]


def run_all(cfg: VerifyConfig | None = None, workers: int = 1) -> list[VerifyReport]:
    cfg = cfg or VerifyConfig()
    reports = []
    for name in SUITES:
        reports.extend(run_suite(name, cfg, workers))
    return reports


def replay_witness(suite: str, witness: dict) -> float:
    """Recompute the residual of a reported failure from its recorded inputs."""
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}")
    inputs = {k: np.asarray(v, dtype=np.float64)[None, ...] for k, v in witness["inputs"].items()}
    dim = inputs[SUITES[suite].layout[0][0]].shape[-1]
    with np.errstate(all="ignore"):
        res = SUITES[suite].checks(inputs, dim)
    return float(_as_finite(np.asarray(res[witness["check"]], dtype=np.float64))[0])


def format_table(reports: list[VerifyReport]) -> str:
    rows = [("suite", "dim", "samples", "failures", "max_residual", "status")]
    for r in reports:
        rows.append(
            (r.suite, str(r.dim), str(r.samples), str(r.failures), f"{r.max_residual:.3e}",
             "PASS" if r.passed else "FAIL")
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)


# ---------------------------------------------------------------------------
# benchmarks
# ---------------------------------------------------------------------------


def _throughput(fn, n_ops, min_time=0.05):
    reps = 0
    t0 = time.perf_counter()
    while True:
        fn()
        reps += 1
        elapsed = time.perf_counter() - t0
        if elapsed >= min_time:
            return reps * n_ops / elapsed


def bench_backends(
    cfg: VerifyConfig | None = None,
    clifford_max_dim: int = DIM_MAX,
    chain_length: int = 1000,
) -> list[dict]:
    """Throughput of both addition and both gyration backends, plus drift.

    Throughput is measured on a batch of ``cfg.samples`` points. Drift runs a
    chain of ``chain_length`` compositions on each backend from the same start
    and records the largest gap between the backends along the way: for
    addition the round trip ``x -> ⊖r ⊕ (r ⊕ x)``, for gyration
    ``x -> gyr[a, b] x``. Clifford rows are omitted above ``clifford_max_dim``.
    """
    cfg = cfg or VerifyConfig(samples=2000)
    rows = []
    for dim in cfg.dims:
        rng = np.random.Generator(np.random.Philox(key=_key(cfg.seed, "bench", dim)))
        draw = lambda k: ball_from_uniforms(rng.random((k, dim)), rng.random(k), cfg.r_max)  # noqa: E731
        u, v, w = draw(cfg.samples), draw(cfg.samples), draw(cfg.samples)
        steps = draw(chain_length)
        ga, gb = draw(chain_length), draw(chain_length)
        start = draw(1)[0]
        use_cl = dim <= clifford_max_dim

        add_drift = gyr_drift = None
        if use_cl:
            xd = xc = start
            xg = xr = start
            add_drift = gyr_drift = 0.0
            for k in range(chain_length):
                r = steps[k]
                xd = mobius_add(-r, mobius_add(r, xd, "direct"), "direct")
                xc = mobius_add(-r, mobius_add(r, xc, "clifford"), "clifford")
                add_drift = max(add_drift, float(np.max(np.abs(xd - xc))))
                xg = gyration(ga[k], gb[k], xg, "gyrator")
                xr = gyration(ga[k], gb[k], xr, "rotor")
                gyr_drift = max(gyr_drift, float(np.max(np.abs(xg - xr))))

        for backend in ("direct", "clifford"):
            if backend == "clifford" and not use_cl:
                continue
            ops = _throughput(lambda: mobius_add(u, v, backend), cfg.samples)
            rows.append(
                {"dim": dim, "backend": backend, "operation": "add", "ops_per_sec": ops, "drift": add_drift}
            )
        for backend in ("gyrator", "rotor"):
            if backend == "rotor" and not use_cl:
                continue
            ops = _throughput(lambda: gyration(u, v, w, backend), cfg.samples)
            rows.append(
                {"dim": dim, "backend": backend, "operation": "gyration", "ops_per_sec": ops, "drift": gyr_drift}
            )
    return rows
