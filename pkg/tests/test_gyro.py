import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gyroball import (
    Gyration,
    gyration,
    gyration_matrix,
    gyration_rotor,
    mobius_add,
    mobius_add_clifford,
    mobius_add_direct,
    mobius_neg,
    project_into_ball,
    random_ball,
)
from gyroball.clifford import eta
from gyroball.exceptions import DimensionMismatch, NotInBall, NumericalEscape
from gyroball.gyro import mobius_sub
from strategies import dim_and_points

BACKENDS = ("direct", "clifford")


def scalar_oracle(a, b):
    return (a + b) / (1 + a * b)


def mp_mobius_add(u, v):
    uv = mpmath.fsum(p * q for p, q in zip(u, v))
    uu = mpmath.fsum(p * p for p in u)
    vv = mpmath.fsum(q * q for q in v)
    d = 1 + 2 * uv + uu * vv
    return [((1 + 2 * uv + vv) * p + (1 - uu) * q) / d for p, q in zip(u, v)]


def mp_gyration(u, v, w):
    with mpmath.workdps(60):
        U, V, W = ([mpmath.mpf(float(t)) for t in x] for x in (u, v, w))
        p = mp_mobius_add(U, V)
        r = mp_mobius_add([-t for t in p], mp_mobius_add(U, mp_mobius_add(V, W)))
        return np.array([float(t) for t in r])


# ---------------------------------------------------------------- addition


@pytest.mark.parametrize("backend", BACKENDS)
def test_addition_examples(backend):
    np.testing.assert_array_equal(mobius_add([0.0, 0.0], [0.3, 0.4], backend), [0.3, 0.4])
    np.testing.assert_allclose(mobius_add([-0.3, 0.0], [0.3, 0.0], backend), [0, 0], atol=1e-16)
    np.testing.assert_allclose(
        mobius_add([0.5, 0.0], [0.3, 0.0], backend), [0.6956521739130435, 0.0], rtol=1e-15
    )
    np.testing.assert_allclose(
        mobius_add([0.5, 0.0], [-0.3, 0.0], backend), [0.23529411764705882, 0.0], rtol=1e-15
    )


def test_direct_inverse_is_exact():
    x = np.array([0.123, -0.456, 0.789]) / 1.2
    assert np.all(mobius_add_direct(-x, x) == 0)


@given(st.floats(-0.99, 0.99), st.floats(-0.99, 0.99), st.integers(1, 6), st.integers(0, 5))
def test_collinear_addition_matches_scalar_formula(a, b, dim, axis):
    axis %= dim
    u = np.zeros(dim)
    v = np.zeros(dim)
    u[axis], v[axis] = a, b
    for backend in BACKENDS:
        got = mobius_add(u, v, backend)
        assert got[axis] == pytest.approx(scalar_oracle(a, b), rel=1e-13, abs=1e-15)
        assert np.count_nonzero(np.delete(got, axis)) == 0


@given(dim_and_points(2, max_dim=8))
def test_backends_agree(data):
    _, (u, v) = data
    np.testing.assert_allclose(mobius_add_direct(u, v), mobius_add_clifford(u, v), rtol=0, atol=1e-12)


@given(dim_and_points(2, max_dim=8))
def test_neg_is_the_inverse(data):
    _, (u, v) = data
    np.testing.assert_array_equal(mobius_neg(v), -v)
    assert np.linalg.norm(mobius_add(mobius_neg(v), v)) <= 1e-15
    np.testing.assert_allclose(mobius_sub(u, v), mobius_add(u, -v))


def test_addition_broadcasts_over_stacks():
    rng = np.random.default_rng(0)
    u = random_ball(rng, (4, 3), 5)
    v = random_ball(rng, 3, 5)
    out = mobius_add(u, v)
    assert out.shape == (4, 3, 5)
    np.testing.assert_allclose(out[2, 1], mobius_add(u[2, 1], v[1]))


def test_addition_domain_errors():
    with pytest.raises(NotInBall):
        mobius_add([1.0, 0.0], [0.1, 0.0])
    with pytest.raises(DimensionMismatch):
        mobius_add([0.1, 0.0], [0.1, 0.0, 0.0])
    with pytest.raises(ValueError):
        mobius_add([0.1], [0.1], backend="nope")
    with pytest.raises(ValueError):
        mobius_add([np.nan], [0.1])


def test_result_on_the_boundary_raises():
    a = np.array([1.0 - 1e-9, 0.0])
    with pytest.raises(NumericalEscape):
        mobius_add(a, a)
    # unchecked mode hands back the raw value instead
    assert np.linalg.norm(mobius_add(a, a, check=False)) >= 1.0 - 1e-12


# ---------------------------------------------------------------- gyrations


@pytest.mark.parametrize("backend", ("gyrator", "rotor"))
def test_gyration_trivial_cases(backend):
    u, v, w = np.array([0.3, 0.2]), np.array([-0.1, 0.6]), np.array([0.4, -0.4])
    np.testing.assert_allclose(gyration(u, np.zeros(2), w, backend), w, atol=1e-15)
    np.testing.assert_allclose(gyration(np.zeros(2), v, w, backend), w, atol=1e-15)
    np.testing.assert_allclose(gyration(u, 2 * u, w, backend), w, atol=1e-15)
    np.testing.assert_allclose(gyration(u, -u, w, backend), w, atol=1e-15)


@pytest.mark.parametrize("backend", ("gyrator", "rotor"))
def test_gyration_hand_fixture(backend):
    w = np.array([0.9, 0.0])
    got = gyration([0.5, 0.0], [0.0, 0.5], w, backend)
    np.testing.assert_allclose(got / 0.9, [15 / 17, -8 / 17], rtol=0, atol=1e-15)


def test_rotor_examples():
    np.testing.assert_array_equal(gyration_rotor([0.0, 0.0], [0.1, 0.2]).mv.coeffs, [1, 0, 0, 0])
    r = gyration_rotor([0.5, 0.0], [0.0, 0.5])
    expected = np.array([1.0, 0.0, 0.0, -0.25]) / np.sqrt(1.0625)
    np.testing.assert_allclose(r.mv.coeffs, expected, atol=1e-15)


@given(dim_and_points(2, max_dim=8))
def test_rotor_has_unit_norm_form(data):
    _, (u, v) = data
    assert eta(gyration_rotor(u, v).mv) == pytest.approx(1.0, abs=1e-12)


def test_matrix_examples():
    np.testing.assert_allclose(
        gyration_matrix([0.5, 0.0], [0.0, 0.5]),
        [[15 / 17, 8 / 17], [-8 / 17, 15 / 17]],
        rtol=0,
        atol=1e-12,
    )
    np.testing.assert_allclose(gyration_matrix([0.5, 0.0, 0.0], [-0.3, 0.0, 0.0]), np.eye(3), atol=1e-15)


@given(dim_and_points(3, max_dim=8))
def test_matrix_is_orthogonal_and_matches_both_backends(data):
    dim, (u, v, w) = data
    m = gyration_matrix(u, v)
    np.testing.assert_allclose(m.T @ m, np.eye(dim), atol=1e-10)
    np.testing.assert_allclose(m @ w, gyration(u, v, w, "rotor"), atol=1e-12)
    np.testing.assert_allclose(m @ w, gyration(u, v, w, "gyrator"), atol=1e-12)


@given(dim_and_points(3, r_max=1 - 1e-6, min_dim=2, max_dim=5))
def test_gyrator_route_is_accurate_near_the_boundary(data):
    _, (u, v, w) = data
    ref = mp_gyration(u, v, w)
    np.testing.assert_allclose(gyration(u, v, w, "gyrator", check=False), ref, rtol=0, atol=1e-14)
    np.testing.assert_allclose(gyration(u, v, w, "rotor", check=False), ref, rtol=0, atol=1e-14)


def test_gyration_object():
    g = Gyration(np.array([0.5, 0.0]), np.array([0.0, 0.5]))
    w = np.array([0.1, 0.2])
    np.testing.assert_allclose(g(w), g.matrix() @ w, atol=1e-15)
    np.testing.assert_allclose(g(w, backend="rotor"), g.rotor().apply(w), atol=1e-15)
    with pytest.raises(ValueError):
        gyration([0.1], [0.1], [0.1], backend="nope")


# ---------------------------------------------------------------- sampling and repair


def test_random_ball_respects_radius():
    rng = np.random.default_rng(1)
    pts = random_ball(rng, 5000, 4, r_max=0.5)
    r = np.linalg.norm(pts, axis=-1)
    assert r.max() <= 0.5
    # radius r_max * s**(1/n): median of r**n is (r_max**n)/2
    assert np.median(r**4) == pytest.approx(0.5**4 / 2, rel=0.1)
    with pytest.raises(ValueError):
        random_ball(rng, 3, 2, r_max=1.0)


def test_project_into_ball():
    x = np.array([[3.0, 4.0], [0.1, 0.0]])
    out = project_into_ball(x)
    assert np.linalg.norm(out[0]) < 1.0 - 1e-12 + 1e-16
    np.testing.assert_allclose(out[0] / np.linalg.norm(out[0]), [0.6, 0.8])
    np.testing.assert_array_equal(out[1], x[1])
