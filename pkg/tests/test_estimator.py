import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from gyroball import IsometryTransformer, metric_T
from gyroball.exceptions import DimensionMismatch, NotInBall, NotOrthogonal
from gyroball.isometry import random_orthogonal


@pytest.fixture
def X():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((30, 3))
    return x * (rng.uniform(0, 0.9, 30) / np.linalg.norm(x, axis=1))[:, None]


def test_default_is_identity(X):
    t = IsometryTransformer().fit(X)
    np.testing.assert_allclose(t.transform(X), X, atol=1e-16)
    assert t.n_features_in_ == 3


def test_round_trip_and_metric_preservation(X):
    rng = np.random.default_rng(1)
    t = IsometryTransformer(
        translation=[0.2, -0.3, 0.1], rotation=random_orthogonal(rng.standard_normal((3, 3)))
    )
    Y = t.fit_transform(X)
    np.testing.assert_allclose(t.inverse_transform(Y), X, atol=1e-12)
    np.testing.assert_allclose(metric_T(Y[:-1], Y[1:]), metric_T(X[:-1], X[1:]), atol=1e-12)


def test_center_first_row_moves_to_origin(X):
    t = IsometryTransformer(center="first").fit(X)
    np.testing.assert_allclose(t.transform(X[:1]), 0.0, atol=1e-15)
    t = IsometryTransformer(center=X[5]).fit(X)
    np.testing.assert_allclose(t.transform(X[5:6]), 0.0, atol=1e-15)
    with pytest.raises(ValueError):
        IsometryTransformer(center="median").fit(X)


def test_params_clone_and_pipeline(X):
    t = IsometryTransformer(translation=[0.1, 0.0, 0.0])
    assert t.get_params() == {"translation": [0.1, 0.0, 0.0], "rotation": None, "center": None}
    c = clone(t).set_params(center="first")
    assert c.center == "first" and t.center is None
    pipe = make_pipeline(IsometryTransformer(center="first"), IsometryTransformer(translation=[0.5, 0, 0]))
    out = pipe.fit_transform(X)
    np.testing.assert_allclose(out[0], [0.5, 0, 0], atol=1e-15)


def test_validation_errors(X):
    with pytest.raises(NotFittedError):
        IsometryTransformer().transform(X)
    with pytest.raises(NotInBall):
        IsometryTransformer().fit(X * 10)
    with pytest.raises(NotOrthogonal):
        IsometryTransformer(rotation=np.ones((3, 3))).fit(X)
    with pytest.raises(DimensionMismatch):
        IsometryTransformer(translation=[0.1, 0.2]).fit(X)
    t = IsometryTransformer().fit(X)
    with pytest.raises(DimensionMismatch):
        t.transform(X[:, :2])
