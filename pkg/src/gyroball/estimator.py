"""scikit-learn adapter: a ball isometry as a transformer.

``fit`` validates that the training rows are points of the ball and freezes
the isometry; ``transform`` applies it and ``inverse_transform`` undoes it.
The isometry is given by its canonical pair or, with ``center``, chosen as the
transport that sends a point to the origin.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_ball
from .exceptions import DimensionMismatch
from .isometry import Isometry, apply, inverse, transport


class IsometryTransformer(TransformerMixin, BaseEstimator):
    """Apply ``x -> u ⊕ tau(x)`` row-wise.

    Parameters
    ----------
    translation : array-like of shape (n_features,), default=None
        The translation part ``u``. ``None`` means the origin.
    rotation : array-like of shape (n_features, n_features), default=None
        The orthogonal part ``tau``. ``None`` means the identity.
    center : {None, "first"} or array-like, default=None
        When set, overrides ``translation`` and ``rotation`` with the
        transport carrying a center point to the origin. ``"first"`` uses the
        first training row; an array is used as given.

    Attributes
    ----------
    isometry_ : Isometry
    n_features_in_ : int
    """

    def __init__(self, translation=None, rotation=None, center=None):
        self.translation = translation
        self.rotation = rotation
        self.center = center

    def _validate(self, X, reset):
        X = check_array(X, dtype=np.float64, ensure_min_features=1)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"X has {X.shape[1]} features, transformer was fitted with {self.n_features_in_}"
            )
        return check_ball(X, "X")

    def fit(self, X, y=None):
        X = self._validate(X, reset=True)
        n = X.shape[1]
        if self.center is not None:
            if isinstance(self.center, str):
                if self.center != "first":
                    raise ValueError(f"unknown center {self.center!r}; use 'first' or a point")
                c = X[0]
            else:
                c = np.asarray(self.center, dtype=np.float64)
            self.isometry_ = transport(c, np.zeros(n))
            return self
        u = np.zeros(n) if self.translation is None else self.translation
        tau = np.eye(n) if self.rotation is None else self.rotation
        iso = Isometry(u, tau)
        if iso.dim != n:
            raise DimensionMismatch(f"isometry has dim {iso.dim}, X has {n} features")
        self.isometry_ = iso
        return self

    def transform(self, X):
        check_is_fitted(self, "isometry_")
        return apply(self.isometry_, self._validate(X, reset=False))

    def inverse_transform(self, X):
        check_is_fitted(self, "isometry_")
        return apply(inverse(self.isometry_), self._validate(X, reset=False))
