"""Möbius gyrogroup on the unit ball, its Clifford backend, the bounded
arctan metric and the isometry group of the ball."""

from . import clifford, gyro, harness, isometry, metric
from .clifford import Multivector, Rotor
from .exceptions import (
    DimensionMismatch,
    DimensionTooLarge,
    GyroballError,
    NegativeEta,
    NonPositiveEps,
    NonScalarEta,
    NotAVector,
    NotInBall,
    NotOrthogonal,
    NumericalEscape,
    SingularDenominator,
    UnknownSuite,
)
from .gyro import (
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
from .isometry import (
    Isometry,
    compose,
    gyrosemidirect_product,
    inverse,
    isometry_equal,
    symmetry_at,
    transport,
)
from .metric import (
    MetricKind,
    dT_radius_for_dM,
    distance,
    gyrometric,
    metric_T,
    norm_bounds,
    norm_T,
    poincare_metric,
    rapidity_metric,
)

from .estimator import IsometryTransformer

__version__ = "0.1.0"
