"""Exception hierarchy.

Every error raised by the package derives from :class:`GyroballError`, which
is itself a ``ValueError`` so callers that already guard numeric input with
``except ValueError`` keep working.
"""


class GyroballError(ValueError):
    """Base class for all package errors."""


class DimensionMismatch(GyroballError):
    """Operands live in spaces of different dimension."""


class DimensionTooLarge(GyroballError):
    """Requested Clifford algebra exceeds the dense-storage cap."""


class NotInBall(GyroballError):
    """A vector that must lie in the open unit ball does not."""


class NumericalEscape(GyroballError):
    """A result that must stay inside the ball was pushed onto or past the boundary by rounding."""


class NonScalarEta(GyroballError):
    """``a * conj(a)`` has non-scalar mass, so the norm form is undefined for ``a``."""


class NegativeEta(GyroballError):
    """The norm form is negative, so the modulus is undefined."""


class NotAVector(GyroballError):
    """A multivector carries mass outside grade 1."""


class SingularDenominator(GyroballError):
    """The element to be inverted has (numerically) vanishing norm form."""


class NotOrthogonal(GyroballError):
    """A matrix fails the orthogonality check."""


class NonPositiveEps(GyroballError):
    """A radius argument must be strictly positive."""


class UnknownSuite(GyroballError):
    """No verification suite is registered under the given name."""
