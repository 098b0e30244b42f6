"""Exception hierarchy.

Validation problems (bad shapes, bad orderings) derive from ``ValueError``;
numeric failures (singular evaluations, singular pencils) derive from
``ArithmeticError`` so callers can separate the two with plain ``except``.
"""


class FiedlerError(Exception):
    """Base class for all package errors."""


class ValidationError(FiedlerError, ValueError):
    """Input data violates a structural invariant."""


class PreconditionError(ValidationError):
    """An operation was called outside its domain."""


class ImproperPermutationError(ValidationError):
    """A generalized Fiedler permutation is not proper."""


class UnsupportedDegreeError(ValidationError):
    """The requested construction does not exist for this degree."""


class SingularityError(FiedlerError, ArithmeticError):
    """A matrix that must be inverted is singular to working precision.

    The offending evaluation point is kept in ``point`` so callers can
    resample.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class SingularSystemError(SingularityError):
    """The system matrix (or pencil) is singular for every sampled point."""


class SpuriousVectorError(FiedlerError, ArithmeticError):
    """A projected null vector vanished numerically."""
