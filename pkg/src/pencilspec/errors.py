"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): input that violates a
precondition (``ValidationError``) and numerical procedures that could not deliver a
certified answer (``NumericalError``).
"""


class PencilError(Exception):
    """Base class for all package errors."""


class ValidationError(PencilError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(PencilError, ArithmeticError):
    """A numerical procedure failed to produce a certified result."""


class InternalConsistencyError(PencilError, AssertionError):
    """Two independent routes to the same quantity disagree."""


class RankDeficient(ValidationError):
    pass


class DoubleRootRegime(ValidationError):
    """The characteristic equation has a double root; the exponential basis expansion does not apply."""


class ZeroEigenvalueSupplied(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class NotDecomposable(ValidationError):
    """Plücker vector fails the quadratic relation, so it is not the minor vector of any 2x4 matrix."""


class OrderUnsupported(ValidationError):
    pass


class Overflow(NumericalError):
    """Exponent guard tripped: exp() would overflow double precision."""


class BoundaryZero(NumericalError):
    pass


class NonConvergent(NumericalError):
    pass


class MultiplicityCapExceeded(NumericalError):
    pass


class NewtonDiverged(NumericalError):
    pass


class RankDeficientSystem(NumericalError):
    pass


class RegionExhausted(NumericalError):
    pass
