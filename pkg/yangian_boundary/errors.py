"""
Exception hierarchy for the toolkit.

Exceptions signal ill-posed requests. A check that runs and fails is reported
through a CheckReport with passed=False, not raised.
"""


class ToolkitError(Exception):
    """Base class for every error raised by yangian_boundary."""


class GradingError(ToolkitError, ValueError):
    """Invalid algebra descriptor (odd n, m = n = 0, bad theta0)."""


class ParseError(ToolkitError, ValueError):
    """A parameter or rational-function string could not be parsed."""


class PoleError(ToolkitError, ZeroDivisionError):
    """Evaluation of a rational function at one of its poles."""


class InadmissibleFamilyError(ToolkitError, ValueError):
    """The requested K-matrix family does not exist for this algebra."""


class ConstraintViolationError(ToolkitError, ValueError):
    """Family parameters are off the family's algebraic constraint."""


class NotOrthogonalError(ToolkitError, ValueError):
    """Conjugating matrix U does not satisfy U U^t = 1."""


class BudgetExceededError(ToolkitError, MemoryError):
    """The requested chain does not fit in the configured memory budget."""


class RootCollisionError(ToolkitError, ValueError):
    """Two Bethe roots of the same sea coincide."""


class SeriesMismatchError(ToolkitError, ValueError):
    """Series tag, rank or boundary do not fit together."""


class QuadratureError(ToolkitError, ArithmeticError):
    """Adaptive quadrature did not converge or the integrand does not decay."""


class GammaPoleError(ToolkitError, ZeroDivisionError):
    """A Gamma factor of a closed-form amplitude sits on a pole."""
