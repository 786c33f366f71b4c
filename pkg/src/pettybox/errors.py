"""Exception hierarchy shared by all pettybox modules.

The CLI maps these onto process exit codes, so library code should raise
the most specific class that applies.
"""


class ToolkitError(Exception):
    """Base class for all pettybox errors."""


class InputError(ToolkitError):
    """Invalid input data or a violated operation precondition."""


class NonGenericPointError(InputError):
    """A base-point query landed on a cell boundary where sections jump."""


class UnsupportedDirectionError(InputError):
    """The requested direction is outside the set kind's supported frames."""


class ConditionViolationError(InputError):
    """Lateral boundary mass is positive in the requested frame.

    Raised by checks that require a vanishing boundary measure orthogonal
    to the symmetrization direction.  Carries the offending mass.
    """

    def __init__(self, message: str, mass: float = 0.0):
        super().__init__(message)
        self.mass = float(mass)


class NumericalError(ToolkitError):
    """A numerical procedure failed to reach its stated tolerance."""


class PathologicalInputError(NumericalError):
    """A resampling loop exhausted its draw budget on one input."""


class BudgetError(ToolkitError):
    """An iteration budget ran out before the stop rule was met."""
