"""Exception hierarchy shared by all stabring modules."""


class StabringError(Exception):
    """Base class for every error raised by the library."""


class InputError(StabringError, ValueError):
    """Malformed or inconsistent input (maps to CLI exit code 3)."""


class NotPrimeError(InputError):
    pass


class ReducibleModulusError(InputError):
    pass


class DegreeMismatchError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class ShapeMismatchError(InputError):
    pass


class FieldMismatchError(InputError):
    pass


class OrderMismatchError(InputError):
    pass


class ModeMismatchError(InputError):
    pass


class OutOfRangeError(InputError):
    pass


class NotNilpotentError(InputError):
    pass


class SingularMatrixError(InputError):
    pass


class InvalidAlgebraError(InputError):
    pass


class PrecheckFailedError(InputError):
    pass


class NotProjectiveFreeError(InputError):
    pass


class BudgetExceededError(StabringError):
    """A search would exceed its configured candidate or time budget."""


class CriteriaDisagreeError(StabringError, AssertionError):
    """Two independent routes to the same answer disagreed."""
