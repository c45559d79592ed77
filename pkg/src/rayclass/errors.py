"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class RayClassError(Exception):
    """Base class for all library errors."""


class DomainError(RayClassError, ValueError):
    """An input violates a mathematical precondition."""


class UnsupportedFieldError(DomainError):
    """The field is Q(sqrt(-1)) or Q(sqrt(-3)), where the x-coordinate model degenerates."""


class PrecisionError(RayClassError, ArithmeticError):
    """The requested accuracy cannot be reached with the available precision."""


class PoleError(RayClassError, ZeroDivisionError):
    """Evaluation point lies on a pole (a lattice point)."""


class InternalError(RayClassError, RuntimeError):
    """An invariant that should be guaranteed by construction failed."""
